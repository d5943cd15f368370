import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from exactcat.fixtures import dual_numbers, module_universe

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fx():
    return dual_numbers()


@pytest.fixture(scope="session")
def universe(fx):
    return module_universe(fx)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def workspace():
    from exactcat.workspace import load_workspace

    return load_workspace(FIXTURES / "dual_numbers.ws")


def fixture_morphisms(fx, ws) -> list:
    """The workspace morphisms plus identities and zero maps between the basic modules."""
    from exactcat.modcat import ModuleMorphism

    out = list(ws.morphisms.values())
    basics = [fx.zero, fx.k, fx.A, ws.module("k2"), ws.module("Ak")]
    out += [ModuleMorphism.identity(m) for m in basics]
    out += [ModuleMorphism.zero(m, n) for m in basics for n in basics if m.dim and n.dim]
    return out


# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail})")

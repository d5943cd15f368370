"""Standard small objects over the dual numbers F_2[x]/(x^2), plus random generators.

``A`` is the regular module in the basis ``(1, x)`` and ``k`` the simple
module; the socle ``k -> A`` sends 1 to ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .chaincx import Complex, disk, sphere
from .cotorsion import extension_from_cocycle, relative_projective_cover
from .lifting import Filtration, MorphismSet
from .modcat import (
    Algebra,
    ExactStructure,
    Module,
    ModuleMorphism,
    ShortExactSequence,
    cokernel,
    direct_sum,
    hom_space,
)

__all__ = [
    "DualNumbers",
    "dual_numbers",
    "random_invertible",
    "random_module",
    "random_morphism",
    "random_complex",
    "random_extension",
    "random_filtration",
    "module_universe",
    "complex_universe",
]


@dataclass(frozen=True, eq=False)
class DualNumbers:
    algebra: Algebra
    A: Module
    k: Module
    zero: Module
    socle: ModuleMorphism  # k -> A
    quotient: ModuleMorphism  # A -> k
    times_x: ModuleMorphism  # A -> A
    zero_to_A: ModuleMorphism

    def socle_set(self, e: ExactStructure | None = None) -> MorphismSet:
        return MorphismSet([self.socle], structure=e or ExactStructure.abelian(), names=("socle",))

    def full_set(self, e: ExactStructure | None = None) -> MorphismSet:
        return MorphismSet(
            [self.socle, self.zero_to_A], structure=e or ExactStructure.abelian(), names=("socle", "0->A")
        )

    def free_set(self) -> MorphismSet:
        return MorphismSet([self.zero_to_A], names=("0->A",))

    def sum(self, *ms: Module, name: str = "") -> Module:
        return direct_sum(list(ms), self.algebra)[0].named(name)

    @property
    def G(self) -> ExactStructure:
        """The structure relative to ``A + k``."""
        return ExactStructure.relative([self.A, self.k])


def dual_numbers(p: int = 2) -> DualNumbers:
    R = Algebra.truncated_polynomial(p, 2, name=f"F_{p}[x]/(x^2)")
    A = R.regular_module("A")
    k = Module(R, [[[1]], [[0]]], name="k")
    z = R.zero_module()
    return DualNumbers(
        algebra=R,
        A=A,
        k=k,
        zero=z,
        socle=ModuleMorphism(k, A, [[0], [1]], name="socle"),
        quotient=ModuleMorphism(A, k, [[1, 0]], name="quotient"),
        times_x=ModuleMorphism(A, A, [[0, 0], [1, 0]], name="x"),
        zero_to_A=ModuleMorphism(z, A, la.zeros(2, 0), name="0->A"),
    )


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        t = rng.integers(0, p, size=(n, n))
        if la.is_invertible(t, p):
            return t.astype(la.DTYPE)


def random_module(rng: np.random.Generator, fx: DualNumbers, max_dim: int = 3, conjugate: bool = True) -> Module:
    """A random ``A^a + k^b`` of dimension at most ``max_dim`` in a random basis."""
    while True:
        a = int(rng.integers(0, max_dim // 2 + 1))
        b = int(rng.integers(0, max_dim - 2 * a + 1))
        if 2 * a + b <= max_dim:
            break
    parts = [fx.A] * a + [fx.k] * b
    if not parts:
        return fx.zero
    m = direct_sum(parts, fx.algebra)[0]
    if conjugate and m.dim:
        m, _ = m.change_basis(random_invertible(m.dim, m.p, rng))
    return m.named(f"A^{a}+k^{b}")


def random_morphism(rng: np.random.Generator, m: Module, n: Module) -> ModuleMorphism:
    H = hom_space(m, n)
    if H.shape[0] == 0:
        return ModuleMorphism.zero(m, n)
    c = rng.integers(0, m.p, size=H.shape[0])
    return ModuleMorphism(m, n, np.einsum("t,tab->ab", c, H) % m.p, check=False)


def random_extension(
    rng: np.random.Generator, m: Module, n: Module, e: ExactStructure | None = None
) -> ShortExactSequence:
    """A random conflation ``n >-> E ->> m``: random cocycle, random basis of E."""
    cover = relative_projective_cover(m, e)
    c = random_morphism(rng, cover.left, n)
    s = extension_from_cocycle(c, cover)
    E = s.middle
    if not E.dim:
        return s
    _, iso = E.change_basis(random_invertible(E.dim, E.p, rng))
    back = iso.inverse()
    return ShortExactSequence(back @ s.inflation, s.deflation @ iso)


def random_filtration(rng: np.random.Generator, algebra: Algebra, cokernels: list[Module]) -> Filtration:
    """``0 = X_0 >-> X_1 >-> ...`` where step j is a random extension of ``cokernels[j]`` by X_j."""
    start = x = algebra.zero_module()
    steps = []
    for c in cokernels:
        s = random_extension(rng, c, x)
        steps.append(s)
        x = s.middle
    return Filtration(start, tuple(steps))


def random_complex(rng: np.random.Generator, fx: DualNumbers, window=(-1, 1), max_dim: int = 3) -> Complex:
    """Random components; each differential is random on the cokernel of the previous one."""
    lo, hi = window
    comps = [random_module(rng, fx, max_dim) for _ in range(lo, hi + 1)]
    diffs = []
    prev = None
    for j in range(hi - lo):
        if prev is None:
            d = random_morphism(rng, comps[j], comps[j + 1])
        else:
            c, q = cokernel(prev)
            d = random_morphism(rng, c, comps[j + 1]) @ q
        diffs.append(d)
        prev = d
    return Complex(window, comps, diffs, name="random")


def module_universe(fx: DualNumbers, extra: int = 10, seed: int = 0) -> list[Module]:
    """The six isomorphism types of dimension <= 3 plus ``extra`` random rebasings."""
    A, k = fx.A, fx.k
    base = [
        fx.zero.named("0"),
        k,
        A,
        fx.sum(k, k, name="k^2"),
        fx.sum(A, k, name="A+k"),
        fx.sum(k, k, k, name="k^3"),
    ]
    rng = np.random.default_rng(seed)
    out = list(base)
    nonzero = base[1:]
    for j in range(extra):
        m = nonzero[j % len(nonzero)]
        t = random_invertible(m.dim, m.p, rng)
        out.append(m.change_basis(t)[0].named(f"{m.name}~{j}"))
    return out


def complex_universe(fx: DualNumbers, window=(-2, 2)) -> list[Complex]:
    """Small complexes supported strictly inside the window."""
    A, k = fx.A, fx.k
    Ak = fx.sum(A, k, name="A+k")
    xs = [
        Complex.zero(window, fx.algebra),
        sphere(0, k, window),
        sphere(0, A, window),
        sphere(-1, k, window),
        disk(0, A, window),
        disk(-1, k, window),
        disk(0, Ak, window),
        Complex.from_maps(window, 0, [fx.times_x], name="A-x->A"),
        Complex.from_maps(window, -1, [fx.quotient], name="A->k"),
        Complex.from_maps(window, 0, [fx.socle], name="k->A"),
    ]
    return xs

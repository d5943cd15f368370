"""Command-line entry point: ``exactcat COMMAND ARGS --workspace FILE``.

Exit codes: 0 every verdict positive, 1 some verdict negative, 2 budget
exhausted, 3 the workspace or a reference in the command failed to load.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .chaincx import is_g_acyclic, verify_corollary_42
from .cotorsion import (
    EklofHypothesisError,
    GenerationError,
    HomologicalFailure,
    TestUniverse,
    ext1,
    is_homological,
    special_precover,
    special_preenvelope,
    split_over_cells,
)
from .lifting import (
    BudgetExhausted,
    MorphismSet,
    NotAnInflation,
    factorize,
    has_rlp,
    lifting_ranks,
)
from .modcat import ExactStructure, ModuleMorphism, ShortExactSequence
from .report import Witnesses, dumps
from .workspace import LoadError, Workspace, load_workspace

log = logging.getLogger(__name__)

OK, FAILED, BUDGET, LOAD = 0, 1, 2, 3
COMMANDS = ("ext1", "rlp", "factorize", "preenvelope", "precover", "eklof", "homological", "acyclic", "corollary42")


class UsageError(Exception):
    pass


def _structure(ws: Workspace, spec: str) -> ExactStructure:
    if spec == "abelian":
        return ExactStructure.abelian()
    if spec.startswith("relative:"):
        names = [n for n in spec.split(":", 1)[1].split(",") if n]
        if not names:
            raise UsageError("relative structure needs at least one module")
        return ExactStructure.relative([ws.module(n) for n in names])
    raise UsageError(f"unknown structure {spec!r}")


def _set(ws: Workspace, name: str | None, e: ExactStructure) -> MorphismSet:
    if name is None:
        raise UsageError("this command needs --set NAME")
    if name not in ws.sets:
        raise KeyError(f"unknown set {name!r}")
    names = ws.sets[name]
    return MorphismSet([ws.morphism(n) for n in names], label=name, structure=e, names=tuple(names))


def _args(cmd: str, args: argparse.Namespace, count: int) -> list[str]:
    if len(args.items) != count:
        raise UsageError(f"{cmd} takes {count} argument(s), got {len(args.items)}")
    return args.items


class Runner:
    def __init__(self, ws: Workspace, args: argparse.Namespace):
        self.ws = ws
        self.args = args
        self.w = Witnesses()
        self.e = _structure(ws, args.structure)
        self.items: list[dict] = []
        self.budget_hit = False
        self.I: MorphismSet | None = None

    def add(self, item: dict, positive: bool):
        item["verdict"] = "positive" if positive else "negative"
        self.items.append(item)

    def exhausted(self, kind: str, name: str, exc: BudgetExhausted):
        self.budget_hit = True
        self.items.append(
            {
                "kind": kind,
                "object": name,
                "status": "budget_exhausted",
                "verdict": "budget_exhausted",
                "unsolved": {str(k): v for k, v in sorted(exc.unsolved.items())},
            }
        )

    def need_set(self) -> MorphismSet:
        self.I = _set(self.ws, self.args.set, self.e)
        return self.I

    # -- commands

    def ext1(self):
        m, n = (self.ws.module(x) for x in _args("ext1", self.args, 2))
        g = ext1(m, n, self.e)
        self.add(
            {
                "kind": "ext1",
                "dim": g.dim,
                "target": self.w.module(n),
                "resolution": self.w.sequence(g.resolution),
                "cocycles": [self.w.morphism(c) for c in g.cocycle_basis],
            },
            True,
        )

    def rlp(self):
        (name,) = _args("rlp", self.args, 1)
        p = self.ws.morphism(name)
        I = self.need_set()
        ranks = [list(lifting_ranks(i, p)) for i in I]
        holds = all(a == b for a, b in ranks)
        self.add({"kind": "rlp", "morphism": self.w.morphism(p), "ranks": ranks, "holds": holds}, holds)

    def factorize(self):
        (name,) = _args("factorize", self.args, 1)
        f = self.ws.morphism(name)
        I = self.need_set()
        try:
            fac = factorize(f, I, self.args.budget)
        except BudgetExhausted as exc:
            self.exhausted("factorization", name, exc)
            return
        ok = has_rlp(fac.delta, I) and (fac.delta @ fac.gamma) == f
        self.add(
            {
                "kind": "factorization",
                "morphism": self.w.morphism(f),
                "stages": len(fac.trace),
                "cells": fac.trace.cell_count(),
                "trace": self.w.trace(fac.trace),
                "gamma": self.w.morphism(fac.gamma),
                "delta": self.w.morphism(fac.delta),
                "delta_has_rlp": ok,
            },
            ok,
        )

    def _approx(self, kind: str, names: list[str]):
        I = self.I or self.need_set()
        make = special_preenvelope if kind == "preenvelope" else special_precover
        for name in names:
            m = self.ws.module(name)
            try:
                out = make(m, I, self.args.budget, self.e)
            except BudgetExhausted as exc:
                self.exhausted(kind, name, exc)
                continue
            except (NotAnInflation, HomologicalFailure, GenerationError) as exc:
                self.add({"kind": kind, "object": name, "status": "failed", "error": f"{type(exc).__name__}: {exc}"}, False)
                continue
            perp = out.sequence.middle if kind == "preenvelope" else out.sequence.left
            dims = [ext1(c, perp, self.e).dim for c in I.cokernels()]
            self.add(
                {
                    "kind": kind,
                    "object": name,
                    "sequence": self.w.sequence(out.sequence),
                    "trace": self.w.trace(out.trace),
                    "ext_dims": dims,
                },
                self.e.is_conflation(out.sequence) and not any(dims),
            )

    def preenvelope(self):
        self._approx("preenvelope", self._names())

    def precover(self):
        self._approx("precover", self._names())

    def _names(self) -> list[str]:
        if self.args.items:
            return self.args.items
        if self.args.universe:
            return self.ws.universes[self.args.universe]
        raise UsageError("give module names or --universe")

    def eklof(self):
        infl, defl = (self.ws.morphism(x) for x in _args("eklof", self.args, 2))
        s = ShortExactSequence(infl, defl)
        I = self.need_set()
        B = s.right
        try:
            sec, flt = split_over_cells(s, I, self.args.budget, self.e)
        except BudgetExhausted as exc:
            self.exhausted("eklof", "extension", exc)
            return
        except EklofHypothesisError as exc:
            self.add({"kind": "eklof", "status": "failed", "error": str(exc)}, False)
            return
        self.add(
            {
                "kind": "eklof",
                "extension": self.w.sequence(s),
                "filtration_length": len(flt),
                "section": self.w.morphism(sec),
            },
            (s.deflation @ sec) == ModuleMorphism.identity(B),
        )

    def homological(self):
        I = self.need_set()
        if not self.args.universe:
            raise UsageError("homological needs --universe")
        names = self.ws.universes[self.args.universe]
        U = TestUniverse([self.ws.module(n) for n in names], names=tuple(names))
        v = is_homological(I, U, self.e)
        for k, name in enumerate(names):
            inj = k in v.injective
            dims = [ext1(c, U.objects[k], self.e).dim for c in I.cokernels()] if inj else []
            self.add(
                {"kind": "homological", "object": self.w.module(U.objects[k]), "name": name, "injective": inj, "ext_dims": dims},
                not any(dims),
            )

    def _generators(self):
        if not self.args.generators:
            raise UsageError("this command needs --generators M1,M2,...")
        names = self.args.generators.split(",")
        return [self.ws.module(n) for n in names], names

    def acyclic(self):
        (name,) = _args("acyclic", self.args, 1)
        x = self.ws.complex(name)
        gs, gnames = self._generators()
        v = is_g_acyclic(x, gs)
        self.add(
            {
                "kind": "acyclic",
                "complex": name,
                "generators": [self.w.module(g) for g in gs],
                "acyclic": v.acyclic,
                "failures": list(v.failures),
                "cycle_sequences": {str(n): self.w.sequence(s) for n, s in sorted(v.cycle_sequences.items())},
            },
            v.acyclic,
        )

    def corollary42(self):
        gs, _ = self._generators()
        if not self.args.universe:
            raise UsageError("corollary42 needs --universe of complexes")
        names = self.ws.universes[self.args.universe]
        xs = [self.ws.complex(n) for n in names]
        window = xs[0].window
        if self.args.window:
            window = tuple(int(v) for v in self.args.window.split(","))
        rep = verify_corollary_42(gs, window, xs, self.args.budget)
        self.I = rep.members
        self.e = rep.members.structure
        inner = rep.report
        for k, name in enumerate(names):
            item = {"kind": "complex_approximation", "object": name}
            if k in inner.preenvelopes:
                item["preenvelope"] = self.w.sequence(inner.preenvelopes[k].sequence)
                item["preenvelope_degreewise"] = rep.degreewise[f"preenvelope:{name}"]
            if k in inner.precovers:
                item["precover"] = self.w.sequence(inner.precovers[k].sequence)
                item["precover_degreewise"] = rep.degreewise[f"precover:{name}"]
            errs = {key: v for key, v in inner.errors.items() if key.endswith(f":{name}")}
            if errs:
                item["errors"] = errs
                self.budget_hit |= any("Budget" in v for v in errs.values())
            ok = "preenvelope" in item and "precover" in item and item["preenvelope_degreewise"] and item["precover_degreewise"]
            if k in inner.summands:
                item["summand_of_cell"] = inner.summands[k].is_summand
            self.add(item, bool(ok))
        self.items.append({"kind": "verdicts", "verdicts": dict(sorted(inner.verdicts.items())), "verdict": "positive" if rep.ok else "negative"})

    def report(self) -> tuple[dict, int]:
        getattr(self, self.args.command)()
        verdicts = [it["verdict"] for it in self.items]
        if self.budget_hit or "budget_exhausted" in verdicts:
            status, code = "budget_exhausted", BUDGET
        elif all(v == "positive" for v in verdicts):
            status, code = "ok", OK
        else:
            status, code = "failure", FAILED
        out = {
            "command": {
                "name": self.args.command,
                "args": list(self.args.items),
                "budget": self.args.budget,
                "set": self.args.set,
                "universe": self.args.universe,
                "structure_flag": self.args.structure,
            },
            "structure": self.w.structure(self.e),
            "set": self.w.morphism_set(self.I) if self.I is not None else None,
            "items": [it for it in self.items if it["kind"] != "verdicts"],
            "summary": [it for it in self.items if it["kind"] == "verdicts"],
            "status": status,
            "exit_code": code,
        }
        out["objects"] = self.w.objects()
        return out, code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="exactcat", description="Lifting, Ext and cotorsion computations over F_p-algebras.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("items", nargs="*", help="names of workspace entities")
    ap.add_argument("--workspace", required=True, type=Path)
    ap.add_argument("--budget", type=int, default=16)
    ap.add_argument("--universe")
    ap.add_argument("--structure", default="abelian", help="abelian or relative:G1,G2,...")
    ap.add_argument("--set", help="name of a morphism set")
    ap.add_argument("--generators", help="comma-separated generator modules")
    ap.add_argument("--window", help="LO,HI for complex commands")
    ap.add_argument("--out", type=Path)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv: list[str] | None = None) -> tuple[str, int]:
    return _run(build_parser().parse_args(argv))


def _run(args: argparse.Namespace) -> tuple[str, int]:
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        ws = load_workspace(args.workspace)
    except LoadError as exc:
        return dumps({"status": "load_error", "errors": [{"line": n, "message": m} for n, m in exc.errors], "exit_code": LOAD}), LOAD
    try:
        report, code = Runner(ws, args).report()
    except (KeyError, UsageError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        return dumps({"status": "load_error", "errors": [{"line": 0, "message": msg}], "exit_code": LOAD}), LOAD
    return dumps(report), code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    text, code = _run(args)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

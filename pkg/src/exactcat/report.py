"""Machine-readable reports with embedded, re-checkable witnesses.

Every module, morphism and cell trace a report relies on is written into
the report itself.  :func:`verify_report` rebuilds them and re-checks each
claim with direct matrix identities and rank tests; it never calls the
factorization engine.
"""

from __future__ import annotations

import json

import numpy as np

from . import linalg as la
from .cotorsion import ext1
from .lifting import Cell, CellTrace, MorphismSet, attach, has_rlp, lifting_ranks
from .modcat import Algebra, ExactStructure, Module, ModuleMorphism, ShortExactSequence

__all__ = ["Witnesses", "dumps", "verify_report", "ReplayError"]


class ReplayError(ValueError):
    """A report witness failed re-verification."""


def matrix_to_json(m: np.ndarray) -> dict:
    return {"shape": [int(m.shape[0]), int(m.shape[1])], "rows": [" ".join(str(int(v)) for v in row) for row in m]}


def matrix_from_json(d: dict) -> np.ndarray:
    r, c = d["shape"]
    if r == 0 or c == 0:
        return la.zeros(r, c)
    return np.array([[int(v) for v in row.split()] for row in d["rows"]], dtype=la.DTYPE).reshape(r, c)


class Witnesses:
    """Deduplicating registry of algebras and modules referenced by a report."""

    def __init__(self):
        self.algebras: dict[str, dict] = {}
        self.modules: dict[str, dict] = {}
        self._akeys: dict[Algebra, str] = {}
        self._mkeys: dict[tuple, str] = {}
        self._alg_objs: dict[str, Algebra] = {}
        self._mod_objs: dict[str, Module] = {}

    # -- writing

    def algebra(self, A: Algebra) -> str:
        if A in self._akeys:
            return self._akeys[A]
        key = f"R{len(self.algebras)}"
        nz = np.argwhere(A.structure)
        self.algebras[key] = {
            "p": A.p,
            "dim": A.dim,
            "unit": [int(v) for v in A.unit],
            "structure": [[int(i), int(j), int(k), int(A.structure[i, j, k])] for i, j, k in nz],
        }
        self._akeys[A] = key
        return key

    def module(self, m: Module) -> str:
        akey = self.algebra(m.algebra)
        ident = (akey, m.dim, m.action.tobytes())
        if ident in self._mkeys:
            return self._mkeys[ident]
        key = f"M{len(self.modules)}"
        self.modules[key] = {"algebra": akey, "dim": m.dim, "action": [matrix_to_json(a) for a in m.action]}
        self._mkeys[ident] = key
        return key

    def morphism(self, f: ModuleMorphism) -> dict:
        return {"source": self.module(f.source), "target": self.module(f.target), "matrix": matrix_to_json(f.matrix)}

    def sequence(self, s: ShortExactSequence) -> dict:
        return {"inflation": self.morphism(s.inflation), "deflation": self.morphism(s.deflation)}

    def morphism_set(self, I: MorphismSet) -> dict:
        return {"names": list(I.names), "members": [self.morphism(m) for m in I], "structure": self.structure(I.structure)}

    def trace(self, t: CellTrace) -> dict:
        return {
            "start": self.module(t.start),
            "stages": [
                {
                    "cells": [{"member": c.member, "attaching": matrix_to_json(c.attaching)} for c in s.cells],
                    "object": self.module(s.obj),
                    "map": self.morphism(s.map),
                }
                for s in t.stages
            ],
        }

    def structure(self, e: ExactStructure) -> dict:
        if e.is_abelian:
            return {"kind": "abelian"}
        return {"kind": "relative", "summands": [self.module(g) for g in e.summands]}

    def objects(self) -> dict:
        return {"algebras": self.algebras, "modules": self.modules}

    # -- reading

    @classmethod
    def load(cls, objects: dict) -> "Witnesses":
        w = cls()
        for key, a in objects["algebras"].items():
            d = a["dim"]
            c = np.zeros((d, d, d), dtype=la.DTYPE)
            for i, j, k, v in a["structure"]:
                c[i, j, k] = v
            w._alg_objs[key] = Algebra(a["p"], c, a["unit"])
        for key, m in objects["modules"].items():
            A = w._alg_objs[m["algebra"]]
            act = np.stack([matrix_from_json(x) for x in m["action"]]) if m["action"] else np.zeros((0, 0, 0))
            w._mod_objs[key] = Module(A, act.reshape(A.dim, m["dim"], m["dim"]))
        return w

    def get_module(self, key: str) -> Module:
        return self._mod_objs[key]

    def get_morphism(self, d: dict) -> ModuleMorphism:
        return ModuleMorphism(self.get_module(d["source"]), self.get_module(d["target"]), matrix_from_json(d["matrix"]))

    def get_sequence(self, d: dict) -> ShortExactSequence:
        return ShortExactSequence(self.get_morphism(d["inflation"]), self.get_morphism(d["deflation"]))

    def get_structure(self, d: dict) -> ExactStructure:
        if d["kind"] == "abelian":
            return ExactStructure.abelian()
        return ExactStructure.relative([self.get_module(k) for k in d["summands"]])

    def get_morphism_set(self, d: dict, e: ExactStructure) -> MorphismSet:
        return MorphismSet([self.get_morphism(m) for m in d["members"]], structure=e, names=tuple(d["names"]))

    def get_trace(self, d: dict, I: MorphismSet) -> CellTrace:
        """Rebuild a trace by re-attaching its cells and compare with the record."""
        x = self.get_module(d["start"])
        stages = []
        for j, s in enumerate(d["stages"]):
            cells = [Cell(c["member"], matrix_from_json(c["attaching"])) for c in s["cells"]]
            st = attach(x, I, cells)
            if st.obj != self.get_module(s["object"]) or st.map != self.get_morphism(s["map"]):
                raise ReplayError(f"stage {j} does not replay to the recorded object")
            stages.append(st)
            x = st.obj
        return CellTrace(I, self.get_module(d["start"]), tuple(stages))


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


# -- replay -----------------------------------------------------------------


def _check(cond: bool, msg: str):
    if not cond:
        raise ReplayError(msg)


def _verify_item(item: dict, w: Witnesses, e: ExactStructure, I: MorphismSet | None):
    kind = item["kind"]
    if item.get("status") in ("budget_exhausted", "failed"):
        return
    if kind == "ext1":
        res = w.get_sequence(item["resolution"])
        _check(e.is_conflation(res), "resolution is not a conflation")
        n = w.get_module(item["target"])
        g = ext1(res.right, n, e, cover=res)
        _check(g.dim == item["dim"], "Ext dimension does not match the recorded resolution")
        coc = [w.get_morphism(c) for c in item["cocycles"]]
        _check([g.classify(c).tolist() for c in coc] == np.eye(g.dim, dtype=int).tolist(), "cocycles are not a basis")
    elif kind == "rlp":
        p = w.get_morphism(item["morphism"])
        ranks = [list(lifting_ranks(i, p)) for i in I]
        _check(ranks == item["ranks"], "lifting ranks differ")
        _check(item["holds"] == all(a == b for a, b in ranks), "verdict disagrees with ranks")
    elif kind == "factorization":
        f = w.get_morphism(item["morphism"])
        t = w.get_trace(item["trace"], I)
        delta = w.get_morphism(item["delta"])
        _check(w.get_morphism(item["gamma"]) == t.composite(), "gamma is not the composite of the trace")
        _check((delta @ t.composite()) == f, "delta o gamma != f")
        _check(has_rlp(delta, I) == item["delta_has_rlp"], "RLP of delta differs")
    elif kind in ("preenvelope", "precover"):
        s = w.get_sequence(item["sequence"])
        _check(e.is_conflation(s), "sequence is not a conflation")
        t = w.get_trace(item["trace"], I)
        cell_obj = s.right if kind == "preenvelope" else s.middle
        perp_obj = s.middle if kind == "preenvelope" else s.left
        _check(t.end == cell_obj, "trace does not build the cell object")
        dims = [ext1(c, perp_obj, e).dim for c in I.cokernels()]
        _check(dims == item["ext_dims"] and not any(dims), "perpendicularity to Cok I fails")
    elif kind == "eklof":
        s = w.get_sequence(item["extension"])
        sec = w.get_morphism(item["section"])
        _check((s.deflation @ sec) == ModuleMorphism.identity(s.right), "p o s != id")
    elif kind == "homological":
        m = w.get_module(item["object"])
        z = m.algebra.zero_module()
        inj = has_rlp(ModuleMorphism.zero(m, z), I)
        _check(inj == item["injective"], "injectivity differs")
        if inj:
            dims = [ext1(c, m, e).dim for c in I.cokernels()]
            _check(dims == item["ext_dims"], "Ext dimensions differ")
    elif kind == "acyclic":
        g = ExactStructure.relative([w.get_module(k) for k in item["generators"]])
        for n, sd in item["cycle_sequences"].items():
            _check(g.is_conflation(w.get_sequence(sd)), f"cycle sequence {n} is not G-exact")
    elif kind == "complex_approximation":
        for key in ("preenvelope", "precover"):
            if key in item:
                _check(e.is_conflation(w.get_sequence(item[key])), f"{key} is not a conflation")
    else:
        raise ReplayError(f"unknown item kind {kind!r}")


def verify_report(report: dict | str) -> bool:
    """Re-check every witness in a report; raise :class:`ReplayError` on the first failure."""
    if isinstance(report, str):
        report = json.loads(report)
    w = Witnesses.load(report["objects"])
    e = w.get_structure(report["structure"])
    I = None
    if report.get("set"):
        I = w.get_morphism_set(report["set"], w.get_structure(report["set"]["structure"]))
    for item in report["items"]:
        try:
            _verify_item(item, w, e, I)
        except ReplayError:
            raise
        except ValueError as exc:  # includes module axiom violations
            raise ReplayError(f"{item['kind']} item: malformed witness: {exc}") from exc
    return True

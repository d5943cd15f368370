"""Plain-text workspace format.

A workspace is a sequence of declarations, one entity per declaration,
``#`` starting a comment::

    field 2
    algebra R = truncated 2          # F_p[x]/(x^n)
    algebra S dim 2                  # or by structure constants
      unit 1 0
      const 0 0 0 1                  # e_0 e_0 = 1 * e_0
      const 0 1 1 1
      const 1 0 1 1
    end
    module A = regular R
    module Z = zero R
    module k over R dim 1
      action 0
        1
      action 1
        0
    end
    module Ak = sum A k
    morphism soc : k -> A
      0
      1
    end
    morphism zA : Z -> A = zero
    set I = soc zA
    universe U = Z k A Ak
    complex X over R window -2 2
      component 0 A
      component 1 A
      differential 0 mx
    end

Matrix rows are whitespace-separated integers, row-major.  Every entity
is validated when it is declared; all problems are collected with their
line numbers.
"""

from __future__ import annotations

import shlex
import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg as la
from .chaincx import Complex
from .modcat import Algebra, AxiomError, Module, ModuleMorphism, direct_sum

__all__ = ["LoadError", "Workspace", "load_workspace", "parse_workspace"]


class LoadError(Exception):
    """One or more declarations failed to parse or validate."""

    def __init__(self, errors: list[tuple[int, str]]):
        self.errors = errors
        super().__init__("\n".join(f"line {n}: {msg}" for n, msg in errors))


class _Fail(Exception):
    def __init__(self, line: int, msg: str):
        self.line, self.msg = line, msg


@dataclass
class Workspace:
    field: int | None = None
    algebras: dict[str, Algebra] = dataclasses.field(default_factory=dict)
    modules: dict[str, Module] = dataclasses.field(default_factory=dict)
    morphisms: dict[str, ModuleMorphism] = dataclasses.field(default_factory=dict)
    sets: dict[str, list[str]] = dataclasses.field(default_factory=dict)
    universes: dict[str, list[str]] = dataclasses.field(default_factory=dict)
    complexes: dict[str, Complex] = dataclasses.field(default_factory=dict)

    def module(self, name: str) -> Module:
        try:
            return self.modules[name]
        except KeyError:
            raise KeyError(f"unknown module {name!r}") from None

    def morphism(self, name: str) -> ModuleMorphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise KeyError(f"unknown morphism {name!r}") from None

    def complex(self, name: str) -> Complex:
        try:
            return self.complexes[name]
        except KeyError:
            raise KeyError(f"unknown complex {name!r}") from None

    def universe(self, name: str) -> list[Module | Complex]:
        if name not in self.universes:
            raise KeyError(f"unknown universe {name!r}")
        return [self.complexes[n] if n in self.complexes else self.modules[n] for n in self.universes[name]]

    def is_empty(self) -> bool:
        return not (self.algebras or self.modules or self.morphisms or self.complexes)


def _tokens(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((n, shlex.split(line)))
    return out


def _ints(n: int, toks: list[str]) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise _Fail(n, f"expected integers, got {' '.join(toks)!r}") from None


class _Parser:
    def __init__(self, text: str):
        self.lines = _tokens(text)
        self.pos = 0
        self.ws = Workspace()
        self.errors: list[tuple[int, str]] = []

    def block(self, start: int) -> list[tuple[int, list[str]]]:
        body = []
        while self.pos < len(self.lines):
            n, toks = self.lines[self.pos]
            self.pos += 1
            if toks == ["end"]:
                return body
            body.append((n, toks))
        raise _Fail(start, "block is missing its 'end'")

    def run(self) -> Workspace:
        while self.pos < len(self.lines):
            n, toks = self.lines[self.pos]
            self.pos += 1
            try:
                self.declaration(n, toks)
            except _Fail as f:
                self.errors.append((f.line, f.msg))
            except (AxiomError, ValueError, KeyError) as exc:
                msg = exc.args[0] if exc.args else str(exc)
                self.errors.append((n, f"{toks[0]} {toks[1] if len(toks) > 1 else ''}: {msg}".strip()))
        if self.errors:
            raise LoadError(self.errors)
        return self.ws

    def _name(self, n, table, name):
        if name in table:
            raise _Fail(n, f"duplicate name {name!r}")
        return name

    def _algebra(self, n, name) -> Algebra:
        if name not in self.ws.algebras:
            raise _Fail(n, f"unknown algebra {name!r}")
        return self.ws.algebras[name]

    def _module(self, n, name) -> Module:
        if name not in self.ws.modules:
            raise _Fail(n, f"unknown module {name!r}")
        return self.ws.modules[name]

    def _rows(self, n, body, rows, cols) -> np.ndarray:
        if len(body) != rows:
            raise _Fail(n, f"expected {rows} matrix rows, got {len(body)}")
        mat = la.zeros(rows, cols)
        for r, (ln, toks) in enumerate(body):
            vals = _ints(ln, toks)
            if len(vals) != cols:
                raise _Fail(ln, f"expected {cols} entries, got {len(vals)}")
            mat[r] = vals
        return mat

    def declaration(self, n: int, toks: list[str]):
        kind = toks[0]
        handler = getattr(self, f"decl_{kind}", None)
        if handler is None:
            raise _Fail(n, f"unknown declaration {kind!r}")
        handler(n, toks)

    def decl_field(self, n, toks):
        if len(toks) != 2:
            raise _Fail(n, "usage: field P")
        if self.ws.field is not None:
            raise _Fail(n, "field declared twice")
        p = _ints(n, toks[1:])[0]
        la.FieldPrime(p)
        self.ws.field = p

    def _p(self, n) -> int:
        if self.ws.field is None:
            raise _Fail(n, "no field declared yet")
        return self.ws.field

    def decl_algebra(self, n, toks):
        if len(toks) < 3:
            raise _Fail(n, "usage: algebra NAME = truncated N | algebra NAME dim D ... end")
        name = self._name(n, self.ws.algebras, toks[1])
        p = self._p(n)
        if toks[2] == "=":
            if len(toks) != 5 or toks[3] != "truncated":
                raise _Fail(n, "usage: algebra NAME = truncated N")
            self.ws.algebras[name] = Algebra.truncated_polynomial(p, _ints(n, toks[4:])[0], name=name)
            return
        if toks[2] != "dim" or len(toks) != 4:
            raise _Fail(n, "usage: algebra NAME dim D")
        d = _ints(n, toks[3:])[0]
        body = self.block(n)
        c = np.zeros((d, d, d), dtype=la.DTYPE)
        unit = None
        for ln, bt in body:
            if bt[0] == "unit":
                unit = _ints(ln, bt[1:])
                if len(unit) != d:
                    raise _Fail(ln, f"unit needs {d} entries")
            elif bt[0] == "const":
                v = _ints(ln, bt[1:])
                if len(v) != 4 or not all(0 <= x < d for x in v[:3]):
                    raise _Fail(ln, "usage: const I J K VALUE with indices below dim")
                c[v[0], v[1], v[2]] = v[3]
            else:
                raise _Fail(ln, f"unexpected {bt[0]!r} in algebra block")
        if unit is None:
            raise _Fail(n, "algebra block has no unit")
        try:
            self.ws.algebras[name] = Algebra(p, c, unit, name=name)
        except AxiomError as exc:
            raise _Fail(n, f"algebra {name}: {exc}") from None

    def decl_module(self, n, toks):
        if len(toks) < 4:
            raise _Fail(n, "usage: module NAME = regular|zero ALG | sum M... | over ALG dim D")
        name = self._name(n, self.ws.modules, toks[1])
        if toks[2] == "=":
            how, args = toks[3], toks[4:]
            if how in ("regular", "zero"):
                if len(args) != 1:
                    raise _Fail(n, f"usage: module NAME = {how} ALG")
                A = self._algebra(n, args[0])
                m = A.regular_module(name) if how == "regular" else A.zero_module().named(name)
            elif how == "sum":
                parts = [self._module(n, a) for a in args]
                if not parts:
                    raise _Fail(n, "empty sum")
                m = direct_sum(parts)[0].named(name)
            else:
                raise _Fail(n, f"unknown module constructor {how!r}")
            self.ws.modules[name] = m
            return
        if toks[2] != "over" or len(toks) != 6 or toks[4] != "dim":
            raise _Fail(n, "usage: module NAME over ALG dim D")
        A = self._algebra(n, toks[3])
        dim = _ints(n, toks[5:])[0]
        body = self.block(n)
        act = np.zeros((A.dim, dim, dim), dtype=la.DTYPE)
        seen = set()
        j = 0
        while j < len(body):
            ln, bt = body[j]
            if bt[0] != "action" or len(bt) != 2:
                raise _Fail(ln, "expected 'action I' followed by the matrix rows")
            i = _ints(ln, bt[1:])[0]
            if not 0 <= i < A.dim:
                raise _Fail(ln, f"basis index {i} out of range")
            act[i] = self._rows(ln, body[j + 1 : j + 1 + dim], dim, dim)
            seen.add(i)
            j += 1 + dim
        missing = sorted(set(range(A.dim)) - seen)
        if missing:
            raise _Fail(n, f"module {name}: no action given for basis elements {missing}")
        try:
            self.ws.modules[name] = Module(A, act, name=name)
        except AxiomError as exc:
            raise _Fail(n, str(exc)) from None

    def decl_morphism(self, n, toks):
        # morphism NAME : S -> T [= zero|identity]
        if len(toks) < 6 or toks[2] != ":" or toks[4] != "->":
            raise _Fail(n, "usage: morphism NAME : SOURCE -> TARGET [= zero|identity]")
        name = self._name(n, self.ws.morphisms, toks[1])
        s, t = self._module(n, toks[3]), self._module(n, toks[5])
        if len(toks) == 8 and toks[6] == "=":
            if toks[7] == "zero":
                mat = la.zeros(t.dim, s.dim)
            elif toks[7] == "identity":
                if s != t:
                    raise _Fail(n, "identity between different modules")
                mat = la.identity(s.dim)
            else:
                raise _Fail(n, f"unknown morphism constructor {toks[7]!r}")
        elif len(toks) == 6:
            mat = self._rows(n, self.block(n), t.dim, s.dim)
        else:
            raise _Fail(n, "trailing tokens after morphism header")
        try:
            self.ws.morphisms[name] = ModuleMorphism(s, t, mat, name=name)
        except AxiomError as exc:
            raise _Fail(n, str(exc)) from None

    def _list(self, n, toks, table, what):
        if len(toks) < 3 or toks[2] != "=":
            raise _Fail(n, f"usage: {what} NAME = ITEM ...")
        return self._name(n, table, toks[1]), toks[3:]

    def decl_set(self, n, toks):
        name, items = self._list(n, toks, self.ws.sets, "set")
        for it in items:
            if it not in self.ws.morphisms:
                raise _Fail(n, f"unknown morphism {it!r}")
        self.ws.sets[name] = items

    def decl_universe(self, n, toks):
        name, items = self._list(n, toks, self.ws.universes, "universe")
        if not items:
            raise _Fail(n, "universe must be non-empty")
        for it in items:
            if it not in self.ws.modules and it not in self.ws.complexes:
                raise _Fail(n, f"unknown module or complex {it!r}")
        self.ws.universes[name] = items

    def decl_complex(self, n, toks):
        if len(toks) != 7 or toks[2] != "over" or toks[4] != "window":
            raise _Fail(n, "usage: complex NAME over ALG window LO HI")
        name = self._name(n, self.ws.complexes, toks[1])
        A = self._algebra(n, toks[3])
        lo, hi = _ints(n, toks[5:])
        if hi < lo:
            raise _Fail(n, "empty window")
        z = A.zero_module()
        comps = {k: z for k in range(lo, hi + 1)}
        diffs = {}
        for ln, bt in self.block(n):
            if bt[0] not in ("component", "differential") or len(bt) != 3:
                raise _Fail(ln, "expected 'component N MODULE' or 'differential N MORPHISM'")
            k = _ints(ln, bt[1:2])[0]
            if bt[0] == "component":
                if not lo <= k <= hi:
                    raise _Fail(ln, f"degree {k} outside the window")
                comps[k] = self._module(ln, bt[2])
            else:
                if not lo <= k < hi:
                    raise _Fail(ln, f"differential {k} outside the window")
                if bt[2] not in self.ws.morphisms:
                    raise _Fail(ln, f"unknown morphism {bt[2]!r}")
                diffs[k] = (ln, self.ws.morphisms[bt[2]])
        maps = []
        for k in range(lo, hi):
            if k in diffs:
                ln, f = diffs[k]
                if f.source != comps[k] or f.target != comps[k + 1]:
                    raise _Fail(ln, f"differential {k} does not run between the declared components")
                maps.append(f)
            else:
                maps.append(ModuleMorphism.zero(comps[k], comps[k + 1]))
        try:
            self.ws.complexes[name] = Complex((lo, hi), [comps[k] for k in range(lo, hi + 1)], maps, name=name)
        except ValueError as exc:
            raise _Fail(n, f"complex {name}: {exc}") from None


def parse_workspace(text: str) -> Workspace:
    return _Parser(text).run()


def load_workspace(path: str | Path) -> Workspace:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise LoadError([(0, f"cannot read {path}: {exc.strerror}")]) from None
    return parse_workspace(text)

"""Lifting problems and the small object argument over module categories.

Commuting squares against a fixed pair ``(i, p)`` form a vector space, and so
do their lifts.  A morphism ``p`` has the right lifting property against
``i: A -> B`` exactly when the linear map

    Hom(B, X) -> Hom(A, X) x_{Hom(A, Y)} Hom(B, Y),   h -> (h i, p h)

is onto, which is a rank computation.  The factorization engine attaches one
cell per basis vector of the squares that are not yet solvable, so every
stage is a pushout of a finite coproduct of members of ``I``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg as la
from .modcat import (
    ExactStructure,
    Module,
    ModuleMorphism,
    ShortExactSequence,
    cokernel,
    copair,
    direct_sum,
    direct_sum_map,
    factor_through_epi,
    hom_space,
    pushout,
)

__all__ = [
    "MorphismSet",
    "LiftingProblem",
    "Cell",
    "Stage",
    "CellTrace",
    "Filtration",
    "Factorization",
    "BudgetExhausted",
    "NotAnInflation",
    "solve_lift",
    "has_rlp",
    "has_llp",
    "lifting_ranks",
    "attach",
    "attach_stage",
    "factorize",
    "compose_traces",
    "pushout_trace",
    "coproduct_of_cells",
    "trace_to_filtration",
    "lift_through_trace",
]


class NotAnInflation(ValueError):
    """A morphism expected to be an inflation in the active structure is not."""


@dataclass(frozen=True)
class MorphismSet:
    """A finite set ``I`` of inflations in a fixed exact structure."""

    members: tuple[ModuleMorphism, ...]
    label: str = "I"
    structure: ExactStructure = field(default_factory=ExactStructure.abelian)
    names: tuple[str, ...] = ()
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.names:
            object.__setattr__(self, "names", tuple(m.name or f"{self.label}[{j}]" for j, m in enumerate(self.members)))
        if self.check:
            for j, m in enumerate(self.members):
                if not self.structure.is_inflation(m):
                    raise NotAnInflation(f"member {self.names[j]} of {self.label} is not an inflation")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, j):
        return self.members[j]

    def cokernels(self) -> list[Module]:
        """One representative of Cok I per member, in member order."""
        return [cokernel(m)[0] for m in self.members]


@dataclass(frozen=True)
class LiftingProblem:
    """A commuting square ``p f == g i`` awaiting a diagonal ``h: B -> X``."""

    i: ModuleMorphism
    p: ModuleMorphism
    f: ModuleMorphism
    g: ModuleMorphism

    def __post_init__(self):
        if self.f.source != self.i.source or self.f.target != self.p.source:
            raise ValueError("f must run from the source of i to the source of p")
        if self.g.source != self.i.target or self.g.target != self.p.target:
            raise ValueError("g must run from the target of i to the target of p")
        if (self.p @ self.f) != (self.g @ self.i):
            raise ValueError("square does not commute")

    def is_lift(self, h: ModuleMorphism) -> bool:
        return (h @ self.i) == self.f and (self.p @ h) == self.g


def _flat(H: np.ndarray) -> np.ndarray:
    return H.reshape(H.shape[0], -1)


def solve_lift(lp: LiftingProblem) -> ModuleMorphism | None:
    """A lift for ``lp``, or None when the square has no diagonal filler."""
    i, p, f, g = lp.i, lp.p, lp.f, lp.g
    q = i.p
    H = hom_space(i.target, p.source)
    if H.shape[0] == 0:
        if f.is_zero() and g.is_zero():
            return ModuleMorphism.zero(i.target, p.source)
        return None
    hi = np.einsum("hab,bc->hac", H, i.matrix) % q
    ph = np.einsum("ab,hbc->hac", p.matrix, H) % q
    M = np.concatenate([_flat(hi), _flat(ph)], axis=1).T
    rhs = np.concatenate([f.matrix.reshape(-1), g.matrix.reshape(-1)]).reshape(-1, 1)
    c = la.solve(M, rhs, q)
    if c is None:
        return None
    h = np.tensordot(c[:, 0], H, axes=1) % q
    return ModuleMorphism(i.target, p.source, h, check=False)


@dataclass(frozen=True)
class _Squares:
    """Commuting squares against ``(i, p)`` in flattened ``(f, g)`` coordinates."""

    image: np.ndarray  # rows: (h i, p h) for h in a basis of Hom(B, X)
    fiber: np.ndarray  # rows: a basis of all commuting squares
    split: int  # length of the flattened f part


def _squares(i: ModuleMorphism, p: ModuleMorphism) -> _Squares:
    q = i.p
    A, B, X, Y = i.source, i.target, p.source, p.target
    HA = hom_space(A, X)
    HB = hom_space(B, Y)
    HX = hom_space(B, X)
    nf, ng = X.dim * A.dim, Y.dim * B.dim
    if HX.shape[0]:
        image = np.concatenate(
            [_flat(np.einsum("hab,bc->hac", HX, i.matrix) % q), _flat(np.einsum("ab,hbc->hac", p.matrix, HX) % q)],
            axis=1,
        )
    else:
        image = la.zeros(0, nf + ng)
    ha, hb = HA.shape[0], HB.shape[0]
    if ha + hb == 0:
        return _Squares(image, la.zeros(0, nf + ng), nf)
    pf = _flat(np.einsum("ab,hbc->hac", p.matrix, HA) % q) if ha else la.zeros(0, Y.dim * A.dim)
    gi = _flat(np.einsum("hab,bc->hac", HB, i.matrix) % q) if hb else la.zeros(0, Y.dim * A.dim)
    C = np.concatenate([pf, -gi % q], axis=0).T
    K = la.kernel_basis(C, q)
    if K.shape[1] == 0:
        return _Squares(image, la.zeros(0, nf + ng), nf)
    fpart = _flat(np.tensordot(K[:ha].T, HA, axes=1) % q) if ha else la.zeros(K.shape[1], nf)
    gpart = _flat(np.tensordot(K[ha:].T, HB, axes=1) % q) if hb else la.zeros(K.shape[1], ng)
    return _Squares(image, np.concatenate([fpart, gpart], axis=1), nf)


def lifting_ranks(i: ModuleMorphism, p: ModuleMorphism) -> tuple[int, int]:
    """``(rank of Hom(B, X) -> squares, dimension of the square space)``."""
    sq = _squares(i, p)
    r = la.rank(sq.image, i.p) if sq.image.shape[0] else 0
    return r, sq.fiber.shape[0]


def _lifts_all(i: ModuleMorphism, p: ModuleMorphism) -> bool:
    if i.source.algebra != p.source.algebra:
        raise ValueError("morphisms over different algebras")
    r, dim = lifting_ranks(i, p)
    return r == dim


def has_rlp(p: ModuleMorphism, I: MorphismSet | Sequence[ModuleMorphism]) -> bool:
    """Whether ``p`` is I-injective."""
    return all(_lifts_all(i, p) for i in I)


def has_llp(i: ModuleMorphism, P: Sequence[ModuleMorphism]) -> bool:
    """Left lifting property of ``i`` against the finite sample ``P``.

    Membership in I-cof is not decidable from a finite sample; the answer is
    relative to ``P``.
    """
    return all(_lifts_all(i, p) for p in P)


@dataclass(frozen=True)
class Cell:
    """One attached copy of member ``member`` along ``attaching``."""

    member: int
    attaching: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, Cell)
            and self.member == other.member
            and np.array_equal(self.attaching, other.attaching)
        )

    def __hash__(self):
        return hash((self.member, self.attaching.tobytes()))


@dataclass(frozen=True, eq=False)
class Stage:
    """``obj`` is the pushout of the coproduct of the cells' members.

    ``map: X_n -> obj`` is the stage map and ``leg`` runs from the direct sum
    of the members' targets into ``obj``.
    """

    cells: tuple[Cell, ...]
    obj: Module
    map: ModuleMorphism
    leg: ModuleMorphism


def attach(x: Module, I: MorphismSet, cells: Sequence[Cell]) -> Stage:
    """Push out the coproduct of the cells' members along their attaching maps."""
    cells = tuple(cells)
    if not cells:
        ident = ModuleMorphism.identity(x)
        return Stage((), x, ident, ModuleMorphism.zero(x.algebra.zero_module(), x))
    members = [I[c.member] for c in cells]
    isum = direct_sum_map(members)
    at = copair([ModuleMorphism(I[c.member].source, x, c.attaching, check=False) for c in cells], x)
    at = ModuleMorphism(isum.source, x, at.matrix, check=False)
    y, leg_b, leg_x = pushout(isum, at)
    return Stage(cells, y, leg_x, leg_b)


@dataclass(frozen=True, eq=False)
class CellTrace:
    """A replayable finite relative I-cell complex ``start -> end``."""

    members: MorphismSet
    start: Module
    stages: tuple[Stage, ...] = ()

    @property
    def end(self) -> Module:
        return self.stages[-1].obj if self.stages else self.start

    def __len__(self):
        return len(self.stages)

    def objects(self) -> list[Module]:
        return [self.start] + [s.obj for s in self.stages]

    def composite(self) -> ModuleMorphism:
        out = ModuleMorphism.identity(self.start)
        for s in self.stages:
            out = s.map @ out
        return out

    def tail(self, n: int) -> ModuleMorphism:
        """Composite ``X_n -> end``."""
        out = ModuleMorphism.identity(self.objects()[n])
        for s in self.stages[n:]:
            out = s.map @ out
        return out

    def replay(self) -> "CellTrace":
        """Recompute every stage from the recorded cells."""
        x = self.start
        stages = []
        for s in self.stages:
            new = attach(x, self.members, s.cells)
            stages.append(new)
            x = new.obj
        return CellTrace(self.members, self.start, tuple(stages))

    def verify(self) -> bool:
        """Replaying the cells reproduces every recorded object and map exactly."""
        again = self.replay()
        return all(
            a.obj == b.obj and a.map == b.map and a.leg == b.leg for a, b in zip(self.stages, again.stages)
        )

    def cell_count(self) -> int:
        return sum(len(s.cells) for s in self.stages)


class Factorization(NamedTuple):
    """``f == delta o gamma`` with ``gamma`` the composite of ``trace``."""

    trace: CellTrace
    delta: ModuleMorphism

    @property
    def gamma(self) -> ModuleMorphism:
        return self.trace.composite()


class BudgetExhausted(RuntimeError):
    """The factorization did not converge within the stage budget."""

    def __init__(self, partial: Factorization, unsolved: dict[int, int], budget: int):
        self.partial = partial
        self.unsolved = unsolved
        self.budget = budget
        dims = ", ".join(f"{j}: {d}" for j, d in sorted(unsolved.items()) if d)
        super().__init__(f"no convergence within {budget} stages; unsolved squares per member {{{dims}}}")


def _open_squares(current: ModuleMorphism, I: MorphismSet) -> list[tuple[int, np.ndarray, np.ndarray]]:
    """Basis of squares per member, modulo those already solvable."""
    out = []
    X, Y = current.source, current.target
    for j, i in enumerate(I):
        sq = _squares(i, current)
        if sq.fiber.shape[0] == 0:
            continue
        span = la.SpanBuilder(sq.fiber.shape[1], i.p)
        span.add_many(sq.image)
        for v in sq.fiber:
            if span.add(v):
                f = v[: sq.split].reshape(X.dim, i.source.dim)
                g = v[sq.split :].reshape(Y.dim, i.target.dim)
                out.append((j, f, g))
    return out


def attach_stage(current: ModuleMorphism, I: MorphismSet) -> tuple[Stage, ModuleMorphism]:
    """One round of the small object argument on ``current: X_n -> Y``.

    Returns the stage and the induced ``X_{n+1} -> Y``.  A lift of a linear
    combination of squares is the same combination of the canonical lifts, so
    one cell per basis vector of the open squares suffices.
    """
    X, Y = current.source, current.target
    opened = _open_squares(current, I)
    if not opened:
        return attach(X, I, ()), current
    cells = [Cell(j, f) for j, f, _ in opened]
    stage = attach(X, I, cells)
    gs = copair([ModuleMorphism(I[j].target, Y, g, check=False) for j, _, g in opened], Y)
    gs = ModuleMorphism(stage.leg.source, Y, gs.matrix, check=False)
    both = copair([stage.leg, stage.map])
    new = factor_through_epi(both, ModuleMorphism(both.source, Y, np.concatenate([gs.matrix, current.matrix], axis=1), check=False))
    return stage, new


def factorize(f: ModuleMorphism, I: MorphismSet, budget: int = 16, check_inflations: bool = False) -> Factorization:
    """Factor ``f = delta o gamma`` with ``gamma`` an I-cell trace and ``delta`` I-injective.

    Raises :class:`BudgetExhausted` (carrying the partial trace) when more
    than ``budget`` non-empty stages would be needed.  With
    ``check_inflations`` every stage map is tested as an inflation of
    ``I.structure``.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    stages: list[Stage] = []
    delta = f
    while True:
        stage, new = attach_stage(delta, I)
        if not stage.cells:
            return Factorization(CellTrace(I, f.source, tuple(stages)), delta)
        if len(stages) == budget:
            unsolved: dict[int, int] = {}
            for c in stage.cells:
                unsolved[c.member] = unsolved.get(c.member, 0) + 1
            raise BudgetExhausted(Factorization(CellTrace(I, f.source, tuple(stages)), delta), unsolved, budget)
        if check_inflations and not I.structure.is_inflation(stage.map):
            raise NotAnInflation(f"stage {len(stages)} map is not an inflation")
        stages.append(stage)
        delta = new


def compose_traces(t1: CellTrace, t2: CellTrace) -> CellTrace:
    if t1.end != t2.start:
        raise ValueError("trace endpoints do not match")
    if t1.members != t2.members:
        raise ValueError("traces use different morphism sets")
    return CellTrace(t1.members, t1.start, t1.stages + t2.stages)


def pushout_trace(t: CellTrace, g: ModuleMorphism) -> tuple[CellTrace, ModuleMorphism]:
    """Push the trace out along ``g: t.start -> E``, stage by stage.

    Returns the trace from ``E`` and the induced map ``t.end -> new end``;
    together with ``t.composite()`` and ``g`` these form a pushout square.
    """
    if g.source != t.start:
        raise ValueError("g must start at the start of the trace")
    I = t.members
    cur = g
    e = g.target
    stages = []
    for s in t.stages:
        cells = [Cell(c.member, la.matmul(cur.matrix, c.attaching, g.p)) for c in s.cells]
        new = attach(e, I, cells)
        both = copair([s.leg, s.map])
        img = np.concatenate([new.leg.matrix, la.matmul(new.map.matrix, cur.matrix, g.p)], axis=1)
        cur = factor_through_epi(both, ModuleMorphism(both.source, new.obj, img, check=False))
        stages.append(new)
        e = new.obj
    return CellTrace(I, g.target, tuple(stages)), cur


def coproduct_of_cells(
    traces: Sequence[CellTrace], I: MorphismSet | None = None, zero: Module | None = None
) -> tuple[CellTrace, list[ModuleMorphism]]:
    """A single trace from 0 to the direct sum of the traces' ends.

    Each summand is attached by pushing its trace out along the zero map into
    the object built so far.  Also returns the injection of each summand's end
    into the final object.  An empty list needs ``I`` and the zero module.
    """
    traces = list(traces)
    if not traces:
        if I is None or zero is None:
            raise ValueError("empty coproduct needs the morphism set and the zero module")
        return CellTrace(I, zero, ()), []
    for t in traces:
        if t.start.dim:
            raise ValueError("coproduct_of_cells expects traces starting at 0")
    I = traces[0].members
    zero = traces[0].start
    total = CellTrace(I, zero, ())
    injections: list[ModuleMorphism] = []
    for t in traces:
        x = total.end
        pushed, leg = pushout_trace(t, ModuleMorphism.zero(t.start, x))
        n_before = len(total.stages)
        total = compose_traces(total, pushed)
        # carry the earlier injections along the new stages
        carry = total.tail(n_before)
        injections = [carry @ u for u in injections]
        injections.append(leg)
    return total, injections


@dataclass(frozen=True, eq=False)
class Filtration:
    """A chain of conflations ``0 = X_0 >-> X_1 >-> ... >-> X_L``.

    ``summands[j]`` and ``isomorphisms[j]`` (when present) witness that the
    ``j``-th cokernel is a direct sum of cokernels of members of ``I``.
    """

    start: Module
    steps: tuple[ShortExactSequence, ...]
    summands: tuple[tuple[int, ...], ...] = ()
    isomorphisms: tuple[ModuleMorphism, ...] = ()

    def __post_init__(self):
        x = self.start
        for j, s in enumerate(self.steps):
            if s.left != x:
                raise ValueError(f"filtration step {j} does not start where step {j - 1} ends")
            x = s.middle

    @property
    def top(self) -> Module:
        return self.steps[-1].middle if self.steps else self.start

    @property
    def cokernels(self) -> list[Module]:
        return [s.right for s in self.steps]

    def objects(self) -> list[Module]:
        return [self.start] + [s.middle for s in self.steps]

    def inclusion(self, n: int) -> ModuleMorphism:
        """Composite ``X_n -> top``."""
        out = ModuleMorphism.identity(self.objects()[n])
        for s in self.steps[n:]:
            out = s.inflation @ out
        return out

    def __len__(self):
        return len(self.steps)


def trace_to_filtration(t: CellTrace) -> Filtration:
    """The Cok I-filtration carried by a cell trace from 0."""
    if t.start.dim:
        raise ValueError("trace does not start at 0")
    I = t.members
    steps, summands, isos = [], [], []
    for s in t.stages:
        seq = ShortExactSequence.of_inflation(s.map)
        projs = direct_sum_map([cokernel(I[c.member])[1] for c in s.cells])
        q1 = seq.deflation
        iso = factor_through_epi(projs, q1 @ ModuleMorphism(projs.source, s.obj, s.leg.matrix, check=False))
        if not iso.is_iso():
            raise ValueError("stage cokernel is not isomorphic to the sum of member cokernels")
        steps.append(seq)
        summands.append(tuple(c.member for c in s.cells))
        isos.append(iso)
    return Filtration(t.start, tuple(steps), tuple(summands), tuple(isos))


def lift_through_trace(t: CellTrace, p: ModuleMorphism, top: ModuleMorphism, bottom: ModuleMorphism) -> ModuleMorphism:
    """Lift in the square ``p o top == bottom o gamma`` for ``p`` I-injective.

    ``top: t.start -> X`` and ``bottom: t.end -> Y``.  The lift is built one
    stage at a time: each cell's square is solved against ``p`` and the
    solutions are glued by the pushout property.
    """
    if (p @ top) != (bottom @ t.composite()):
        raise ValueError("square does not commute")
    u = top
    for n, s in enumerate(t.stages):
        tau = t.tail(n + 1)
        parts = []
        for k, c in enumerate(s.cells):
            i = t.members[c.member]
            attach_map = ModuleMorphism(i.source, s.map.source, c.attaching, check=False)
            src, inj, _ = direct_sum([t.members[cc.member].target for cc in s.cells])
            leg_k = ModuleMorphism(i.target, s.obj, la.matmul(s.leg.matrix, inj[k].matrix, p.p), check=False)
            v = solve_lift(LiftingProblem(i, p, u @ attach_map, bottom @ tau @ leg_k))
            if v is None:
                raise ValueError(f"cell {k} of stage {n} has no lift; p is not I-injective")
            parts.append(v)
        both = copair([s.leg, s.map])
        vs = copair(parts, p.source)
        img = np.concatenate([vs.matrix, u.matrix], axis=1)
        u = factor_through_epi(both, ModuleMorphism(both.source, p.source, img, check=False))
    return u

"""Finite-dimensional modules over a finite-dimensional algebra over F_p.

An :class:`Algebra` is given by structure constants ``c[i, j, k]`` with
``e_i * e_j = sum_k c[i, j, k] e_k``.  A :class:`Module` stores one action
matrix per basis element, acting on column vectors, so that

    action[i] @ action[j] == sum_k c[i, j, k] * action[k]

and a :class:`ModuleMorphism` is a matrix of shape ``(target.dim, source.dim)``
commuting with every action matrix.  All objects carry an explicit basis;
isomorphisms are always returned as matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg as la
from .linalg import FieldPrime

__all__ = [
    "AxiomError",
    "Algebra",
    "Module",
    "ModuleMorphism",
    "ShortExactSequence",
    "ExactStructure",
    "GeneratorError",
    "kernel",
    "cokernel",
    "image",
    "pushout",
    "pullback",
    "direct_sum",
    "direct_sum_map",
    "copair",
    "pair",
    "hom_basis",
    "hom_space",
    "hom_dim",
    "factor_through_mono",
    "factor_through_epi",
    "is_conflation",
    "find_isomorphism",
]


class AxiomError(ValueError):
    """An algebra, module or morphism violates its defining identities."""


class GeneratorError(ValueError):
    """A relative generator fails to cover an object."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=la.DTYPE)
    a.setflags(write=False)
    return a


class Algebra:
    """Associative unital algebra over F_p given by structure constants."""

    def __init__(self, field: FieldPrime | int, structure, unit, name: str = ""):
        self.field = field if isinstance(field, FieldPrime) else FieldPrime(field)
        p = self.field.p
        c = np.array(structure, dtype=la.DTYPE) % p
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise AxiomError(f"structure constants must be d x d x d, got {c.shape}")
        self.dim = c.shape[0]
        self.structure = _readonly(c)
        u = np.array(unit, dtype=la.DTYPE).reshape(-1) % p
        if u.shape != (self.dim,):
            raise AxiomError(f"unit has length {u.size}, expected {self.dim}")
        self.unit = _readonly(u)
        self.name = name
        self._check_axioms()

    @property
    def p(self) -> int:
        return self.field.p

    def _check_axioms(self):
        c, p, d = self.structure, self.p, self.dim
        # (e_i e_j) e_k versus e_i (e_j e_k)
        lhs = np.einsum("ijm,mkn->ijkn", c, c) % p
        rhs = np.einsum("jkm,imn->ijkn", c, c) % p
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j, k, _ = bad[0]
            raise AxiomError(f"associativity fails for basis triple ({i}, {j}, {k})")
        left = np.einsum("i,ijk->jk", self.unit, c) % p
        right = np.einsum("i,jik->jk", self.unit, c) % p
        eye = la.identity(d)
        if not np.array_equal(left, eye):
            raise AxiomError("unit is not a left identity")
        if not np.array_equal(right, eye):
            raise AxiomError("unit is not a right identity")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Algebra)
            and self.p == other.p
            and np.array_equal(self.structure, other.structure)
            and np.array_equal(self.unit, other.unit)
        )

    def __hash__(self):
        return hash((self.p, self.dim, self.structure.tobytes()))

    def __repr__(self):
        label = self.name or "Algebra"
        return f"<{label} over F_{self.p}, dim {self.dim}>"

    def multiply(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=la.DTYPE)
        y = np.asarray(y, dtype=la.DTYPE)
        return np.einsum("i,j,ijk->k", x, y, self.structure) % self.p

    @cached_property
    def left_multiplication(self) -> np.ndarray:
        """``L[i]`` is the matrix of ``x -> e_i * x``."""
        return _readonly(np.transpose(self.structure, (0, 2, 1)))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Basis indices generating the algebra (greedy, deterministic)."""
        p, d = self.p, self.dim
        L = self.left_multiplication

        def closure(gens):
            # words in the generators applied to the unit
            span = la.SpanBuilder(d, p)
            span.add(self.unit)
            frontier = [self.unit]
            while frontier:
                v = frontier.pop()
                for g in gens:
                    w = L[g] @ v % p
                    if span.add(w):
                        frontier.append(w)
            return span

        chosen: list[int] = []
        span = closure(chosen)
        for i in range(d):
            if len(span) == d:
                break
            if span.contains(np.eye(d, dtype=la.DTYPE)[i]):
                continue
            chosen.append(i)
            span = closure(chosen)
        return tuple(chosen)

    def regular_module(self, name: str = "") -> "Module":
        return Module(self, self.left_multiplication, name=name or "A", check=False)

    def zero_module(self) -> "Module":
        return Module(self, np.zeros((self.dim, 0, 0), dtype=la.DTYPE), name="0", check=False)

    def tensor(self, other: "Algebra", name: str = "") -> "Algebra":
        """Tensor product; basis ordered with ``self`` major."""
        if self.p != other.p:
            raise AxiomError("tensor of algebras over different fields")
        c = np.einsum("ace,bdf->abcdef", self.structure, other.structure)
        d = self.dim * other.dim
        c = c.reshape(d, d, d)
        u = np.kron(self.unit, other.unit)
        return Algebra(self.field, c, u, name=name)

    @classmethod
    def truncated_polynomial(cls, p: int, n: int, name: str = "") -> "Algebra":
        """F_p[x]/(x^n) in the basis 1, x, ..., x^(n-1)."""
        c = np.zeros((n, n, n), dtype=la.DTYPE)
        for i, j in itertools.product(range(n), repeat=2):
            if i + j < n:
                c[i, j, i + j] = 1
        unit = np.zeros(n, dtype=la.DTYPE)
        unit[0] = 1
        return cls(p, c, unit, name=name or f"F_{p}[x]/(x^{n})")


@dataclass(frozen=True)
class Presentation:
    """A generating set of a module and the relations among its generators.

    ``span[:, j*d + i]`` is ``action[i] @ generators[:, j]``; the columns
    ``basis_cols`` of ``span`` form a basis of the module.  ``relations``
    generates (as a submodule of the free module on the generators) the kernel
    of ``span``.
    """

    generators: np.ndarray
    span: np.ndarray
    basis_cols: tuple[int, ...]
    basis_inv: np.ndarray
    relations: np.ndarray

    @property
    def rank(self) -> int:
        return self.generators.shape[1]


class Module:
    """A finite-dimensional module over an :class:`Algebra`."""

    def __init__(self, algebra: Algebra, action, name: str = "", check: bool = True):
        self.algebra = algebra
        a = np.array(action, dtype=la.DTYPE)
        d = algebra.dim
        if a.ndim == 1 and a.size == 0:
            a = np.zeros((d, 0, 0), dtype=la.DTYPE)
        if a.ndim != 3 or a.shape[0] != d or a.shape[1] != a.shape[2]:
            raise AxiomError(f"action must be {d} square matrices, got shape {a.shape}")
        self.action = _readonly(a % algebra.p)
        self.dim = a.shape[1]
        self.name = name
        if check:
            self.check()

    def check(self):
        A, p = self.algebra, self.algebra.p
        R = self.action
        unit_action = np.einsum("i,iab->ab", A.unit, R) % p
        if not np.array_equal(unit_action, la.identity(self.dim)):
            raise AxiomError(f"module {self.name or '?'}: unit does not act as identity")
        lhs = np.einsum("iab,jbc->ijac", R, R) % p
        rhs = np.einsum("ijk,kac->ijac", A.structure, R) % p
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            i, j = bad[0][:2]
            raise AxiomError(
                f"module {self.name or '?'}: action(e_{i}) @ action(e_{j}) "
                f"!= sum_k c[{i},{j},k] action(e_k)"
            )

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, i: int) -> np.ndarray:
        return self.action[i]

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Module)
            and self.dim == other.dim
            and self.algebra == other.algebra
            and np.array_equal(self.action, other.action)
        )

    def __hash__(self):
        return hash((self.dim, self.action.tobytes()))

    def __repr__(self):
        return f"<Module {self.name or '?'} dim {self.dim}>"

    def named(self, name: str) -> "Module":
        return Module(self.algebra, self.action, name=name, check=False)

    def change_basis(self, t: np.ndarray, name: str = "") -> tuple["Module", "ModuleMorphism"]:
        """Module with action ``t^-1 a t`` and the isomorphism to ``self``."""
        p = self.p
        tinv = la.inverse(t, p)
        act = np.stack([la.matmul(la.matmul(tinv, a, p), t, p) for a in self.action]) if self.dim else self.action
        new = Module(self.algebra, act, name=name or self.name, check=False)
        return new, ModuleMorphism(new, self, t, check=False)

    @cached_property
    def presentation(self) -> Presentation:
        A, p, n, d = self.algebra, self.p, self.dim, self.algebra.dim
        R = self.action
        # order candidates by the size of the cyclic submodule they generate
        sizes = [la.rank(R[:, :, c], p) for c in range(n)]
        order = sorted(range(n), key=lambda c: (-sizes[c], c))
        span = la.SpanBuilder(n, p)
        gens: list[int] = []
        for c in order:
            if len(span) == n:
                break
            if span.contains(np.eye(n, dtype=la.DTYPE)[c]):
                continue
            gens.append(c)
            span.add_many(R[:, :, c])
        G = np.zeros((n, len(gens)), dtype=la.DTYPE)
        for j, c in enumerate(gens):
            G[c, j] = 1
        r = len(gens)
        S = np.einsum("iab,bj->aji", R, G).reshape(n, r * d) % p
        _, piv = la.rref(S, p)
        basis_cols = tuple(piv)
        binv = la.inverse(S[:, list(basis_cols)], p) if n else la.zeros(0, 0)
        K = la.kernel_basis(S, p)
        rels = la.SpanBuilder(r * d, p)
        L = A.left_multiplication
        chosen = []
        for t in range(K.shape[1]):
            v = K[:, t]
            if rels.contains(v):
                continue
            chosen.append(v)
            X = v.reshape(r, d)
            rels.add_many(np.einsum("lki,ji->ljk", L, X).reshape(d, r * d) % p)
        rel = np.stack(chosen, axis=1) if chosen else la.zeros(r * d, 0)
        return Presentation(_readonly(G), _readonly(S), basis_cols, _readonly(binv), _readonly(rel))


class ModuleMorphism:
    """A module homomorphism ``source -> target`` given by its matrix."""

    def __init__(self, source: Module, target: Module, matrix, check: bool = True, name: str = ""):
        if source.algebra != target.algebra:
            raise AxiomError("morphism between modules over different algebras")
        p = source.p
        m = np.array(matrix, dtype=la.DTYPE).reshape(target.dim, source.dim) % p
        self.source = source
        self.target = target
        self.matrix = _readonly(m)
        self.name = name
        if check:
            self.check()

    def check(self):
        p = self.source.p
        for i in self.source.algebra.generators:
            lhs = la.matmul(self.matrix, self.source.action[i], p)
            rhs = la.matmul(self.target.action[i], self.matrix, p)
            if not np.array_equal(lhs, rhs):
                raise AxiomError(
                    f"morphism {self.name or '?'}: matrix @ action_source(e_{i}) "
                    f"!= action_target(e_{i}) @ matrix"
                )

    @property
    def p(self) -> int:
        return self.source.p

    @classmethod
    def identity(cls, m: Module) -> "ModuleMorphism":
        return cls(m, m, la.identity(m.dim), check=False)

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModuleMorphism":
        return cls(source, target, la.zeros(target.dim, source.dim), check=False)

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``self @ other`` is the composite ``self o other``."""
        if other.target != self.source:
            raise ValueError("composition of non-composable morphisms")
        return ModuleMorphism(other.source, self.target, la.matmul(self.matrix, other.matrix, self.p), check=False)

    def _same_shape(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms have different source or target")

    def __add__(self, other):
        self._same_shape(other)
        return ModuleMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        self._same_shape(other)
        return ModuleMorphism(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return ModuleMorphism(self.source, self.target, -self.matrix, check=False)

    def scale(self, c: int) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, c * self.matrix, check=False)

    def __eq__(self, other):
        return (
            isinstance(other, ModuleMorphism)
            and self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"<ModuleMorphism {self.name or '?'}: {self.source.dim} -> {self.target.dim}>"

    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def inverse(self) -> "ModuleMorphism":
        return ModuleMorphism(self.target, self.source, la.inverse(self.matrix, self.p), check=False)


def _submodule(m: Module, basis: np.ndarray, name: str = "") -> Module:
    """Module structure on the column span of ``basis`` (full column rank)."""
    p, k = m.p, basis.shape[1]
    if k == 0:
        return m.algebra.zero_module()
    _, rows = la.rref(basis.T, p)
    sq_inv = la.inverse(basis[rows], p)
    acts = []
    for a in m.action:
        img = la.matmul(a, basis, p)
        acts.append(la.matmul(sq_inv, img[rows], p))
        if not np.array_equal(la.matmul(basis, acts[-1], p), img):
            raise AxiomError("column span is not a submodule")
    return Module(m.algebra, np.stack(acts), name=name, check=False)


def kernel(f: ModuleMorphism) -> tuple[Module, ModuleMorphism]:
    """Kernel object and its inclusion into ``f.source``."""
    K = la.kernel_basis(f.matrix, f.p)
    km = _submodule(f.source, K, name=f"ker {f.name}".strip())
    return km, ModuleMorphism(km, f.source, K, check=False)


def image(f: ModuleMorphism) -> tuple[Module, ModuleMorphism, ModuleMorphism]:
    """``f = inclusion o corestriction`` through its image."""
    W, _ = la.column_basis(f.matrix, f.p)
    im = _submodule(f.target, W, name=f"im {f.name}".strip())
    inc = ModuleMorphism(im, f.target, W, check=False)
    core = factor_through_mono(inc, f)
    return im, core, inc


def cokernel(f: ModuleMorphism) -> tuple[Module, ModuleMorphism]:
    """Cokernel object and the projection from ``f.target``.

    The quotient basis is the set of coordinate vectors that are not pivots of
    the row-reduced image.
    """
    p, n = f.p, f.target.dim
    R, piv = la.rref(f.matrix.T, p)
    pivset = set(piv)
    rest = [c for c in range(n) if c not in pivset]
    M0 = la.zeros(n, n)
    if piv:
        M0[:, piv] = R[: len(piv)].T
    q = (la.identity(n) - M0)[rest] % p
    s = la.identity(n)[:, rest]
    if rest:
        acts = np.stack([la.matmul(la.matmul(q, a, p), s, p) for a in f.target.action])
        c = Module(f.target.algebra, acts, name=f"coker {f.name}".strip(), check=False)
    else:
        c = f.target.algebra.zero_module()
    return c, ModuleMorphism(f.target, c, q, check=False)


def direct_sum(ms: Sequence[Module], algebra: Algebra | None = None):
    """Block-diagonal sum with its canonical injections and projections."""
    ms = list(ms)
    if not ms:
        if algebra is None:
            raise ValueError("empty direct sum needs an explicit algebra")
        z = algebra.zero_module()
        return z, [], []
    A = ms[0].algebra
    for m in ms[1:]:
        if m.algebra != A:
            raise AxiomError("direct sum of modules over different algebras")
    if len(ms) == 1:
        m = ms[0]
        return m, [ModuleMorphism.identity(m)], [ModuleMorphism.identity(m)]
    n = sum(m.dim for m in ms)
    acts = np.zeros((A.dim, n, n), dtype=la.DTYPE)
    offsets = list(itertools.accumulate([0] + [m.dim for m in ms]))
    for m, o in zip(ms, offsets):
        acts[:, o : o + m.dim, o : o + m.dim] = m.action
    s = Module(A, acts, name=" + ".join(m.name or "?" for m in ms), check=False)
    eye = la.identity(n)
    inj = [ModuleMorphism(m, s, eye[:, o : o + m.dim], check=False) for m, o in zip(ms, offsets)]
    proj = [ModuleMorphism(s, m, eye[o : o + m.dim], check=False) for m, o in zip(ms, offsets)]
    return s, inj, proj


def direct_sum_map(fs: Sequence[ModuleMorphism], algebra: Algebra | None = None) -> ModuleMorphism:
    """Componentwise morphism between direct sums."""
    src, _, _ = direct_sum([f.source for f in fs], algebra)
    tgt, _, _ = direct_sum([f.target for f in fs], algebra)
    m = la.zeros(tgt.dim, src.dim)
    r = c = 0
    for f in fs:
        m[r : r + f.target.dim, c : c + f.source.dim] = f.matrix
        r += f.target.dim
        c += f.source.dim
    return ModuleMorphism(src, tgt, m, check=False)


def copair(fs: Sequence[ModuleMorphism], target: Module | None = None) -> ModuleMorphism:
    """``[f_1 ... f_m]`` from the direct sum of sources to a common target."""
    if not fs:
        if target is None:
            raise ValueError("empty copairing needs a target")
        return ModuleMorphism.zero(target.algebra.zero_module(), target)
    src, _, _ = direct_sum([f.source for f in fs])
    return ModuleMorphism(src, fs[0].target, np.concatenate([f.matrix for f in fs], axis=1), check=False)


def pair(fs: Sequence[ModuleMorphism], source: Module | None = None) -> ModuleMorphism:
    """Morphism into the direct sum of targets."""
    if not fs:
        if source is None:
            raise ValueError("empty pairing needs a source")
        return ModuleMorphism.zero(source, source.algebra.zero_module())
    tgt, _, _ = direct_sum([f.target for f in fs])
    return ModuleMorphism(fs[0].source, tgt, np.concatenate([f.matrix for f in fs], axis=0), check=False)


def pushout(i: ModuleMorphism, f: ModuleMorphism) -> tuple[Module, ModuleMorphism, ModuleMorphism]:
    """Pushout of ``B <-i- A -f-> X``; returns ``(Y, B -> Y, X -> Y)``."""
    if i.source != f.source:
        raise ValueError("pushout: morphisms do not share a source")
    B, X = i.target, f.target
    s, _, _ = direct_sum([B, X])
    m = ModuleMorphism(i.source, s, np.concatenate([i.matrix, -f.matrix], axis=0) % i.p, check=False)
    y, q = cokernel(m)
    leg_b = ModuleMorphism(B, y, q.matrix[:, : B.dim], check=False)
    leg_x = ModuleMorphism(X, y, q.matrix[:, B.dim :], check=False)
    return y, leg_b, leg_x


def pullback(p: ModuleMorphism, g: ModuleMorphism) -> tuple[Module, ModuleMorphism, ModuleMorphism]:
    """Pullback of ``B -p-> C <-g- X``; returns ``(P, P -> B, P -> X)``."""
    if p.target != g.target:
        raise ValueError("pullback: morphisms do not share a target")
    B, X = p.source, g.source
    s, _, _ = direct_sum([B, X])
    m = ModuleMorphism(s, p.target, np.concatenate([p.matrix, -g.matrix], axis=1) % p.p, check=False)
    P, k = kernel(m)
    leg_b = ModuleMorphism(P, B, k.matrix[: B.dim], check=False)
    leg_x = ModuleMorphism(P, X, k.matrix[B.dim :], check=False)
    return P, leg_b, leg_x


def factor_through_mono(mono: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism:
    """The unique ``u`` with ``mono o u == g`` (``mono`` injective)."""
    if mono.target != g.target:
        raise ValueError("factor_through_mono: targets differ")
    x = la.solve(mono.matrix, g.matrix, g.p)
    if x is None:
        raise ValueError("morphism does not factor through the monomorphism")
    return ModuleMorphism(g.source, mono.source, x, check=False)


def factor_through_epi(epi: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism:
    """The unique ``w`` with ``w o epi == g`` (``epi`` surjective)."""
    if epi.source != g.source:
        raise ValueError("factor_through_epi: sources differ")
    x = la.solve(epi.matrix.T, g.matrix.T, g.p)
    if x is None:
        raise ValueError("morphism does not factor through the epimorphism")
    return ModuleMorphism(epi.target, g.target, x.T, check=False)


def hom_space(m: Module, n: Module) -> np.ndarray:
    """Basis of Hom(m, n) as an array of shape ``(h, n.dim, m.dim)``.

    Solved on the images of a generating set of ``m`` subject to its
    relations, which keeps the system small when ``m`` is small.
    """
    if m.algebra != n.algebra:
        raise AxiomError("Hom between modules over different algebras")
    p, d, nn = m.p, m.algebra.dim, n.dim
    if m.dim == 0 or nn == 0:
        return np.zeros((0, nn, m.dim), dtype=la.DTYPE)
    pres = m.presentation
    r = pres.rank
    RN = n.action
    K = pres.relations.reshape(r, d, -1)
    s = K.shape[2]
    if s:
        blocks = np.einsum("jit,iab->tajb", K, RN).reshape(s * nn, r * nn) % p
        Y = la.kernel_basis(blocks, p)
    else:
        Y = la.identity(r * nn)
    h = Y.shape[1]
    if h == 0:
        return np.zeros((0, nn, m.dim), dtype=la.DTYPE)
    Ys = Y.T.reshape(h, r, nn)
    # Psi[h, a, j, i] = action_n(e_i) @ y_j
    psi = np.einsum("iab,hjb->haji", RN, Ys).reshape(h, nn, r * d) % p
    sel = psi[:, :, list(pres.basis_cols)]
    out = np.stack([la.matmul(x, pres.basis_inv, p) for x in sel])
    return out


def _hom_space_commuting(m: Module, n: Module) -> np.ndarray:
    p, a, b = m.p, n.dim, m.dim
    if a == 0 or b == 0:
        return np.zeros((0, a, b), dtype=la.DTYPE)
    rows = []
    for i in m.algebra.generators:
        # row-major vec: vec(X M) = (I (x) M^T) vec X, vec(N X) = (N (x) I) vec X
        rows.append(np.kron(la.identity(a), m.action[i].T) - np.kron(n.action[i], la.identity(b)))
    K = la.kernel_basis(np.concatenate(rows, axis=0) % p, p)
    return K.T.reshape(-1, a, b)


def hom_basis(m: Module, n: Module, method: str = "presentation") -> list[ModuleMorphism]:
    """Deterministic basis of Hom(m, n).

    ``method="commuting"`` solves the commuting-matrix system
    ``X action_m(e_i) = action_n(e_i) X`` directly in the entries of X.
    """
    if method == "presentation":
        H = hom_space(m, n)
    elif method == "commuting":
        if m.algebra != n.algebra:
            raise AxiomError("Hom between modules over different algebras")
        H = _hom_space_commuting(m, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return [ModuleMorphism(m, n, h, check=False) for h in H]


def hom_dim(m: Module, n: Module) -> int:
    return hom_space(m, n).shape[0]


def _postcomposition_rank(H: np.ndarray, g: ModuleMorphism) -> int:
    if H.shape[0] == 0:
        return 0
    comp = np.einsum("ab,hbc->hac", g.matrix, H) % g.p
    return la.rank(comp.reshape(H.shape[0], -1), g.p)


@dataclass(frozen=True)
class ShortExactSequence:
    """A kernel-cokernel pair ``A >-> B ->> C``."""

    inflation: ModuleMorphism
    deflation: ModuleMorphism

    def __post_init__(self):
        i, d = self.inflation, self.deflation
        if i.target != d.source:
            raise AxiomError("inflation target differs from deflation source")
        if not (d @ i).is_zero():
            raise AxiomError("deflation o inflation != 0")
        if not i.is_injective():
            raise AxiomError("inflation is not injective")
        if not d.is_surjective():
            raise AxiomError("deflation is not surjective")
        if i.rank() != i.target.dim - d.target.dim:
            raise AxiomError("sequence is not exact in the middle")

    @property
    def left(self) -> Module:
        return self.inflation.source

    @property
    def middle(self) -> Module:
        return self.inflation.target

    @property
    def right(self) -> Module:
        return self.deflation.target

    @classmethod
    def split(cls, a: Module, c: Module) -> "ShortExactSequence":
        _, inj, proj = direct_sum([a, c])
        return cls(inj[0], proj[1])

    @classmethod
    def of_inflation(cls, f: ModuleMorphism) -> "ShortExactSequence":
        return cls(f, cokernel(f)[1])

    @classmethod
    def of_deflation(cls, f: ModuleMorphism) -> "ShortExactSequence":
        return cls(kernel(f)[1], f)


@dataclass(frozen=True)
class ExactStructure:
    """The abelian exact structure, or the one relative to a generator G.

    A relative structure keeps G as a tuple of summands; a sequence is a
    conflation when Hom(G_s, -) keeps it short exact for every summand.
    """

    kind: str = "abelian"
    summands: tuple[Module, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("abelian", "relative"):
            raise ValueError(f"unknown exact structure kind {self.kind!r}")
        if self.kind == "relative" and not self.summands:
            raise ValueError("relative structure needs a generator")

    @classmethod
    def abelian(cls) -> "ExactStructure":
        return cls("abelian")

    @classmethod
    def relative(cls, generator: Module | Sequence[Module]) -> "ExactStructure":
        gs = (generator,) if isinstance(generator, Module) else tuple(generator)
        return cls("relative", gs)

    @property
    def is_abelian(self) -> bool:
        return self.kind == "abelian"

    @cached_property
    def generator(self) -> Module | None:
        if self.is_abelian:
            return None
        return direct_sum(self.summands)[0]

    def __repr__(self):
        if self.is_abelian:
            return "ExactStructure(abelian)"
        return f"ExactStructure(relative, generator dim {self.generator.dim})"

    def is_conflation(self, s: ShortExactSequence) -> bool:
        if self.is_abelian:
            return True
        for g in self.summands:
            HA = hom_space(g, s.left)
            HB = hom_space(g, s.middle)
            HC = hom_space(g, s.right)
            rf = _postcomposition_rank(HA, s.inflation)
            rg = _postcomposition_rank(HB, s.deflation)
            if rf != HA.shape[0] or rg != HC.shape[0] or rf + rg != HB.shape[0]:
                return False
        return True

    def is_inflation(self, f: ModuleMorphism) -> bool:
        if not f.is_injective():
            return False
        return self.is_conflation(ShortExactSequence.of_inflation(f))

    def is_deflation(self, f: ModuleMorphism) -> bool:
        if not f.is_surjective():
            return False
        return self.is_conflation(ShortExactSequence.of_deflation(f))

    def covers(self, m: Module) -> bool:
        """Whether Hom(G, -) detects ``m``: the evaluation map onto ``m`` is onto."""
        if self.is_abelian:
            return True
        vecs = [h.reshape(m.dim, -1) for g in self.summands for h in hom_space(g, m)]
        if not vecs:
            return m.dim == 0
        return la.rank(np.concatenate(vecs, axis=1), m.p) == m.dim


def is_conflation(s: ShortExactSequence, e: ExactStructure) -> bool:
    return e.is_conflation(s)


def find_isomorphism(m: Module, n: Module, tries: int = 256, seed: int = 0) -> ModuleMorphism | None:
    """Search Hom(m, n) for an invertible element.

    Exhaustive when Hom has at most 2**12 elements, otherwise random
    combinations from a seeded generator.  ``None`` means none was found.
    """
    if m.dim != n.dim or m.algebra != n.algebra:
        return None
    if m.dim == 0:
        return ModuleMorphism(m, n, la.zeros(0, 0), check=False)
    H = hom_space(m, n)
    h, p = H.shape[0], m.p
    if h == 0:
        return None
    if p**h <= 4096:
        coeffs = itertools.product(range(p), repeat=h)
    else:
        rng = np.random.default_rng(seed)
        coeffs = (rng.integers(0, p, size=h) for _ in range(tries))
    for c in coeffs:
        x = np.tensordot(np.asarray(c, dtype=la.DTYPE), H, axes=1) % p
        if la.is_invertible(x, p):
            return ModuleMorphism(m, n, x, check=False)
    return None

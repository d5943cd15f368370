import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactcat.cotorsion import (
    EklofHypothesisError,
    GenerationError,
    TestUniverse,
    cotorsion_report,
    eklof_splitting,
    enough_projectives_via_pushout,
    evaluation_cover,
    ext1,
    extension_from_cocycle,
    free_cover,
    in_left_perp,
    in_right_perp,
    is_homological,
    relative_projective_cover,
    special_precover,
    special_preenvelope,
    split_over_cells,
    summand_of_cell_check,
)
from exactcat.fixtures import (
    dual_numbers,
    random_extension,
    random_filtration,
    random_module,
    random_morphism,
)
from exactcat.lifting import Filtration, MorphismSet, factorize
from exactcat.modcat import (
    ExactStructure,
    GeneratorError,
    ModuleMorphism,
    ShortExactSequence,
    find_isomorphism,
)
from oracles import brute_ext_dim_dual_numbers, brute_hom, brute_is_iso, nonsplit_extension_exists

seeds = st.integers(0, 2**32 - 1)


def _has_section(p: ModuleMorphism) -> bool:
    ident = ModuleMorphism.identity(p.target)
    return any((p @ ModuleMorphism(p.target, p.source, h)) == ident for h in brute_hom(p.target, p.source))


# -- covers ------------------------------------------------------------------


def test_cover_examples(fx):
    s = relative_projective_cover(fx.zero)
    assert s.middle.dim == 0
    s = relative_projective_cover(fx.A)
    assert _has_section(s.deflation)
    s = relative_projective_cover(fx.k)
    assert s.deflation == free_cover(fx.k).deflation
    assert brute_is_iso(s.middle, fx.A) and brute_is_iso(s.left, fx.k)


def test_relative_cover_is_a_g_deflation(fx, universe):
    G = fx.G
    for m in universe:
        s = relative_projective_cover(m, G)
        assert G.is_conflation(s)


def test_relative_cover_needs_a_generator(fx):
    with pytest.raises(GeneratorError):
        relative_projective_cover(fx.A, ExactStructure.relative([fx.k]))


# -- Ext ---------------------------------------------------------------------


def test_ext_examples(fx):
    A, k = fx.A, fx.k
    assert ext1(k, k).dim == 1
    assert ext1(k, A).dim == 0
    for m in (fx.zero, k, A, fx.sum(A, k)):
        assert ext1(A, m).dim == 0


def test_ext_dims_match_extension_count(fx, universe):
    for m in universe[:6]:
        for n in universe[:6]:
            if m.dim * n.dim <= 9:
                assert ext1(m, n).dim == brute_ext_dim_dual_numbers(m, n), (m.name, n.name)


def test_ext_examples_by_middle_term_search(fx):
    assert nonsplit_extension_exists(fx.k, fx.k, 2)
    assert not nonsplit_extension_exists(fx.k, fx.A, 3)
    assert not nonsplit_extension_exists(fx.A, fx.k, 3)


def test_relative_ext_vanishes_when_everything_is_g_projective(fx, universe):
    # every module is a sum of A and k, so the relative structure is split
    for m in universe[:6]:
        for n in universe[:6]:
            assert ext1(m, n, fx.G).dim == 0


@given(seeds)
@settings(max_examples=50)
def test_ext_is_cover_independent(seed):
    fx = dual_numbers()
    rng = np.random.default_rng(seed)
    m, n = random_module(rng, fx, 3), random_module(rng, fx, 3)
    assert ext1(m, n).dim == ext1(m, n, cover=evaluation_cover(m, [fx.A])).dim
    # relative to A alone the conflations are the abelian ones
    RA = ExactStructure.relative([fx.A])
    assert ext1(m, n, RA).dim == ext1(m, n).dim
    G = fx.G
    assert ext1(m, n, G).dim == ext1(m, n, G, cover=evaluation_cover(m, [fx.A, fx.k])).dim


@given(seeds)
@settings(max_examples=40)
def test_yoneda_round_trip(seed):
    fx = dual_numbers()
    rng = np.random.default_rng(seed)
    m, n = random_module(rng, fx, 3), random_module(rng, fx, 3)
    E = ext1(m, n)
    c = random_morphism(rng, E.resolution.left, n)
    s = extension_from_cocycle(c, E.resolution)
    assert ExactStructure.abelian().is_conflation(s)
    cls = E.classify_extension(s)
    assert np.array_equal(cls, E.classify(c))
    # zero class exactly when the sequence splits
    assert (not cls.any()) == _has_section(s.deflation)


def test_extension_from_cocycle_examples(fx):
    E = ext1(fx.k, fx.k)
    zero = ModuleMorphism.zero(E.resolution.left, fx.k)
    s = extension_from_cocycle(zero, E.resolution)
    assert _has_section(s.deflation)
    s = extension_from_cocycle(E.cocycle_basis[0], E.resolution)
    assert brute_is_iso(s.middle, fx.A)


def test_scaling_a_cocycle_gives_isomorphic_middle():
    fx = dual_numbers(3)
    E = ext1(fx.k, fx.k)
    c = E.cocycle_basis[0]
    s1 = extension_from_cocycle(c, E.resolution)
    s2 = extension_from_cocycle(c.scale(2), E.resolution)
    assert find_isomorphism(s1.middle, s2.middle) is not None
    assert E.classify_extension(s2).tolist() == [2]


def test_perp_examples(fx):
    assert in_right_perp(fx.k, [])
    assert in_right_perp(fx.A, [fx.k])
    assert not in_right_perp(fx.k, [fx.k])
    assert in_left_perp(fx.A, [fx.k, fx.A])


# -- Eklof ---------------------------------------------------------------------


def test_eklof_examples(fx):
    empty = Filtration(fx.zero, ())
    s = eklof_splitting(empty, fx.k, ShortExactSequence.split(fx.k, fx.zero))
    assert s.source.dim == 0
    # a split class over the filtration 0 >-> A
    flt = Filtration(fx.zero, (ShortExactSequence.split(fx.zero, fx.A),))
    split = ShortExactSequence.split(fx.k, flt.top)
    sec = eklof_splitting(flt, fx.k, split)
    assert (split.deflation @ sec) == ModuleMorphism.identity(flt.top)


def test_eklof_every_extension_of_free_by_k_splits(fx):
    flt = Filtration(fx.zero, (ShortExactSequence.split(fx.zero, fx.A),))
    rng = np.random.default_rng(3)
    for _ in range(10):
        s = random_extension(rng, flt.top, fx.k)
        sec = eklof_splitting(flt, fx.k, s)
        assert (s.deflation @ sec) == ModuleMorphism.identity(flt.top)


def test_eklof_rejects_cokernels_outside_the_perp(fx):
    flt = random_filtration(np.random.default_rng(0), fx.algebra, [fx.k])
    with pytest.raises(EklofHypothesisError):
        eklof_splitting(flt, fx.k, ShortExactSequence.split(fx.k, flt.top))


@given(seeds)
@settings(max_examples=30)
def test_eklof_on_random_filtrations(seed):
    fx = dual_numbers()
    rng = np.random.default_rng(seed)
    target = random_module(rng, fx, 3)
    allowed = [c for c in (fx.k, fx.A, fx.sum(fx.A, fx.k)) if ext1(c, target).dim == 0]
    length = int(rng.integers(0, 5))
    coks = [allowed[int(rng.integers(0, len(allowed)))] for _ in range(length)]
    flt = random_filtration(rng, fx.algebra, coks)
    assert ext1(flt.top, target).dim == 0
    s = random_extension(rng, flt.top, target)
    sec = eklof_splitting(flt, target, s)
    assert (s.deflation @ sec) == ModuleMorphism.identity(flt.top)


def test_split_over_cells(fx):
    I = fx.free_set()
    s = random_extension(np.random.default_rng(5), fx.sum(fx.A, fx.A), fx.k)
    sec, flt = split_over_cells(s, I)
    assert (s.deflation @ sec) == ModuleMorphism.identity(s.right)
    with pytest.raises(EklofHypothesisError):
        split_over_cells(ShortExactSequence.split(fx.k, fx.k), fx.socle_set())


# -- homological sets and approximations ------------------------------------------


def test_is_homological_examples(fx):
    U = TestUniverse([fx.zero, fx.k, fx.A, fx.sum(fx.A, fx.k)])
    assert is_homological(MorphismSet([]), U).holds
    v = is_homological(fx.socle_set(), U)
    assert v.holds and 2 in v.injective


def test_homological_vacuous_without_injectives(fx):
    # k -> 0 does not lift against the socle: h socle = 0 for every h: A -> k
    v = is_homological(fx.socle_set(), TestUniverse([fx.k, fx.sum(fx.k, fx.k)]))
    assert v.holds and v.injective == ()


def test_homological_failure(fx):
    # every X -> 0 lifts against 0 -> k, but Ext^1(k, k) != 0
    I = MorphismSet([ModuleMorphism.zero(fx.zero, fx.k)])
    v = is_homological(I, TestUniverse([fx.A, fx.k]))
    assert not v.holds
    assert v.injective == (0, 1) and v.counterexamples == ((1, 0, 1),)


def test_preenvelope_examples(fx):
    I = fx.socle_set()
    pre = special_preenvelope(fx.A, I)
    assert pre.sequence.middle == fx.A and pre.sequence.right.dim == 0
    pre = special_preenvelope(fx.k, I)
    assert brute_is_iso(pre.sequence.middle, fx.A) and brute_is_iso(pre.sequence.right, fx.k)
    assert ext1(fx.k, pre.sequence.middle).dim == 0
    pre = special_preenvelope(fx.zero, I)
    assert pre.sequence.middle.dim == 0
    assert pre.verify(I, I.structure)


def test_precover_examples(fx):
    I = fx.full_set()
    prc = special_precover(fx.k, I)
    assert prc.verify(I, I.structure)
    assert prc.sequence.deflation.is_surjective()
    assert prc.sequence.middle.dim >= 2
    prc = special_precover(fx.zero, I)
    assert prc.sequence.middle.dim == 0
    # 0 -> A with I = {0 -> A} attaches one copy of A per basis vector of Hom(A, A)
    prc = special_precover(fx.A, fx.free_set())
    assert prc.sequence.middle.dim == 4 and brute_is_iso(prc.sequence.left, fx.A)
    # with the identity cover the kernel vanishes
    v = summand_of_cell_check(fx.A, fx.free_set())
    assert v.witness.verify()


def test_precover_needs_generation(fx):
    # cells of 0 -> k only build sums of k, which never map onto A
    with pytest.raises(GenerationError):
        special_precover(fx.A, MorphismSet([ModuleMorphism.zero(fx.zero, fx.k)]))
    # the socle alone does generate: 0 -> k -> A is a two-stage cell complex
    prc = special_precover(fx.A, fx.socle_set())
    assert len(prc.trace) == 2 and prc.sequence.deflation.is_iso()


@pytest.mark.parametrize("which", ["socle", "full", "free"])
def test_approximations_on_universe(fx, universe, which):
    I = {"socle": fx.socle_set(), "full": fx.full_set(), "free": fx.free_set()}[which]
    e = I.structure
    coks = I.cokernels()
    for m in universe:
        pre = special_preenvelope(m, I, budget=8)
        assert pre.verify(I, e)
        assert all(ext1(c, pre.sequence.middle).dim == 0 for c in coks)
        if which != "socle":
            prc = special_precover(m, I, budget=8)
            assert prc.verify(I, e)


def test_cok_perp_equals_cell_perp(fx, universe):
    I = fx.full_set()
    cells = [factorize(ModuleMorphism.zero(fx.zero, m), I, budget=8).trace.end for m in universe[:6]]
    cells += [special_preenvelope(m, I).trace.end for m in universe[:6]]
    for m in universe:
        assert in_right_perp(m, I.cokernels()) == in_right_perp(m, cells)


def test_enough_projectives_examples(fx):
    I = fx.socle_set()
    A, k = fx.A, fx.k
    pa = enough_projectives_via_pushout(k, fx.quotient, None, I)
    assert pa.verify(I.structure)
    K_row, C_row = pa.rows
    assert brute_is_iso(K_row.middle, A) and pa.sequence.middle.dim == 3
    # K = 0: identity cover
    pa = enough_projectives_via_pushout(A, ModuleMorphism.identity(A), None, I)
    assert pa.sequence.left.dim == 0 and pa.sequence.middle.dim == 2
    # K already right-perpendicular: the cover A + A ->> A with kernel A
    S = fx.sum(A, A)
    proj = ModuleMorphism(S, A, [[1, 0, 0, 0], [0, 1, 0, 0]])
    pa = enough_projectives_via_pushout(A, proj, None, I)
    assert pa.sequence.left.dim == 2 and pa.sequence.middle.dim == 4


def test_enough_projectives_rejects_non_covers(fx):
    with pytest.raises(GenerationError):
        enough_projectives_via_pushout(fx.k, ModuleMorphism.zero(fx.A, fx.k), None, fx.socle_set())


def test_summand_examples(fx):
    I = fx.free_set()
    v = summand_of_cell_check(fx.zero, I)
    assert v.is_summand
    v = summand_of_cell_check(fx.A, I)
    assert v.is_summand and v.witness.verify()
    assert v.witness.deflation.source.dim % 2 == 0
    # A is self-injective, so the left class is everything and k is a summand of a cell complex
    v = summand_of_cell_check(fx.k, fx.full_set())
    assert v.is_summand and v.witness.verify()


def test_summand_refutation(fx):
    # with I = {0 -> A} the right class is everything and the left class the free modules;
    # the precover A ->> k of k does not split
    v = summand_of_cell_check(fx.k, fx.free_set())
    assert not v.is_summand and v.witness is None
    assert "does not split" in v.diagnostic
    assert ext1(fx.k, v.precover.sequence.left).dim == 1


@given(seeds)
@settings(max_examples=20)
def test_summand_witness_for_free_modules(seed):
    fx = dual_numbers()
    rng = np.random.default_rng(seed)
    a = int(rng.integers(1, 3))
    m = fx.sum(*[fx.A] * a)
    m, _ = m.change_basis(np.eye(m.dim, dtype=np.int64)[rng.permutation(m.dim)])
    v = summand_of_cell_check(m, fx.full_set())
    assert v.is_summand and v.witness.verify()


def test_cotorsion_report(fx, universe):
    I = fx.full_set()
    rep = cotorsion_report(I, TestUniverse(universe[:8]))
    assert rep.verdicts == {
        "homological": "holds",
        "enough_injectives": "holds",
        "enough_projectives": "holds",
        "left_class_is_summands_of_cells": "holds",
        "reverified": "holds",
    }
    assert rep.errors == {}
    # A is self-injective, so every module is in the left class; the right class is the free modules
    assert rep.left_class_sample == list(range(8))
    names = [universe[k].name.split("~")[0] for k in rep.right_class_sample]
    assert set(names) == {"0", "A"}


def test_empty_set_report(fx):
    rep = cotorsion_report(MorphismSet([]), TestUniverse([fx.k]))
    assert rep.homological.holds

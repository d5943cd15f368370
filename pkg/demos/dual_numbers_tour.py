"""A walk through the module-side engine over the dual numbers F_2[x]/(x^2).

Run with ``python3 demos/dual_numbers_tour.py``.
"""

from exactcat.cotorsion import (
    TestUniverse,
    cotorsion_report,
    enough_projectives_via_pushout,
    ext1,
    extension_from_cocycle,
    special_precover,
    special_preenvelope,
)
from exactcat.fixtures import dual_numbers, module_universe
from exactcat.lifting import factorize, has_rlp, lifting_ranks
from exactcat.modcat import ExactStructure, ModuleMorphism, ShortExactSequence, find_isomorphism

fx = dual_numbers()
A, k = fx.A, fx.k

# Ext^1(k, k) has one class, realized by A itself
E = ext1(k, k)
print("dim Ext^1(k, k) =", E.dim)
s = extension_from_cocycle(E.cocycle_basis[0], E.resolution)
print("middle term is A:", find_isomorphism(s.middle, A) is not None)
print("dim Ext^1(k, A) =", ext1(k, A).dim, " dim Ext^1(A, k) =", ext1(A, k).dim)

# k >-> A ->> k is exact, but not exact relative to A + k
seq = ShortExactSequence(fx.socle, fx.quotient)
print("abelian conflation:", ExactStructure.abelian().is_conflation(seq), "| relative conflation:", fx.G.is_conflation(seq))

# the quotient A ->> k fails to lift against the socle: squares span 2 dims, lifts only 1
print("lifting ranks (image, squares):", lifting_ranks(fx.socle, fx.quotient))

# small object argument: factor k -> 0 through the socle cell
I = fx.socle_set()
fac = factorize(ModuleMorphism.zero(k, fx.zero), I)
print(f"k -> 0 factors through {len(fac.trace)} stage(s); end dim {fac.trace.end.dim}; delta I-injective: {has_rlp(fac.delta, I)}")

# approximation sequences
pre = special_preenvelope(k, I)
print("preenvelope dims:", [pre.sequence.left.dim, pre.sequence.middle.dim, pre.sequence.right.dim])
J = fx.full_set()
prc = special_precover(k, J)
print("precover dims:", [prc.sequence.left.dim, prc.sequence.middle.dim, prc.sequence.right.dim])

# the 3x3 diagram from the cover A ->> k
pa = enough_projectives_via_pushout(k, fx.quotient, None, I)
print("3x3 diagram verified:", pa.verify(I.structure), "| C' dim", pa.sequence.middle.dim)

# universe-relative report for I = {socle, 0 -> A}
U = TestUniverse(module_universe(fx, extra=4))
rep = cotorsion_report(J, U, budget=8)
for key, verdict in sorted(rep.verdicts.items()):
    print(f"  {key}: {verdict}")
right = [U.names[j] for j in rep.right_class_sample]
print("right class in the universe:", right)
print("left class size:", len(rep.left_class_sample), "of", len(U))

print("section of a split precover, as a matrix:")
print(rep.summands[2].witness.section.matrix)

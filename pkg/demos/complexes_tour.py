"""Chain complexes over F_2[x]/(x^2) with the degreewise structure relative to A + k.

Run with ``python3 demos/complexes_tour.py``; takes about twenty seconds.
"""

from exactcat.chaincx import ComplexBridge, disk, generating_set, is_g_acyclic, verify_corollary_42
from exactcat.fixtures import complex_universe, dual_numbers

fx = dual_numbers()
window = (-2, 2)
gs = [fx.A, fx.k]

# complexes become modules over a bigger algebra
bridge = ComplexBridge(fx.algebra, window)
print("encoding algebra:", bridge.algebra.name, "of dimension", bridge.algebra.dim)
x = disk(0, fx.A, window)
print("D_0(A) encodes to a module of dimension", bridge.encode(x).dim)

I, _ = generating_set(gs, window)
print("generating inflations:")
for name in I.names:
    print("  ", name)

for cx in complex_universe(fx, window):
    v = is_g_acyclic(cx, gs)
    print(f"{cx.name:>10}: G-acyclic={v.acyclic}", "; ".join(v.failures))

rep = verify_corollary_42(gs, window, complex_universe(fx, window))
print("verdicts:", rep.report.verdicts)
print("degreewise re-checks all pass:", all(rep.degreewise.values()))
for k, n in sorted(rep.filtrations.items()):
    print(f"  {rep.complexes[k].name}: summand of a cell complex with a filtration of length {n}")
print("sphere S_0(k) preenvelope dims:",
      [m.dim for m in bridge.decode(rep.report.preenvelopes[1].sequence.middle).components])

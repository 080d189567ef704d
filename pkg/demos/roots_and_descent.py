"""Demazure roots, which of them survive the holes, and the slice they carry.

Every root of the saturation defines a derivation of the big monoid algebra;
the interesting question for a non-saturated monoid is which roots descend.
Here the root (-1, 1) dies: it pushes the member (1, 0) onto the hole (0, 1).
The root (-1, 0) descends and admits the slice monomial x^(1,0), and its
exponential is an honest automorphism flow computed with exact fractions.
"""

from fractions import Fraction

from mltoric.demazure import classify_facet, demazure_roots, descends
from mltoric.derivations import AlgebraElement, apply, exponential, nilpotency_index
from mltoric.monoid import AffineMonoid

monoid = AffineMonoid(((1, 0), (0, 2), (0, 3)), name="example2")

for ray_index in (0, 1):
    print(f"roots at ray {ray_index}:")
    for root in demazure_roots(monoid, ray_index, height=4):
        verdict = descends(monoid, root)
        note = "" if verdict.witness is None else f"  pushes {verdict.witness} onto a hole"
        print(f"  shift {root.shift}: descends {verdict.status}{note}")
print()

facet = classify_facet(monoid, 1)
slice_data = facet.slice_derivation
delta = slice_data.derivation
print("affine facet", facet.facet_index, "with distinguished ray",
      facet.distinguished_ray)
print("slice derivation: dual vector", delta.dual_vector,
      "shift", delta.shift)
print("slice point:", slice_data.slice_point)
print()

f = AlgebraElement.monomial(monoid, (2, 0))
print("f =", f)
print("delta(f) =", apply(delta, f))
print("nilpotency index of f:", nilpotency_index(delta, f))
for t in (1, Fraction(1, 2)):
    print(f"exp({t} * delta)(f) =", exponential(delta, t, f))

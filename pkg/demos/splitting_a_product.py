"""Recognizing a cylinder: the product fixture splits off its line factor.

Each affine ray contributes one polynomial variable; subtracting the ray
coordinates from a point must land back in the monoid, which is re-checked
here point by point against plain membership.
"""

from mltoric.invariants import analyze
from mltoric.monoid import AffineMonoid

product = AffineMonoid(
    ((1, 0, 0), (1, 1, 0), (1, 2, 0), (0, 0, 1)), name="example1 x line")
report = analyze(product)
split = report.split

print("affine rays:", report.affine_rays)
print("split factor k:", split.k)
print("core generators (normalized):", split.core_monoid.generators)
print("core rank:", split.core_monoid.rank)
print()

for point in ((1, 2, 5), (2, 1, 0), (1, 0, 3)):
    core, coeffs = split.decompose(point)
    print(f"{point} = core {core} + {coeffs[0]} * ray {split.pairs[0][1]}")
print()

mismatches = 0
checked = 0
for x in range(4):
    for y in range(4):
        for z in range(4):
            checked += 1
            if split.member((x, y, z)) != product.contains((x, y, z)):
                mismatches += 1
print(f"membership through the splitting re-checked on {checked} points, "
      f"{mismatches} mismatches")

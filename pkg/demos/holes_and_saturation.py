"""Where a non-saturated monoid misses its cone, and which facets survive.

The running example is the monoid generated by (1,0), (0,2), (0,3): the
whole line y = 1 sits in the cone but outside the monoid, so one facet of
the dual cone never meets a saturation point while the other still does.
"""

from mltoric.monoid import AffineMonoid

monoid = AffineMonoid(((1, 0), (0, 2), (0, 3)), name="example2")

print("generators:", monoid.generators)
print("facet normals:", monoid.cone.facet_normals)
print("grading:", monoid.grading)
print()

inventory = monoid.holes_up_to(6)
print(f"holes of degree <= {inventory.bound} ({inventory.certificate}):")
for hole in inventory.holes:
    print("  ", hole)
for family in monoid.hole_families().families:
    print(f"full hole line: base {family.base} + k*{family.direction}")
print()

for status in monoid.facet_statuses():
    print(f"facet {status.facet_index}: {status.label}")
    if status.witness is not None:
        print("   saturation point on the facet:", status.witness)
    if status.blocking is not None:
        print(f"   blocking hole family: {status.blocking.base} "
              f"+ k*{status.blocking.direction}")
    if status.holes_on_facet:
        print("   holes lying on the facet itself:", status.holes_on_facet)
print()

for point in ((1, 0), (0, 2), (2, 3)):
    verdict = monoid.is_saturation_point(point)
    line = f"{point}: {verdict.status}"
    if verdict.status == "no-with-witness":
        line += f" (the translated cone still reaches the hole {verdict.witness})"
    print(line)

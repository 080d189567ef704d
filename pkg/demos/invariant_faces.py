"""The two invariant faces and the verdict flags across the fixture corpus.

The first face is cut out by the almost-saturated facets; the second one by
the affine rays, when a sliced derivation exists at all. Affine spaces are
exactly the monoids where both collapse to the apex.
"""

from mltoric.invariants import NO_SLICE, analyze
from mltoric.monoid import AffineMonoid

CORPUS = {
    "example1": ((1, 0), (1, 1), (1, 2)),
    "example2": ((1, 0), (0, 2), (0, 3)),
    "example3": tuple((1, b, c) for b in (-1, 0, 1) for c in (-1, 0, 1)),
    "example5": ((1, 0), (1, 2), (0, 3), (0, 4), (0, 5)),
    "plane": ((1, 0), (0, 1)),
    "cusp": ((2,), (3,)),
    "example1 x line": ((1, 0, 0), (1, 1, 0), (1, 2, 0), (0, 0, 1)),
}


def face_text(face):
    if face is None:
        return "undetermined"
    if face is NO_SLICE:
        return "no slice exists"
    if not face.ray_indices:
        return "apex"
    return "face on rays " + str(sorted(face.ray_indices))


for name, gens in CORPUS.items():
    report = analyze(AffineMonoid(gens, name=name))
    print(f"{name}  (rank {report.monoid.rank}, {report.status})")
    print("   almost-saturated facets:", list(report.almost_saturated))
    print("   first invariant face:   ", face_text(report.ml_face))
    print("   second invariant face:  ", face_text(report.ml_star_face))
    print("   split factor k:", report.split.k,
          "| rigid core:", report.is_rigid_core,
          "| affine space:", report.is_affine_space,
          "| rigid variety:", report.variety_is_rigid)
    for note in report.notes:
        print("   note:", note)
    print()

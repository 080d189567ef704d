from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mltoric.cones import (
    Cone,
    ConeError,
    Face,
    all_faces,
    cone_equals,
    cone_from_generators,
    dual_cone,
    face_from_ray_indices,
    face_generated_by,
    facet_faces,
)
from mltoric.lattice import pairing
from oracles import rank2_cone_contains, rank2_full_dim, rational_in_cone

EX1 = ((1, 0), (1, 1), (1, 2))
EX2 = ((1, 0), (0, 2), (0, 3))
EX3 = tuple((1, b, c) for b in (-1, 0, 1) for c in (-1, 0, 1))

coords = st.integers(min_value=0, max_value=6)
gen2 = st.tuples(coords, coords).filter(any)


class TestConstruction:
    def test_example1_normals_and_rays(self):
        cone = cone_from_generators(EX1)
        assert cone.facet_normals == ((0, 1), (2, -1))
        assert set(cone.extremal_rays) == {(1, 0), (1, 2)}
        assert cone.is_pointed and cone.is_full_dimensional

    def test_example2_normals(self):
        cone = cone_from_generators(EX2)
        assert cone.facet_normals == ((0, 1), (1, 0))
        assert set(cone.extremal_rays) == {(1, 0), (0, 1)}

    def test_example3_tetrahedral(self):
        cone = cone_from_generators(EX3)
        assert len(cone.extremal_rays) == 4
        assert len(cone.facet_normals) == 4
        assert set(cone.extremal_rays) == {
            (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)}

    def test_halfline(self):
        cone = cone_from_generators(((2,),))
        assert cone.extremal_rays == ((1,),)
        assert cone.facet_normals == ((1,),)

    def test_zero_cone(self):
        cone = cone_from_generators((), 0)
        assert cone.dim == 0

    def test_rejects_mixed_lengths(self):
        with pytest.raises(ConeError):
            cone_from_generators(((1, 0), (1,)))


class TestContains:
    @given(st.lists(gen2, min_size=1, max_size=5),
           st.tuples(st.integers(-8, 8), st.integers(-8, 8)))
    @settings(max_examples=120, deadline=None)
    def test_matches_cross_product_oracle(self, gens, point):
        if not rank2_full_dim(gens):
            return
        cone = cone_from_generators(gens)
        assert cone.contains(point) == rank2_cone_contains(gens, point)

    def test_fraction_points(self):
        cone = cone_from_generators(EX1)
        assert cone.contains((Fraction(1, 2), Fraction(1, 2)))
        assert not cone.contains((Fraction(-1, 7), Fraction(0)))

    def test_interior(self):
        cone = cone_from_generators(EX1)
        assert cone.interior_contains((1, 1))
        assert not cone.interior_contains((1, 0))
        assert not cone.interior_contains((0, 0))

    def test_rank3_against_subset_solver(self):
        cone = cone_from_generators(EX3)
        pts = [(x, y, z) for x in range(3) for y in range(-3, 4)
               for z in range(-3, 4)]
        for p in pts:
            assert cone.contains(p) == rational_in_cone(EX3, p), p


class TestDual:
    @pytest.mark.parametrize("gens", [EX1, EX2, EX3])
    def test_double_dual_is_identity(self, gens):
        cone = cone_from_generators(gens)
        assert cone_equals(dual_cone(dual_cone(cone)), cone)

    def test_dual_pairs_nonnegatively(self):
        cone = cone_from_generators(EX1)
        dual = dual_cone(cone)
        for r in cone.extremal_rays:
            for w in dual.extremal_rays:
                assert pairing(r, w) >= 0


class TestFaces:
    def test_face_count_dim2(self):
        cone = cone_from_generators(EX1)
        faces = all_faces(cone)
        # apex, two rays, the whole cone
        assert len(faces) == 4
        assert sorted(f.dim for f in faces) == [0, 1, 1, 2]

    def test_face_count_tetrahedral(self):
        cone = cone_from_generators(EX3)
        faces = all_faces(cone)
        # apex + 4 rays + 4 facets + improper
        assert len(faces) == 10

    def test_facet_faces_align_with_normals(self):
        cone = cone_from_generators(EX1)
        for nrm, face in zip(cone.facet_normals, facet_faces(cone)):
            for r in face.rays:
                assert pairing(r, nrm) == 0

    def test_face_generated_by(self):
        cone = cone_from_generators(EX1)
        f = face_generated_by(cone, [(1, 0)])
        assert f.dim == 1 and f.rays == ((1, 0),)
        whole = face_generated_by(cone, [(1, 1)])
        assert whole.is_improper

    def test_face_from_ray_indices_apex(self):
        cone = cone_from_generators(EX1)
        f = face_from_ray_indices(cone, ())
        assert f.is_apex and f.dim == 0

    def test_contains_point(self):
        cone = cone_from_generators(EX2)
        vertical = next(f for f in facet_faces(cone)
                        if f.rays == ((0, 1),))
        assert vertical.contains_point((0, 5))
        assert not vertical.contains_point((1, 5))

    def test_outside_point_rejected(self):
        cone = cone_from_generators(EX1)
        with pytest.raises(ConeError):
            face_generated_by(cone, [(-1, 0)])

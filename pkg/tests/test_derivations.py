"""Symbolic engine: algebra elements, derivations, exponentials, slices.

The engine is the independent oracle for the rest of the package, so these
tests leap on it from the axioms side: Leibniz, the nilpotency coefficient
formula, exponential identities. Hand-computed small cases are frozen inline.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mltoric.derivations import (
    AMBIENT,
    NORMALIZATION,
    AlgebraElement,
    ClosureError,
    Conjugate,
    DerivationSum,
    HomogeneousDerivation,
    apply,
    exponential,
    nilpotency_index,
    non_nilpotency_proof,
    replica,
    sum_with_slice_check,
    vanishes_on_face,
)
from mltoric.monoid import AffineMonoid, MonoidError

D_SLICE = HomogeneousDerivation((1, 0), (-1, 0))
D_Y = HomogeneousDerivation((0, 1), (0, -1))


def mono(m, point, coeff=1, mode=NORMALIZATION):
    return AlgebraElement.monomial(m, point, coeff, mode)


class TestAlgebraElements:
    def test_strict_rejects_hole(self, monoids):
        with pytest.raises(ClosureError, match="outside the strict support"):
            AlgebraElement.monomial(monoids["example2"], (0, 1))

    def test_normalization_allows_hole(self, monoids):
        f = mono(monoids["example2"], (0, 1))
        assert f.support() == ((0, 1),)

    def test_normalization_rejects_outside_cone(self, monoids):
        with pytest.raises(ClosureError, match="outside the normalization"):
            mono(monoids["example2"], (-1, 0))

    def test_ambient_allows_anything(self, monoids):
        f = AlgebraElement.monomial(monoids["example2"], (-1, 0), mode=AMBIENT)
        assert not f.is_zero

    def test_arithmetic(self, monoids):
        m = monoids["example2"]
        f = mono(m, (1, 0)) + mono(m, (1, 0))
        assert f.coefficient((1, 0)) == 2
        assert (f - f).is_zero
        prod = mono(m, (1, 0)) * mono(m, (0, 2))
        assert prod.support() == ((1, 2),)
        assert repr(mono(m, (1, 0), 2)) == "2*x^(1, 0)"


class TestApply:
    def test_monomial_image(self, monoids):
        f = mono(monoids["example2"], (2, 0))
        assert repr(apply(D_SLICE, f)) == "2*x^(1, 0)"

    def test_strict_closure_error(self, monoids):
        f = AlgebraElement.monomial(monoids["example2"], (0, 2))
        with pytest.raises(ClosureError, match="leaves the strict algebra"):
            apply(D_Y, f)

    def test_same_image_in_normalization(self, monoids):
        f = mono(monoids["example2"], (0, 2))
        assert repr(apply(D_Y, f)) == "2*x^(0, 1)"

    @given(
        st.tuples(st.integers(0, 5), st.integers(0, 5)),
        st.tuples(st.integers(0, 5), st.integers(0, 5)),
        st.sampled_from([D_SLICE, D_Y, HomogeneousDerivation((1, 1), (0, 0))]),
    )
    @settings(max_examples=120, deadline=None)
    def test_leibniz(self, p, q, delta):
        m = AffineMonoid(((1, 0), (0, 2), (0, 3)))
        f = AlgebraElement.monomial(m, p, mode=AMBIENT)
        g = AlgebraElement.monomial(m, q, 3, mode=AMBIENT)
        lhs = apply(delta, f * g)
        rhs = apply(delta, f) * g + f * apply(delta, g)
        assert lhs == rhs


class TestNilpotency:
    def test_index_matches_pairing(self, monoids):
        m = monoids["example2"]
        # the slice derivation lowers <., (1,0)> by one per application
        for a in range(5):
            for b in (0, 2, 3, 4):
                f = mono(m, (a, b))
                assert nilpotency_index(D_SLICE, f) == a + 1

    def test_euler_is_not_nilpotent(self, monoids):
        m = monoids["example2"]
        euler = HomogeneousDerivation(m.grading, (0, 0))
        f = mono(m, (1, 0))
        assert nilpotency_index(euler, f) is None
        assert non_nilpotency_proof(euler, f) == (
            "every application scales by <v,m> = 1 != 0 and shifts the "
            "exponent by (0, 0); no power vanishes"
        )

    def test_proof_for_increasing_orbit(self, monoids):
        up = HomogeneousDerivation((1, 0), (1, 0))
        f = AlgebraElement.monomial(monoids["example2"], (1, 0), mode=AMBIENT)
        assert nilpotency_index(up, f) is None
        assert non_nilpotency_proof(up, f) == (
            "factors <v,m> + k<v,shift> = 1 + k*(1) never vanish for "
            "integer k >= 0; no power vanishes"
        )

    def test_no_proof_when_nilpotent(self, monoids):
        f = mono(monoids["example2"], (2, 0))
        assert non_nilpotency_proof(D_SLICE, f) is None


class TestExponential:
    def test_binomial_expansion(self, monoids):
        f = mono(monoids["example2"], (2, 0))
        out = exponential(D_SLICE, 1, f)
        expect = (
            mono(monoids["example2"], (0, 0))
            + mono(monoids["example2"], (1, 0), 2)
            + mono(monoids["example2"], (2, 0))
        )
        assert out == expect

    def test_group_law(self, monoids):
        m = monoids["example2"]
        for point in ((2, 0), (3, 2), (1, 3)):
            f = mono(m, point)
            one_shot = exponential(D_SLICE, Fraction(3, 2), f)
            two_step = exponential(
                D_SLICE, 1, exponential(D_SLICE, Fraction(1, 2), f))
            assert one_shot == two_step

    def test_multiplicative(self, monoids):
        m = monoids["example2"]
        f, g = mono(m, (1, 2)), mono(m, (2, 0))
        t = Fraction(1, 3)
        assert exponential(D_SLICE, t, f * g) == (
            exponential(D_SLICE, t, f) * exponential(D_SLICE, t, g))

    def test_refuses_without_witness(self, monoids):
        m = monoids["example2"]
        euler = HomogeneousDerivation(m.grading, (0, 0))
        with pytest.raises(MonoidError, match="exponential refused"):
            exponential(euler, 1, mono(m, (1, 0)))


class TestReplicas:
    def test_kernel_factor_required(self, monoids):
        m = monoids["example2"]
        with pytest.raises(MonoidError, match="kernel"):
            replica(mono(m, (1, 0)), D_SLICE)

    def test_replica_stays_nilpotent(self, monoids):
        m = monoids["example2"]
        rep = replica(mono(m, (0, 2)), D_SLICE)
        assert nilpotency_index(rep, mono(m, (2, 0))) == 3

    def test_conjugate_frozen(self, monoids):
        a2 = monoids["affine_2"]
        dx = HomogeneousDerivation((1, 0), (-1, 0))
        dy = HomogeneousDerivation((0, 1), (0, -1))
        out = Conjugate(dx, dy).apply_to(mono(a2, (1, 1)))
        assert out == mono(a2, (1, 0))


class TestSliceSum:
    def test_plain_slice(self, monoids):
        m = monoids["example2"]
        report = sum_with_slice_check(
            D_SLICE, None, (1, 0), [mono(m, (2, 0)), mono(m, (0, 2))])
        assert report.ok
        assert report.slice_image_is_one
        assert report.results == ((((2, 0),), 3), (((0, 2),), 1))

    def test_replica_term_keeps_slice(self, monoids):
        # the added term must kill the slice monomial, so its inner form
        # points along the other facet
        m = monoids["example2"]
        rep = replica(mono(m, (2, 0)), D_Y)
        report = sum_with_slice_check(
            D_SLICE, rep, (1, 0), [mono(m, (3, 0)), mono(m, (2, 2))])
        assert report.ok
        assert report.slice_image_is_one

    def test_broken_sum_reported(self, monoids):
        m = monoids["example2"]
        euler_x = HomogeneousDerivation((1, 0), (0, 0))
        report = sum_with_slice_check(
            D_SLICE, euler_x, (1, 0), [mono(m, (2, 0))])
        assert not report.ok
        assert not report.slice_image_is_one
        assert ((((1, 0),), "slice image is not 1")) in report.failures

    def test_needs_samples(self, monoids):
        with pytest.raises(MonoidError, match="sample"):
            sum_with_slice_check(D_SLICE, None, (1, 0), [])


class TestFaceVanishing:
    def test_slice_derivation_kills_vertical_facet(self, monoids):
        m = monoids["example2"]
        vertical = m.facets[1]
        assert vertical.rays == ((0, 1),)
        assert vanishes_on_face(D_SLICE, m, vertical, 10)

    def test_but_not_the_other_facet(self, monoids):
        m = monoids["example2"]
        horizontal = m.facets[0]
        assert not vanishes_on_face(D_SLICE, m, horizontal, 10)

    def test_sum_vanishing(self, monoids):
        # face vanishing is evaluated in ambient mode, so the replica factor
        # has to live there as well
        m = monoids["example2"]
        rep = replica(mono(m, (0, 2), mode=AMBIENT), D_SLICE)
        total = DerivationSum((D_SLICE, rep))
        assert vanishes_on_face(total, m, m.facets[1], 10)

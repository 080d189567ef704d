import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mltoric.lattice import (
    LatticeError,
    content,
    determinant,
    identity_matrix,
    invert_unimodular,
    kernel_line,
    mat_mul,
    pairing,
    primitive_vector,
    rank_of,
    smith_normal_form,
    smith_reindex,
    solve_exact,
    solve_nonnegative,
)
from oracles import enumerate_members, sympy_smith_diagonal

ints = st.integers(min_value=-9, max_value=9)


def vectors(n):
    return st.tuples(*([ints] * n))


class TestBasics:
    def test_pairing(self):
        assert pairing((1, 2), (0, 1)) == 2
        assert pairing((1, 0), (2, -1)) == 2

    def test_content_and_primitive(self):
        assert content((4, 6)) == 2
        assert primitive_vector((4, 6)) == (2, 3)
        assert primitive_vector((0, -5)) == (0, -1)
        with pytest.raises(LatticeError):
            primitive_vector((0, 0))

    def test_rank(self):
        assert rank_of([(1, 0), (0, 1)]) == 2
        assert rank_of([(2, 4), (1, 2)]) == 1
        assert rank_of([]) == 0


class TestDeterminant:
    @given(st.lists(vectors(3), min_size=3, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_matches_sympy(self, rows):
        from sympy import Matrix
        assert determinant(tuple(rows)) == Matrix(rows).det()

    def test_identity(self):
        assert determinant(identity_matrix(4)) == 1


class TestSolveExact:
    def test_unique_solution(self):
        # rows . x = rhs with a unique rational solution
        assert solve_exact(((1, 0), (1, 1)), (3, 1)) == (3, -2)

    def test_fractional_solution(self):
        from fractions import Fraction
        assert solve_exact(((2, 0), (0, 1)), (1, 1)) == (Fraction(1, 2), 1)

    def test_no_solution(self):
        assert solve_exact(((1, 0), (1, 0)), (0, 1)) is None

    def test_underdetermined_raises(self):
        with pytest.raises(LatticeError):
            solve_exact(((1, 0), (2, 0)), (1, 2))


class TestSmith:
    @given(st.lists(vectors(3), min_size=1, max_size=4))
    @settings(max_examples=60)
    def test_identity_and_diagonal(self, rows):
        a = tuple(tuple(r) for r in rows)
        u, d, v = smith_normal_form(a)
        assert mat_mul(mat_mul(u, a), v) == d
        assert abs(determinant(u)) == 1
        assert abs(determinant(v)) == 1
        mine = [d[i][i] for i in range(min(len(d), 3)) if d[i][i] != 0]
        assert [abs(x) for x in mine] == sympy_smith_diagonal(rows)

    def test_divisibility_chain(self):
        _, d, _ = smith_normal_form(((2, 0), (0, 6)))
        assert d[0][0] == 2 and d[1][1] == 6

    def test_invert_unimodular(self):
        m = ((1, 2), (0, 1))
        inv = invert_unimodular(m)
        assert mat_mul(inv, m) == identity_matrix(2)
        assert mat_mul(m, inv) == identity_matrix(2)


class TestReindex:
    def test_identity_when_full(self):
        r = smith_reindex([(1, 0), (0, 1)])
        assert r.identity and r.rank == 2

    def test_even_sublattice(self):
        r = smith_reindex([(2, 0), (0, 2)])
        assert r.rank == 2 and not r.identity
        assert r.in_group((2, 0)) and not r.in_group((1, 0))
        assert r.from_standard(r.to_standard((2, 4))) == (2, 4)

    def test_lower_rank(self):
        r = smith_reindex([(0, 2), (0, 3)])
        assert r.rank == 1
        assert r.in_group((0, 1)) and not r.in_group((1, 0))

    def test_trivial_group_with_ambient(self):
        r = smith_reindex([], 3)
        assert r.rank == 0 and r.ambient_rank == 3
        assert r.in_group((0, 0, 0)) and not r.in_group((0, 1, 0))

    @given(st.lists(vectors(2), min_size=1, max_size=3))
    @settings(max_examples=60)
    def test_roundtrip_on_generators(self, gens):
        gens = [g for g in gens if any(g)]
        r = smith_reindex(gens, 2)
        for g in gens:
            assert r.in_group(g)
            assert r.from_standard(r.to_standard(g)) == tuple(g)


class TestKernelLine:
    def test_plane_kernel(self):
        k = kernel_line(((1, 1, 0), (0, 0, 1)), 3)
        assert k is not None
        assert pairing(k, (1, 1, 0)) == 0 and pairing(k, (0, 0, 1)) == 0
        assert content(k) == 1

    def test_full_rank_has_none(self):
        assert kernel_line(((1, 0), (0, 1)), 2) is None


class TestSolveNonnegative:
    GENS = ((1, 0), (1, 1), (1, 2))
    GRADING = (2, 0)

    def brute(self, bound):
        return enumerate_members(self.GENS, self.GRADING, bound)

    def test_matches_enumeration(self):
        members = self.brute(16)
        for x in range(9):
            for y in range(-1, 2 * x + 2):
                got = solve_nonnegative(self.GENS, (x, y), grading=self.GRADING)
                assert (got is not None) == ((x, y) in members), (x, y)

    def test_certificate_reconstructs(self):
        counts = solve_nonnegative(self.GENS, (2, 2), grading=self.GRADING)
        assert counts is not None
        total = (0, 0)
        for c, g in zip(counts, self.GENS):
            total = tuple(t + c * gi for t, gi in zip(total, g))
        assert total == (2, 2)

    def test_rejects_nonpositive_grading(self):
        with pytest.raises(LatticeError):
            solve_nonnegative(((1, -1),), (2, -2), grading=(1, 1))

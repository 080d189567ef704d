"""Exact integer lattice utilities: pairings, normal forms, nonnegative solving.

Everything works over plain Python ints and ``fractions.Fraction``; no
floating point appears anywhere.  Points of the character lattice M and
functionals of the dual lattice N are both plain tuples of ints; they are
kept apart by naming (``LatticePoint`` vs ``DualVector``) rather than by
wrapper classes, and :func:`pairing` is the sanctioned way to combine them.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Optional, Sequence

LatticePoint = tuple  # point of M, a tuple of ints
DualVector = tuple    # functional on M, a tuple of ints
Matrix = tuple        # tuple of row tuples


class LatticeError(ValueError):
    """An ill-formed lattice input: mixed lengths, zero vector, bad grading."""


def as_vector(v: Sequence[int]) -> tuple:
    out = tuple(v)
    for x in out:
        # bool is an int subclass; reject it to keep report JSON honest
        if not isinstance(x, int) or isinstance(x, bool):
            raise LatticeError(f"vector entries must be ints, got {x!r}")
    return out


def vadd(a: tuple, b: tuple) -> tuple:
    if len(a) != len(b):
        raise LatticeError("length mismatch in vector addition")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: tuple, b: tuple) -> tuple:
    if len(a) != len(b):
        raise LatticeError("length mismatch in vector subtraction")
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: tuple) -> tuple:
    return tuple(-x for x in a)


def vscale(k: int, a: tuple) -> tuple:
    return tuple(k * x for x in a)


def is_zero(a: tuple) -> bool:
    return all(x == 0 for x in a)


def pairing(point: LatticePoint, functional: DualVector) -> int:
    """Evaluate a dual functional on a lattice point (integer bilinear pairing)."""
    if len(point) != len(functional):
        raise LatticeError(
            f"pairing length mismatch: point has {len(point)} coordinates, "
            f"functional has {len(functional)}"
        )
    return sum(x * y for x, y in zip(point, functional))


def content(v: tuple) -> int:
    """gcd of the entries; 0 for the zero vector."""
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive_vector(v: tuple) -> tuple:
    """The primitive integer vector on the ray through v.

    Raises LatticeError on the zero vector, which spans no ray.
    """
    c = content(v)
    if c == 0:
        raise LatticeError("zero vector has no primitive representative")
    return tuple(x // c for x in v)


# ---------------------------------------------------------------------------
# small exact matrix helpers (rows are tuples, vectors act from the left)
# ---------------------------------------------------------------------------

def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise LatticeError("matrix shape mismatch")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]) if b else 0))
        for i in range(len(a))
    )


def row_times_matrix(x: tuple, m: Matrix) -> tuple:
    if len(x) != len(m):
        raise LatticeError("row/matrix shape mismatch")
    cols = len(m[0]) if m else 0
    return tuple(sum(x[k] * m[k][j] for k in range(len(m))) for j in range(cols))


def determinant(m: Matrix) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise LatticeError("determinant needs a square matrix")
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_of(rows: Sequence[tuple]) -> int:
    """Rank of the row span, exact Gaussian elimination over Fraction."""
    work = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    col = 0
    while rank < len(work) and col < cols:
        piv = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pv = work[rank][col]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                f = work[i][col] / pv
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        rank += 1
        col += 1
    return rank


def solve_exact(rows: Sequence[tuple], rhs: Sequence) -> Optional[tuple]:
    """Solve rows . x = rhs exactly over Fraction; None when inconsistent.

    The system may be overdetermined; when the solution space is not a single
    point a LatticeError is raised (callers here always want uniqueness).
    """
    if len(rows) != len(rhs):
        raise LatticeError("system shape mismatch")
    n = len(rows[0]) if rows else 0
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n] != 0:
            return None
    if r < n:
        raise LatticeError("underdetermined system has no unique solution")
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = aug[i][n]
    return tuple(x)


def kernel_line(rows: Sequence[tuple], n: int) -> Optional[tuple]:
    """Primitive integer generator of ker(rows) when that kernel is a line.

    Returns None when the kernel dimension is not exactly 1.
    """
    work = [[Fraction(x) for x in r] for r in rows]
    pivots: dict[int, int] = {}
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pv = work[r][col]
        work[r] = [x / pv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots[col] = r
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    sol = [Fraction(0)] * n
    sol[fc] = Fraction(1)
    for col, idx in pivots.items():
        sol[col] = -work[idx][fc]
    den = 1
    for x in sol:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = tuple(int(x * den) for x in sol)
    return primitive_vector(ints)


def invert_unimodular(m: Matrix) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(m)
    sols = []
    rows = [tuple(r) for r in m]
    for j in range(n):
        rhs = tuple(1 if i == j else 0 for i in range(n))
        # solve x . m = e_j  <=>  m^T . x^T = e_j
        col = solve_exact([tuple(r[i] for r in rows) for i in range(n)], rhs)
        if col is None:
            raise LatticeError("matrix is not invertible")
        sols.append(col)
    if any(Fraction(x).denominator != 1 for row in sols for x in row):
        raise LatticeError("matrix inverse is not integral")
    # sols[j] solves x . m = e_j, so stacked as rows they are m^(-1)
    inv = tuple(tuple(int(x) for x in row) for row in sols)
    if mat_mul(inv, m) != identity_matrix(n):
        raise LatticeError("inverse verification failed")
    return inv


# ---------------------------------------------------------------------------
# Smith normal form with recorded unimodular transforms
# ---------------------------------------------------------------------------

def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*A*V = D in Smith normal form.

    U and V are unimodular; D is diagonal with nonnegative entries and
    d1 | d2 | ... .  The identity U*A*V = D and |det U| = |det V| = 1 are
    re-verified before returning, so a wrong answer cannot escape.
    """
    k = len(a)
    n = len(a[0]) if k else 0
    if any(len(r) != n for r in a):
        raise LatticeError("ragged matrix")
    d = [list(map(int, r)) for r in a]
    u = [list(r) for r in identity_matrix(k)]
    v = [list(r) for r in identity_matrix(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_op(i, j, q):  # row_i -= q * row_j
        d[i] = [x - q * y for x, y in zip(d[i], d[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in d:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    t = 0
    while t < min(k, n):
        best = None
        for i in range(t, k):
            for j in range(t, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            changed = False
            for i in range(t + 1, k):
                if d[i][t] != 0:
                    row_op(i, t, d[i][t] // d[t][t])
                    if d[i][t] != 0:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    col_op(j, t, d[t][j] // d[t][t])
                    if d[t][j] != 0:
                        swap_cols(t, j)
                        changed = True
            if not changed and all(d[i][t] == 0 for i in range(t + 1, k)) \
                    and all(d[t][j] == 0 for j in range(t + 1, n)):
                break
        fix = False
        for i in range(t + 1, k):
            for j in range(t + 1, n):
                if d[i][j] % d[t][t] != 0:
                    # pull a non-divisible entry into the working row and redo
                    d[t] = [x + y for x, y in zip(d[t], d[i])]
                    u[t] = [x + y for x, y in zip(u[t], u[i])]
                    fix = True
                    break
            if fix:
                break
        if fix:
            continue
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    U = tuple(tuple(r) for r in u)
    D = tuple(tuple(r) for r in d)
    V = tuple(tuple(r) for r in v)
    if mat_mul(mat_mul(U, tuple(tuple(r) for r in a)), V) != D:
        raise LatticeError("Smith normal form identity U*A*V = D failed")
    if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
        raise LatticeError("Smith normal form transform is not unimodular")
    return U, D, V


@dataclass(frozen=True)
class LatticeReindex:
    """Coordinate change identifying the group generated by some vectors with Z^r.

    ``to_standard`` maps members of that group to Z^r; ``from_standard`` is the
    exact inverse embedding Z^r -> Z^n.  When the group already equals Z^n the
    change is the identity and coordinates are left untouched.
    """

    ambient_rank: int
    rank: int
    identity: bool
    _vmat: Matrix
    _vinv: Matrix
    _diag: tuple

    def in_group(self, point: tuple) -> bool:
        if len(point) != self.ambient_rank:
            raise LatticeError("point has wrong ambient rank")
        if self.identity:
            return True
        y = row_times_matrix(point, self._vmat)
        for i in range(self.rank):
            if y[i] % self._diag[i] != 0:
                return False
        return all(y[i] == 0 for i in range(self.rank, self.ambient_rank))

    def to_standard(self, point: tuple) -> tuple:
        if self.identity:
            return tuple(point)
        if not self.in_group(point):
            raise LatticeError(f"{tuple(point)} is not in the generated group")
        y = row_times_matrix(point, self._vmat)
        return tuple(y[i] // self._diag[i] for i in range(self.rank))

    def from_standard(self, z: tuple) -> tuple:
        if len(z) != self.rank:
            raise LatticeError("point has wrong rank for this reindexing")
        if self.identity:
            return tuple(z)
        full = tuple(z[i] * self._diag[i] for i in range(self.rank)) + \
            (0,) * (self.ambient_rank - self.rank)
        return row_times_matrix(full, self._vinv)

    def matrix_rows(self) -> Matrix:
        """Rows r_i = from_standard(e_i): an integer basis of the group."""
        return tuple(
            self.from_standard(tuple(1 if j == i else 0 for j in range(self.rank)))
            for i in range(self.rank)
        )


def smith_reindex(generators: Sequence[Sequence[int]],
                  ambient_rank: Optional[int] = None) -> LatticeReindex:
    """Identify the group generated by ``generators`` with Z^r, r = its rank.

    Returns the coordinate change; applying ``to_standard`` to the generators
    yields vectors that generate all of Z^r.  Inputs already generating Z^n
    get the identity change, so well-chosen coordinates survive untouched.
    ``ambient_rank`` pins the trivial-group case, where there is no generator
    to read the ambient dimension from.
    """
    gens = [as_vector(g) for g in generators]
    if not gens:
        n = ambient_rank or 0
        if n == 0:
            return LatticeReindex(0, 0, True, (), (), ())
        eye = identity_matrix(n)
        return LatticeReindex(n, 0, False, eye, eye, ())
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise LatticeError("generators have mixed lengths")
    _, d, v = smith_normal_form(tuple(gens))
    diag = [d[i][i] for i in range(min(len(d), n)) if i < len(d) and d[i][i] != 0]
    r = len(diag)
    if r == n and all(x == 1 for x in diag):
        return LatticeReindex(n, n, True, (), (), ())
    return LatticeReindex(n, r, False, v, invert_unimodular(v), tuple(diag))


# ---------------------------------------------------------------------------
# nonnegative integer combinations
# ---------------------------------------------------------------------------

def solve_nonnegative(
    generators: Sequence[Sequence[int]],
    target: Sequence[int],
    grading: Optional[Sequence[int]] = None,
    prune: Optional[Callable[[tuple], bool]] = None,
    _memo: Optional[dict] = None,
) -> Optional[list[int]]:
    """Exact search for x >= 0 integer with sum x_i g_i = target.

    ``grading`` must make every generator strictly positive; it bounds the
    search depth, which is what makes the DFS complete.  With no grading
    supplied the coordinate-sum functional is tried.  ``prune(p)`` may declare
    intermediate targets p hopeless (e.g. outside a cone containing all
    partial sums); it must never cut a point that still has a representation.

    Returns multiplicities per generator, or None when no combination exists.
    """
    gens = [as_vector(g) for g in generators]
    tgt = as_vector(target)
    if any(len(g) != len(tgt) for g in gens):
        raise LatticeError("generator/target length mismatch")
    if grading is None:
        grading = tuple([1] * len(tgt))
    w = as_vector(grading)
    degs = [pairing(g, w) for g in gens]
    if any(dg <= 0 for dg in degs):
        raise LatticeError("grading must be strictly positive on every generator")
    tdeg = pairing(tgt, w)
    if tdeg < 0:
        return None
    if tdeg // max(1, min(degs)) > 900:
        sys.setrecursionlimit(max(sys.getrecursionlimit(), tdeg // min(degs) + 500))
    memo: dict = {} if _memo is None else _memo
    zero = tuple([0] * len(tgt))

    def feasible(p: tuple) -> bool:
        if p == zero:
            return True
        known = memo.get(p)
        if known is not None:
            return known
        memo[p] = False  # blocks cycles; zero-degree cycles are impossible anyway
        pd = pairing(p, w)
        ok = False
        for g, dg in zip(gens, degs):
            if dg <= pd:
                q = vsub(p, g)
                if prune is not None and q != zero and not prune(q):
                    continue
                if feasible(q):
                    ok = True
                    break
        memo[p] = ok
        return ok

    if not feasible(tgt):
        return None
    counts = [0] * len(gens)
    cur = tgt
    while cur != zero:
        for i, (g, dg) in enumerate(zip(gens, degs)):
            if dg <= pairing(cur, w):
                q = vsub(cur, g)
                if q == zero or memo.get(q):
                    counts[i] += 1
                    cur = q
                    break
        else:  # pragma: no cover - would contradict feasible(tgt)
            raise LatticeError("internal: failed to reconstruct a found solution")
    return counts

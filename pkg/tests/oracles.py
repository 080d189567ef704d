"""Independent reference implementations the tests compare against.

Nothing here imports the package's solvers: membership is decided by plain
enumeration of generator combinations, rank-2 cone membership by cross
products, and Smith forms are cross-checked through sympy.  Slow and simple
on purpose.
"""

from fractions import Fraction
from itertools import product


def degree_of(point, grading):
    return sum(c * w for c, w in zip(point, grading))


def enumerate_members(generators, grading, bound):
    """Breadth-first closure of {0} under generator addition, degree capped."""
    gens = [tuple(g) for g in generators]
    zero = (0,) * len(gens[0])
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(a + b for a, b in zip(p, g))
                if q in seen or degree_of(q, grading) > bound:
                    continue
                seen.add(q)
                nxt.append(q)
        frontier = nxt
    return seen


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def rank2_extremal_rays(generators):
    """The two boundary generators of a pointed full-dimensional plane cone."""
    gens = [tuple(g) for g in generators if any(g)]
    lo = hi = gens[0]
    for g in gens[1:]:
        if cross(lo, g) < 0:
            lo = g
        if cross(hi, g) > 0:
            hi = g
    return lo, hi


def rank2_cone_contains(generators, point):
    lo, hi = rank2_extremal_rays(generators)
    return cross(lo, point) >= 0 and cross(hi, point) <= 0


def rank2_full_dim(generators):
    """For generator sets within one closed quadrant, where cross-ordering
    is total and the cone is automatically pointed."""
    lo, hi = rank2_extremal_rays(generators)
    return cross(lo, hi) != 0


def rank2_holes(generators, grading, bound):
    """Cone points that no generator combination reaches, by box scan."""
    members = enumerate_members(generators, grading, bound)
    out = []
    span = bound + 1
    for x in range(-span, span + 1):
        for y in range(-span, span + 1):
            p = (x, y)
            if degree_of(p, grading) > bound:
                continue
            if rank2_cone_contains(generators, p) and p not in members:
                out.append(p)
    return sorted(out, key=lambda p: (degree_of(p, grading), p))


def box_points(rank, lo, hi):
    return list(product(range(lo, hi + 1), repeat=rank))


def numerical_semigroup(values, up_to):
    """Bit-set sieve for the additive closure of some positive integers."""
    reach = [False] * (up_to + 1)
    reach[0] = True
    for n in range(1, up_to + 1):
        reach[n] = any(v <= n and reach[n - v] for v in values)
    return {n for n, ok in enumerate(reach) if ok}


def sympy_smith_diagonal(rows):
    """Nonzero Smith diagonal of an integer matrix, via sympy."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    m = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(m[i, i]) for i in range(min(m.rows, m.cols))]
    return [int(d) for d in diag if d != 0]


def _solve_fractions(columns, target):
    """Exact nonempty-solution check for sum(x_i * col_i) = target, x free.

    Returns one solution vector or None.  Plain fraction Gauss on the
    augmented system; columns need not be square or independent.
    """
    n = len(target)
    k = len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])]
            for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        scale = rows[r][c]
        rows[r] = [v / scale for v in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if rows[i][k] != 0:
            return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][k]
    return sol


def rational_in_cone(rays, point):
    """Cone membership by trying every independent subset of the rays.

    A point of the cone lies in a simplicial subcone spanned by some
    linearly independent subset, so searching those is complete.
    """
    from itertools import combinations
    n = len(point)
    if all(c == 0 for c in point):
        return True
    for size in range(1, n + 1):
        for sub in combinations(rays, size):
            sol = _solve_fractions(sub, point)
            if sol is None:
                continue
            if all(x >= 0 for x in sol) and \
                    all(sum(Fraction(sub[j][i]) * sol[j] for j in range(size))
                        == point[i] for i in range(n)):
                return True
    return False

"""Rational polyhedral cones over the integers, with exact facet data.

A cone is stored by primitive generators plus derived exact data: primitive
inward facet normals, extremal rays, linear-span equations.  Full-dimensional
cones are the common case in this package (monoid validation re-embeds the
lattice so the weight cone spans it); lower-dimensional cones carry a
reindexed full-dimensional model used for membership and pointedness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .lattice import (
    as_vector,
    is_zero,
    kernel_line,
    pairing,
    primitive_vector,
    rank_of,
    smith_normal_form,
    smith_reindex,
    solve_exact,
)


class ConeError(ValueError):
    """Raised for cone queries that make no sense for the given cone."""


def kernel_basis(rows: Sequence[tuple], n: int) -> tuple:
    """Integer basis of the saturated kernel {f in Z^n : <r, f> = 0 for all r}."""
    if not rows:
        return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    _, d, v = smith_normal_form(tuple(rows))
    r = sum(1 for i in range(min(len(d), n)) if d[i][i] != 0)
    return tuple(tuple(v[i][j] for i in range(n)) for j in range(r, n))


@dataclass(frozen=True)
class Cone:
    ambient_rank: int
    generators: tuple        # primitive, deduplicated, lex-sorted
    dim: int
    facet_normals: tuple     # primitive inward normals, lex-sorted
    span_equations: tuple    # integer functionals vanishing on the span
    extremal_rays: tuple     # primitive, lex-sorted; meaningful when pointed
    is_pointed: bool
    _rel: Optional["Cone"] = None      # full-dim model when dim < ambient_rank
    _rel_basis: Optional[tuple] = None  # rows embedding the model back

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    def contains(self, point: Sequence) -> bool:
        """Exact membership; accepts int or Fraction coordinates."""
        p = tuple(point)
        if len(p) != self.ambient_rank:
            raise ConeError("point has wrong ambient rank")
        for eq in self.span_equations:
            if sum(x * y for x, y in zip(p, eq)) != 0:
                return False
        if self.is_full_dimensional:
            return all(
                sum(x * y for x, y in zip(p, nrm)) >= 0 for nrm in self.facet_normals
            )
        if self.dim == 0:
            return all(x == 0 for x in p)
        # rational coordinates along the span basis, then test the model
        assert self._rel is not None and self._rel_basis is not None
        cols = [tuple(b[i] for b in self._rel_basis) for i in range(self.ambient_rank)]
        sol = solve_exact(cols, p)
        if sol is None:
            return False
        return self._rel.contains(sol)

    def interior_contains(self, point: Sequence) -> bool:
        """Membership in the relative interior."""
        p = tuple(point)
        if not self.contains(p):
            return False
        if self.is_full_dimensional:
            return all(
                sum(x * y for x, y in zip(p, nrm)) > 0 for nrm in self.facet_normals
            )
        if self.dim == 0:
            return True
        assert self._rel is not None and self._rel_basis is not None
        cols = [tuple(b[i] for b in self._rel_basis) for i in range(self.ambient_rank)]
        sol = solve_exact(cols, p)
        return sol is not None and self._rel.interior_contains(sol)


def _full_dim_facet_normals(pgens: Sequence[tuple], n: int) -> tuple:
    """Primitive inward facet normals of a full-dimensional cone.

    Every facet of a full-dimensional cone contains n-1 independent
    generators, so scanning kernels of (n-1)-subsets finds them all.
    """
    found = set()
    for sub in combinations(pgens, n - 1):
        nrm = kernel_line(sub, n)
        if nrm is None:
            continue
        vals = [pairing(g, nrm) for g in pgens]
        if all(v >= 0 for v in vals):
            found.add(nrm)
        elif all(v <= 0 for v in vals):
            found.add(tuple(-x for x in nrm))
    return tuple(sorted(found))


def cone_from_generators(generators: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> Cone:
    """Build a cone from integer generators (zero vectors are dropped)."""
    gens = [as_vector(g) for g in generators]
    if ambient_rank is None:
        if not gens:
            raise ConeError("ambient rank needed when there are no generators")
        ambient_rank = len(gens[0])
    n = ambient_rank
    if any(len(g) != n for g in gens):
        raise ConeError("generators have mixed lengths")
    pgens = sorted({primitive_vector(g) for g in gens if not is_zero(g)})
    dim = rank_of(pgens) if pgens else 0
    span_eqs = tuple(sorted(kernel_basis(pgens, n)))

    if dim == 0:
        return Cone(n, (), 0, (), span_eqs, (), True)

    if dim == n:
        normals = _full_dim_facet_normals(pgens, n)
        pointed = rank_of(normals) == n if normals else (n == 0)
        rays: tuple = ()
        if pointed:
            rays = tuple(
                g for g in pgens
                if rank_of([nr for nr in normals if pairing(g, nr) == 0]) == n - 1
            )
        return Cone(n, tuple(pgens), dim, normals, (), rays, pointed)

    # lower-dimensional: model the cone inside its own span
    reindex = smith_reindex(pgens)
    rel_gens = [reindex.to_standard(g) for g in pgens]
    rel = cone_from_generators(rel_gens, reindex.rank)
    basis = reindex.matrix_rows()
    rays = ()
    if rel.is_pointed:
        # model rays are images of generators; pull the matching ones back
        rel_ray_set = set(rel.extremal_rays)
        rays = tuple(
            g for g, rg in zip(pgens, rel_gens)
            if primitive_vector(rg) in rel_ray_set
        )
    return Cone(
        n, tuple(pgens), dim, (), span_eqs, rays, rel.is_pointed,
        _rel=rel, _rel_basis=basis,
    )


def dual_cone(cone: Cone) -> Cone:
    """The cone of functionals nonnegative on the given cone."""
    n = cone.ambient_rank
    if cone.dim == 0:
        basis = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return cone_from_generators(basis + tuple(tuple(-x for x in b) for b in basis), n)
    if cone.is_full_dimensional:
        return cone_from_generators(cone.facet_normals, n)
    assert cone._rel is not None and cone._rel_basis is not None
    gens = []
    basis = cone._rel_basis
    for rel_nrm in cone._rel.facet_normals:
        # lift: any functional agreeing with the model normal on the span
        sol = _lift_functional(basis, rel_nrm, n)
        gens.append(sol)
    for eq in cone.span_equations:
        gens.append(eq)
        gens.append(tuple(-x for x in eq))
    return cone_from_generators(gens, n)


def _lift_functional(basis_rows: tuple, values: tuple, n: int) -> tuple:
    """A primitive integer functional taking the given values on basis rows.

    Solved over Q with free coordinates pinned to zero, then scaled primitive;
    scaling keeps all sign constraints intact.
    """
    aug = [[Fraction(x) for x in row] + [Fraction(val)] for row, val in zip(basis_rows, values)]
    pivots: dict[int, int] = {}
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
        pivots[col] = r
        r += 1
    sol = [Fraction(0)] * n
    for col, idx in pivots.items():
        sol[col] = aug[idx][n]
    den = 1
    for x in sol:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = tuple(int(x * den) for x in sol)
    if is_zero(ints):
        raise ConeError("cannot lift the zero functional")
    return primitive_vector(ints)


def cone_equals(a: Cone, b: Cone) -> bool:
    """Equality as point sets, decided by mutual generator containment."""
    if a.ambient_rank != b.ambient_rank:
        return False
    return all(b.contains(g) for g in a.generators) and \
        all(a.contains(g) for g in b.generators)


# ---------------------------------------------------------------------------
# faces of a pointed full-dimensional cone
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A face of a pointed full-dimensional cone, named by its extremal rays.

    ``ray_indices`` index into ``cone.extremal_rays``.  The apex is the empty
    set; the improper face (the whole cone) carries every index.
    """

    cone: Cone
    ray_indices: frozenset

    @property
    def rays(self) -> tuple:
        return tuple(self.cone.extremal_rays[i] for i in sorted(self.ray_indices))

    @property
    def dim(self) -> int:
        return rank_of(self.rays) if self.ray_indices else 0

    @property
    def is_apex(self) -> bool:
        return not self.ray_indices

    @property
    def is_improper(self) -> bool:
        return len(self.ray_indices) == len(self.cone.extremal_rays)

    def active_normals(self) -> tuple:
        """Facet normals of the ambient cone vanishing on this face."""
        return tuple(
            nrm for nrm in self.cone.facet_normals
            if all(pairing(r, nrm) == 0 for r in self.rays)
        )

    def contains_point(self, point: Sequence[int]) -> bool:
        p = as_vector(point)
        if not self.cone.contains(p):
            return False
        return all(pairing(p, nrm) == 0 for nrm in self.active_normals())

    def sort_key(self) -> tuple:
        return (self.dim, len(self.ray_indices), tuple(sorted(self.ray_indices)))


def _require_faceable(cone: Cone) -> None:
    if not (cone.is_pointed and cone.is_full_dimensional):
        raise ConeError("face lattice is only computed for pointed full-dimensional cones")


def face_generated_by(cone: Cone, points: Sequence[Sequence[int]]) -> Face:
    """Smallest face of the cone containing the given points of it."""
    _require_faceable(cone)
    pts = [as_vector(p) for p in points]
    for p in pts:
        if not cone.contains(p):
            raise ConeError(f"{p} is not in the cone")
    active = [
        nrm for nrm in cone.facet_normals
        if all(pairing(p, nrm) == 0 for p in pts)
    ]
    idx = frozenset(
        i for i, r in enumerate(cone.extremal_rays)
        if all(pairing(r, nrm) == 0 for nrm in active)
    )
    return Face(cone, idx)


def face_from_ray_indices(cone: Cone, indices) -> Face:
    """Smallest face containing the named extremal rays."""
    _require_faceable(cone)
    return face_generated_by(cone, [cone.extremal_rays[i] for i in indices]) \
        if indices else Face(cone, frozenset())


def all_faces(cone: Cone) -> list:
    """Every face, apex through improper, ordered by (dim, ray count, rays)."""
    _require_faceable(cone)
    whole = frozenset(range(len(cone.extremal_rays)))
    per_facet = [
        frozenset(
            i for i, r in enumerate(cone.extremal_rays) if pairing(r, nrm) == 0
        )
        for nrm in cone.facet_normals
    ]
    seen = {whole}
    frontier = [whole]
    while frontier:
        nxt = []
        for fs in frontier:
            for pf in per_facet:
                cut = fs & pf
                if cut not in seen:
                    seen.add(cut)
                    nxt.append(cut)
        frontier = nxt
    faces = [Face(cone, s) for s in seen]
    faces.sort(key=Face.sort_key)
    return faces


def facet_faces(cone: Cone) -> list:
    """The codimension-1 faces, index-aligned with ``cone.facet_normals``."""
    _require_faceable(cone)
    out = []
    for nrm in cone.facet_normals:
        idx = frozenset(
            i for i, r in enumerate(cone.extremal_rays) if pairing(r, nrm) == 0
        )
        out.append(Face(cone, idx))
    return out

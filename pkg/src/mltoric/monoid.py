"""Affine monoids from generators: membership, holes, saturation structure.

The monoid lives in the lattice its generators span as a group; construction
re-embeds that group as Z^rank, so all public methods speak normalized
coordinates (the ``reindex`` attribute translates back and forth).  Holes,
hole families and facet saturation verdicts come with certificates: exact in
rank at most two, bounded or window-based above that.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .cones import Cone, cone_from_generators, dual_cone, facet_faces
from .holes import (
    HoleRay,
    HoleStructure,
    rank1_structure,
    rank2_structure,
)
from .lattice import (
    LatticeError,
    LatticeReindex,
    as_vector,
    pairing,
    smith_reindex,
    solve_nonnegative,
    vadd,
    vneg,
    vscale,
    vsub,
)

DEFAULT_DEGREE_FACTOR = 12
DEFAULT_FAMILY_WINDOW = 8

EXACT = "exact"


def certified_to(bound: int) -> str:
    return f"certified-to-degree-{bound}"


def window_tag(window: int) -> str:
    return f"heuristic-window-{window}"


class MonoidError(ValueError):
    """Invalid monoid input (empty, malformed, duplicate generators)."""


class UnitsError(MonoidError):
    """The monoid has nonzero units: the cone of exponents is not pointed."""


def thread_count() -> int:
    raw = os.environ.get("ML_TORIC_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


@dataclass(frozen=True)
class HoleFamily:
    """Hole progression base + k*direction, k >= 0, along a facet direction."""

    base: tuple
    direction: tuple
    certificate: str

    def member(self, k: int) -> tuple:
        return vadd(self.base, vscale(k, self.direction))


@dataclass(frozen=True)
class HoleInventory:
    bound: Optional[int]
    holes: tuple
    families: tuple
    certificate: str


@dataclass(frozen=True)
class SaturationVerdict:
    status: str                 # yes-with-witness | no-with-witness | inconclusive
    witness: Optional[tuple]    # the point itself (yes) or a blocking hole (no)
    bound: Optional[int]
    certificate: str


SAT_YES = "yes-with-witness"
SAT_NO = "no-with-witness"
SAT_UNKNOWN = "inconclusive"

FACET_SATURATED = "saturated"
FACET_ALMOST = "almost-saturated-with-witness"
FACET_NOWHERE = "nowhere-saturated"
FACET_UNKNOWN = "inconclusive"


@dataclass(frozen=True)
class FacetSaturation:
    facet_index: int
    label: str
    almost_saturated: Optional[bool]
    witness: Optional[tuple]        # saturation point on the facet, when almost
    blocking: Optional[HoleFamily]  # family denying saturation points, when nowhere
    holes_on_facet: tuple           # holes lying on the facet (finite part)
    certificate: str


class AffineMonoid:
    """Submonoid of a lattice given by finitely many generators.

    Rejects empty input, duplicate generators, mixed lengths, and monoids
    with nonzero units.  Zero generators are dropped.  The generator list is
    re-embedded so that it generates the full integer lattice of its rank.
    """

    def __init__(self, generators: Sequence[Sequence[int]],
                 name: Optional[str] = None):
        gens = [as_vector(g) for g in generators]
        if not gens:
            raise MonoidError("monoid needs at least one generator")
        lengths = {len(g) for g in gens}
        if len(lengths) != 1:
            raise MonoidError("generators have mixed lengths")
        if len(set(gens)) != len(gens):
            raise MonoidError("duplicate generators")
        self.name = name
        self.ambient_rank = lengths.pop()
        self.original_generators = tuple(gens)

        nonzero = [g for g in gens if any(g)]
        self.reindex: LatticeReindex = smith_reindex(nonzero, self.ambient_rank)
        self.rank = self.reindex.rank
        self.generators = tuple(sorted(
            self.reindex.to_standard(g) for g in nonzero))

        self.cone: Cone = cone_from_generators(self.generators, self.rank)
        if not self.cone.is_full_dimensional:  # pragma: no cover
            raise MonoidError("normalized cone lost full dimension")
        if not self.cone.is_pointed:
            witness = next(
                (g for g in self.original_generators
                 if any(g) and self.cone.contains(
                     vneg(self.reindex.to_standard(g)))),
                None)
            raise UnitsError(
                "monoid has nonzero units"
                + (f": generator {witness} is invertible" if witness else ""))
        self.dual: Cone = dual_cone(self.cone)
        self.grading = tuple(
            sum(n[i] for n in self.cone.facet_normals) for i in range(self.rank))
        for g in self.generators:
            if pairing(g, self.grading) <= 0:  # pragma: no cover
                raise MonoidError("grading fails to be positive on a generator")

        self.facets: tuple = facet_faces(self.cone) if self.rank > 0 else ()
        self._reach_memo: dict = {(0,) * self.rank: True}
        self._structure: Optional[HoleStructure] = None
        self._engines: Optional[tuple] = None
        self._facet_engine_idx: dict = {}
        if self.rank <= 2:
            self._build_exact()

    def __repr__(self) -> str:
        label = f", name={self.name!r}" if self.name else ""
        return f"AffineMonoid({self.original_generators!r}{label})"

    # -- construction helpers -------------------------------------------

    def _build_exact(self) -> None:
        if self.rank == 0:
            self._structure = HoleStructure((), ())
            self._engines = ()
            return
        if self.rank == 1:
            self._structure = rank1_structure(self.generators)
            self._engines = ()
            return
        rays = self.cone.extremal_rays
        normals = []
        for r in rays:
            match = [n for n in self.cone.facet_normals if pairing(r, n) == 0]
            if len(match) != 1:  # pragma: no cover
                raise MonoidError("rank-2 ray without a unique facet")
            normals.append(match[0])
        self._structure, self._engines = rank2_structure(
            self.generators, rays, normals)
        for fi, n in enumerate(self.cone.facet_normals):
            for ri, r in enumerate(rays):
                if pairing(r, n) == 0:
                    self._facet_engine_idx[fi] = ri

    # -- basic queries ----------------------------------------------------

    def degree(self, m: Sequence[int]) -> int:
        return pairing(as_vector(m), self.grading)

    @property
    def default_degree_bound(self) -> int:
        if not self.generators:
            return 0
        return DEFAULT_DEGREE_FACTOR * max(self.degree(g) for g in self.generators)

    def in_saturation(self, m: Sequence[int]) -> bool:
        return self.cone.contains(as_vector(m))

    def contains(self, m: Sequence[int]) -> bool:
        m = as_vector(m)
        if len(m) != self.rank:
            raise MonoidError("point has the wrong rank")
        if self.rank == 0:
            return True
        cached = self._reach_memo.get(m)
        if cached is not None:
            return cached
        if not self.cone.contains(m):
            self._reach_memo[m] = False
            return False
        found = solve_nonnegative(
            self.generators, m, grading=self.grading,
            prune=self.cone.contains, _memo=self._reach_memo)
        return found is not None

    def membership_certificate(self, m: Sequence[int]) -> Optional[tuple]:
        """Coefficients over ``generators`` writing m as a nonnegative sum."""
        m = as_vector(m)
        if self.rank == 0:
            return () if not any(m) else None
        if not self.cone.contains(m):
            return None
        counts = solve_nonnegative(
            self.generators, m, grading=self.grading,
            prune=self.cone.contains, _memo=self._reach_memo)
        return tuple(counts) if counts is not None else None

    def is_hole(self, m: Sequence[int]) -> bool:
        return self.in_saturation(m) and not self.contains(m)

    # -- ambient-coordinate helpers (CLI entry points) --------------------

    def to_normalized(self, point: Sequence[int]) -> Optional[tuple]:
        p = as_vector(point)
        if len(p) != self.ambient_rank:
            raise MonoidError("point has the wrong ambient rank")
        if not any(p):
            return (0,) * self.rank
        if not self.reindex.in_group(p):
            return None
        return self.reindex.to_standard(p)

    def from_normalized(self, point: Sequence[int]) -> tuple:
        if self.rank == 0:
            return (0,) * self.ambient_rank
        return self.reindex.from_standard(as_vector(point))

    @property
    def was_reembedded(self) -> bool:
        return not self.reindex.identity

    # -- hole machinery ----------------------------------------------------

    @property
    def exact_mode(self) -> bool:
        return self.rank <= 2

    def hole_structure(self) -> Optional[HoleStructure]:
        """The full exact hole decomposition; None above rank two."""
        return self._structure

    def hole_engines(self) -> tuple:
        """Rank-2 line engines, indexed like ``cone.extremal_rays``."""
        return self._engines or ()

    def _engine_for_facet(self, facet_index: int):
        idx = self._facet_engine_idx.get(facet_index)
        return None if idx is None else self._engines[idx]

    def _lattice_points_up_to(self, bound: int) -> list:
        """All points of the cone with degree <= bound, sorted by (degree, lex)."""
        from fractions import Fraction
        from itertools import product
        from math import ceil, floor
        if self.rank == 0 or bound < 0:
            return [()] if self.rank == 0 and bound >= 0 else []
        lows = [0] * self.rank
        highs = [0] * self.rank
        for r in self.cone.extremal_rays:
            scale = Fraction(bound, pairing(r, self.grading))
            for i, c in enumerate(r):
                v = scale * c
                lows[i] = min(lows[i], floor(v))
                highs[i] = max(highs[i], ceil(v))
        pts = []
        for x in product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
            if pairing(x, self.grading) <= bound and self.cone.contains(x):
                pts.append(x)
        pts.sort(key=lambda p: (pairing(p, self.grading), p))
        return pts

    def _bounded_members(self, bound: int) -> set:
        """Monoid points of degree <= bound via a level-by-level sweep."""
        pts = self._lattice_points_up_to(bound)
        members: set = set()
        workers = thread_count()

        def is_member(p: tuple) -> bool:
            if not any(p):
                return True
            return any(vsub(p, g) in members for g in self.generators)

        level: list = []
        level_deg = None
        for p in pts + [None]:
            deg = None if p is None else pairing(p, self.grading)
            if deg != level_deg and level:
                # same-degree points are independent: generators have
                # positive degree, so predecessors sit in lower levels
                if workers > 1 and len(level) > 64:
                    with ThreadPoolExecutor(max_workers=workers) as pool:
                        flags = list(pool.map(is_member, level))
                else:
                    flags = [is_member(q) for q in level]
                members.update(q for q, ok in zip(level, flags) if ok)
                level = []
            if p is not None:
                level_deg = deg
                level.append(p)
        for p in members:
            self._reach_memo.setdefault(p, True)
        return members

    def holes_up_to(self, bound: Optional[int] = None) -> HoleInventory:
        """Certified holes of degree at most the bound, sorted by (degree, lex)."""
        if bound is None:
            bound = self.default_degree_bound
        if bound < 0:
            raise MonoidError("negative degree bound")
        if self._structure is not None:
            holes = self._structure.holes_up_to(self.grading, bound)
            return HoleInventory(bound, tuple(holes), (), EXACT)
        members = self._bounded_members(bound)
        holes = [p for p in self._lattice_points_up_to(bound)
                 if p not in members]
        return HoleInventory(bound, tuple(holes), (), certified_to(bound))

    def hole_families(self, bound: Optional[int] = None,
                      window: int = DEFAULT_FAMILY_WINDOW) -> HoleInventory:
        """Base-minimal hole progressions along primitive facet directions."""
        if window <= 0:
            raise MonoidError("family window must be positive")
        inventory = self.holes_up_to(bound)
        if self._structure is not None:
            fams = tuple(
                HoleFamily(r.base, r.direction, EXACT)
                for r in self._structure.rays if r.full_line)
            return HoleInventory(inventory.bound, inventory.holes, fams, EXACT)
        hole_set = set(inventory.holes)
        fams = []
        for h in inventory.holes:
            for d in self.cone.extremal_rays:
                if vsub(h, d) in hole_set:
                    continue  # not base-minimal along d
                if all(not self.contains(vadd(h, vscale(k, d)))
                       for k in range(1, window + 1)):
                    fams.append(HoleFamily(h, d, window_tag(window)))
        return HoleInventory(inventory.bound, inventory.holes, tuple(fams),
                             certified_to(inventory.bound))

    # -- saturation points --------------------------------------------------

    def _ray_blocks(self, ray: HoleRay, p: tuple) -> Optional[tuple]:
        """A member of the progression lying in p + cone, if any."""
        normal = next(n for n in self.cone.facet_normals
                      if pairing(ray.direction, n) == 0)
        if pairing(ray.base, normal) < pairing(p, normal):
            return None
        step = ray.step()
        k = 0
        member = ray.base
        # every other normal grows along the step, so a finite k suffices
        while not self.cone.contains(vsub(member, p)):
            member = vadd(member, step)
            k += 1
            if k > 10_000:  # pragma: no cover
                raise LatticeError("runaway progression scan")
        return member

    def is_saturation_point(self, p: Sequence[int],
                            bound: Optional[int] = None,
                            window: int = DEFAULT_FAMILY_WINDOW) -> SaturationVerdict:
        """Does p + cone contain no holes?  Requires p in the monoid."""
        p = as_vector(p)
        if not self.contains(p):
            raise MonoidError("saturation test needs a monoid point")
        if self._structure is not None:
            for h in self._structure.sporadic:
                if self.cone.contains(vsub(h, p)):
                    return SaturationVerdict(SAT_NO, h, None, EXACT)
            for ray in self._structure.rays:
                member = self._ray_blocks(ray, p)
                if member is not None:
                    return SaturationVerdict(SAT_NO, member, None, EXACT)
            return SaturationVerdict(SAT_YES, p, None, EXACT)
        if bound is None:
            bound = self.default_degree_bound
        inventory = self.hole_families(bound, window)
        for h in inventory.holes:
            if self.cone.contains(vsub(h, p)):
                return SaturationVerdict(SAT_NO, h, bound, EXACT)
        for fam in inventory.families:
            blocked = self._family_blocks(fam, p, window)
            if blocked is not None:
                k, member = blocked
                tag = EXACT if k <= window else window_tag(window)
                return SaturationVerdict(SAT_NO, member, bound, tag)
        return SaturationVerdict(SAT_YES, p, bound, certified_to(bound))

    def _family_blocks(self, fam: HoleFamily, p: tuple,
                       window: int) -> Optional[tuple]:
        """Least k putting the family member into p + cone, with the member."""
        k_lo = 0
        for n in self.cone.facet_normals:
            growth = pairing(fam.direction, n)
            slack = pairing(vsub(fam.base, p), n)
            if growth == 0:
                if slack < 0:
                    return None
            elif slack < 0:
                k_lo = max(k_lo, (-slack + growth - 1) // growth)
        member = fam.member(k_lo)
        if not self.cone.contains(vsub(member, p)):  # pragma: no cover
            raise LatticeError("family blocking arithmetic broken")
        return k_lo, member

    # -- facet saturation ---------------------------------------------------

    def _facet_points_up_to(self, facet_index: int, bound: int) -> list:
        normal = self.cone.facet_normals[facet_index]
        return [p for p in self._lattice_points_up_to(bound)
                if pairing(p, normal) == 0]

    def holes_on_facet(self, facet_index: int,
                       bound: Optional[int] = None) -> tuple:
        """Holes lying on the facet itself (finite part, exact in rank <= 2)."""
        normal = self.cone.facet_normals[facet_index]
        if self._structure is not None:
            if self.rank == 1:
                return ()  # the only facet is the apex
            eng = self._engine_for_facet(facet_index)
            return tuple(sorted(eng.point(0, t) for t in eng.line_holes(0)))
        inventory = self.holes_up_to(bound)
        return tuple(h for h in inventory.holes if pairing(h, normal) == 0)

    def facet_saturation_status(self, facet_index: int,
                                bound: Optional[int] = None,
                                window: int = DEFAULT_FAMILY_WINDOW) -> FacetSaturation:
        if not 0 <= facet_index < len(self.cone.facet_normals):
            raise MonoidError("no such facet")
        if self._structure is not None:
            return self._facet_status_exact(facet_index)
        return self._facet_status_bounded(facet_index, bound, window)

    def _facet_status_exact(self, facet_index: int) -> FacetSaturation:
        if self.rank == 1:
            # single facet: the apex; 0 is a saturation point iff no holes
            if self._structure.is_empty:
                return FacetSaturation(facet_index, FACET_SATURATED, True,
                                       (0,), None, (), EXACT)
            return FacetSaturation(facet_index, FACET_NOWHERE, False, None,
                                   None, (), EXACT)
        eng = self._engine_for_facet(facet_index)
        parallel = [r for r in self._structure.rays if r.direction == eng.ray]
        if parallel:
            blocker = min(parallel, key=lambda r: (r.base, r.stride))
            fam = HoleFamily(blocker.base, blocker.direction, EXACT)
            on_facet = self.holes_on_facet(facet_index)
            return FacetSaturation(facet_index, FACET_NOWHERE, False, None,
                                   fam, on_facet, EXACT)
        witness = self._facet_witness_exact(facet_index, eng)
        on_facet = self.holes_on_facet(facet_index)
        label = FACET_SATURATED if not on_facet else FACET_ALMOST
        return FacetSaturation(facet_index, label, True, witness, None,
                               on_facet, EXACT)

    def _facet_witness_exact(self, facet_index: int, eng) -> tuple:
        """Least saturation point t*ray on an almost-saturated facet."""
        other = eng.off_normal
        need = -1
        for h in self._structure.sporadic:
            need = max(need, pairing(h, other))
        for ray in self._structure.rays:
            # rays run along the other direction here
            need = max(need, pairing(ray.base, other))
        t = 0
        while True:
            if eng.T.contains(t) and t * eng.alpha > need:
                return eng.point(0, t)
            t += 1
            if t > 10 * (abs(need) + eng.T.d * (eng.T.conductor + 1) + 1):
                raise LatticeError("witness scan ran away")  # pragma: no cover

    def _facet_status_bounded(self, facet_index: int, bound: Optional[int],
                              window: int) -> FacetSaturation:
        if bound is None:
            bound = self.default_degree_bound
        normal = self.cone.facet_normals[facet_index]
        inventory = self.hole_families(bound, window)
        on_facet = tuple(h for h in inventory.holes
                         if pairing(h, normal) == 0)
        # nowhere-saturated first: a family along this facet whose direction
        # leaves every other facet blocks every candidate on it
        for fam in inventory.families:
            if pairing(fam.direction, normal) != 0:
                continue
            if all(pairing(fam.direction, n) > 0
                   for n in self.cone.facet_normals if n != normal):
                return FacetSaturation(facet_index, FACET_NOWHERE, False,
                                       None, fam, on_facet, window_tag(window))
        for p in self._facet_points_up_to(facet_index, bound):
            if not self.contains(p):
                continue
            verdict = self.is_saturation_point(p, bound, window)
            if verdict.status == SAT_YES:
                label = FACET_SATURATED if not on_facet else FACET_ALMOST
                return FacetSaturation(facet_index, label, True, p, None,
                                       on_facet, certified_to(bound))
        return FacetSaturation(facet_index, FACET_UNKNOWN, None, None, None,
                               on_facet, certified_to(bound))

    def facet_statuses(self, bound: Optional[int] = None,
                       window: int = DEFAULT_FAMILY_WINDOW) -> tuple:
        return tuple(self.facet_saturation_status(i, bound, window)
                     for i in range(len(self.cone.facet_normals)))

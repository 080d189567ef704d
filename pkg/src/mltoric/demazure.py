"""Demazure roots, their descent to the non-saturated algebra, and slices.

A root attaches to an extremal ray of the dual cone (equivalently a facet of
the cone of exponents) and defines a homogeneous derivation of the saturated
algebra.  Descent asks whether that derivation preserves the actual monoid
algebra; the affine-facet / affine-ray tests identify the facets whose root
derivation additionally admits a slice, which is what later splits off a
polynomial factor.

The facet-level "saturated" requirement is interpreted through saturation
points (the facet must contain one).  Reports flag the facets where a
stricter hole-free reading would disagree; see the classification notes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .derivations import HomogeneousDerivation
from .lattice import LatticeError, pairing, rank_of, solve_exact, vadd, vneg, vscale
from .monoid import (
    DEFAULT_FAMILY_WINDOW,
    EXACT,
    FACET_ALMOST,
    FACET_NOWHERE,
    FACET_SATURATED,
    AffineMonoid,
    FacetSaturation,
    MonoidError,
    certified_to,
    window_tag,
)
from .cones import face_from_ray_indices

DEFAULT_ROOT_HEIGHT = 8


@dataclass(frozen=True)
class DemazureRoot:
    """Lattice vector pairing to -1 with one facet normal, >= 0 with the rest."""

    ray_index: int   # index into cone.facet_normals (rays of the dual cone)
    shift: tuple

    def derivation(self, monoid: AffineMonoid) -> HomogeneousDerivation:
        normal = monoid.cone.facet_normals[self.ray_index]
        return HomogeneousDerivation(normal, self.shift)


@dataclass(frozen=True)
class DescentVerdict:
    status: str                  # "yes" | "no"
    witness: Optional[tuple]     # monoid point whose shift lands on a hole
    bound: Optional[int]
    certificate: str


@dataclass(frozen=True)
class SliceDerivation:
    facet_index: int
    root: DemazureRoot
    derivation: HomogeneousDerivation
    slice_point: tuple
    certificate: str


@dataclass(frozen=True)
class FacetClassification:
    facet_index: int
    saturation: FacetSaturation
    is_affine: Optional[bool]
    distinguished_ray: Optional[tuple]
    affine_ray: Optional[bool]
    affine_ray_reason: str
    slice_derivation: Optional[SliceDerivation]
    notes: tuple


def _independent_normal_indices(monoid: AffineMonoid) -> list:
    picked: list = []
    for i, n in enumerate(monoid.cone.facet_normals):
        if rank_of([monoid.cone.facet_normals[j] for j in picked] + [n]) > len(picked):
            picked.append(i)
        if len(picked) == monoid.rank:
            break
    if len(picked) != monoid.rank:  # pragma: no cover - dual is full-dimensional
        raise LatticeError("facet normals do not span")
    return picked


def demazure_roots(monoid: AffineMonoid, ray_index: int,
                   height: int = DEFAULT_ROOT_HEIGHT) -> tuple:
    """All roots for one dual ray whose pairings lie in the height box.

    Complete for the region |<e, n>| <= height over every facet normal n;
    the root inequalities sharpen that to -1 on the chosen normal and
    [0, height] on the others.
    """
    if height <= 0:
        raise MonoidError("height bound must be positive")
    normals = monoid.cone.facet_normals
    if not 0 <= ray_index < len(normals):
        raise MonoidError("no such dual ray")
    if monoid.rank == 0:
        return ()
    basis_idx = _independent_normal_indices(monoid)
    basis = [normals[i] for i in basis_idx]
    ranges = []
    for i in basis_idx:
        if i == ray_index:
            ranges.append((-1,))
        else:
            ranges.append(tuple(range(0, height + 1)))
    roots = []
    for values in product(*ranges):
        e = solve_exact(basis, values)
        if e is None:
            continue
        if any(x.denominator != 1 for x in e):
            continue
        e = tuple(int(x) for x in e)
        ok = True
        for i, n in enumerate(normals):
            v = pairing(e, n)
            if i == ray_index:
                ok = v == -1
            else:
                ok = 0 <= v <= height
            if not ok:
                break
        if ok:
            roots.append(DemazureRoot(ray_index, e))
    roots.sort(key=lambda r: r.shift)
    return tuple(roots)


def all_demazure_roots(monoid: AffineMonoid,
                       height: int = DEFAULT_ROOT_HEIGHT) -> dict:
    return {i: demazure_roots(monoid, i, height)
            for i in range(len(monoid.cone.facet_normals))}


# ---------------------------------------------------------------------------
# descent
# ---------------------------------------------------------------------------

def _descends_exact(monoid: AffineMonoid, root: DemazureRoot) -> DescentVerdict:
    structure = monoid.hole_structure()
    shift = root.shift
    for h in structure.sporadic:
        p = vadd(h, vneg(shift))
        if monoid.contains(p):
            return DescentVerdict("no", p, None, EXACT)
    for ray in structure.rays:
        witness = _ray_descent_block(monoid, ray, shift)
        if witness is not None:
            return DescentVerdict("no", witness, None, EXACT)
    return DescentVerdict("yes", None, None, EXACT)


def _ray_descent_block(monoid: AffineMonoid, ray, shift) -> Optional[tuple]:
    """A monoid point p = (hole - shift) with the hole on the progression."""
    engines = monoid.hole_engines()
    eng = next(e for e in engines if e.ray == ray.direction)
    base_shifted = vadd(ray.base, vneg(shift))
    c = pairing(base_shifted, eng.normal)
    if c < 0:
        return None   # the whole shifted progression misses the cone
    t0 = eng._t_of(base_shifted, c)
    state = eng.state(c)
    if not state:
        return None
    from math import gcd
    g = gcd(ray.stride, eng.d) or 1
    if not any((o - t0) % g == 0 for o in state):
        return None
    k = 0
    t = t0
    cap = (max(state) + eng.stab + abs(t0) + eng.d) * (eng.d + 2) + 64
    while not eng.covered(c, t):
        k += 1
        t += ray.stride
        if k > cap:  # pragma: no cover - congruence guaranteed a hit
            raise LatticeError("descent block scan ran away")
    hole = vadd(ray.base, vscale(k, ray.step()))
    return vadd(hole, vneg(shift))


def _descends_bounded(monoid: AffineMonoid, root: DemazureRoot,
                      bound: int) -> DescentVerdict:
    shift = root.shift
    members = sorted(monoid._bounded_members(bound),
                     key=lambda p: (monoid.degree(p), p))
    for p in members:
        q = vadd(p, shift)
        if monoid.in_saturation(q) and not monoid.contains(q):
            return DescentVerdict("no", p, bound, EXACT)
    return DescentVerdict("yes", None, bound, certified_to(bound))


def descends(monoid: AffineMonoid, root: DemazureRoot,
             bound: Optional[int] = None) -> DescentVerdict:
    """Does the root's derivation preserve the monoid algebra?

    Exact in rank <= 2 via the hole decomposition; otherwise a bounded sweep
    over monoid points (failures are still exact, successes are certified to
    the bound).
    """
    normal = monoid.cone.facet_normals[root.ray_index]
    if pairing(root.shift, normal) != -1:
        raise MonoidError("not a root for that dual ray")
    if monoid.hole_structure() is not None:
        if monoid.rank <= 1:
            # rank 1 roots: shift = (-1); holes are gaps g with g+1 in the monoid
            for (g,) in monoid.hole_structure().sporadic:
                p = vadd((g,), vneg(root.shift))
                if monoid.contains(p):
                    return DescentVerdict("no", p, None, EXACT)
            return DescentVerdict("yes", None, None, EXACT)
        return _descends_exact(monoid, root)
    return _descends_bounded(monoid, root,
                             bound if bound is not None else monoid.default_degree_bound)


def descended_roots(monoid: AffineMonoid,
                    height: int = DEFAULT_ROOT_HEIGHT,
                    bound: Optional[int] = None) -> dict:
    """Per dual ray, the roots whose derivations preserve the monoid algebra."""
    out = {}
    for i, roots in all_demazure_roots(monoid, height).items():
        kept = []
        for r in roots:
            if descends(monoid, r, bound).status == "yes":
                kept.append(r)
        out[i] = tuple(kept)
    return out


# ---------------------------------------------------------------------------
# affine facets, affine rays, slices
# ---------------------------------------------------------------------------

def distinguished_ray_face(monoid: AffineMonoid, facet_index: int):
    """Intersection of all other facets, as a face (empty intersection: whole cone)."""
    facets = monoid.facets
    ray_idx = set(range(len(monoid.cone.extremal_rays)))
    for j, f in enumerate(facets):
        if j != facet_index:
            ray_idx &= f.ray_indices
    return face_from_ray_indices(monoid.cone, ray_idx)


def is_affine_facet(monoid: AffineMonoid, facet_index: int,
                    bound: Optional[int] = None,
                    window: int = DEFAULT_FAMILY_WINDOW) -> Optional[bool]:
    """Facet with a saturation point whose complementary facets meet in a line.

    None when the saturation verdict is inconclusive at the given bounds.
    """
    tau = distinguished_ray_face(monoid, facet_index)
    if tau.dim != 1:
        return False
    status = monoid.facet_saturation_status(facet_index, bound, window)
    if status.label in (FACET_SATURATED, FACET_ALMOST):
        return True
    if status.label == FACET_NOWHERE:
        return False
    return None


def is_affine_ray(monoid: AffineMonoid, facet_index: int,
                  bound: Optional[int] = None,
                  window: int = DEFAULT_FAMILY_WINDOW):
    """Test the distinguished ray of an affine facet; returns (flag, reason).

    Conditions: the primitive ray vector lies in the monoid, pairs to 1 with
    the facet normal, and every hole on the facet propagates along the ray
    (exactly in rank <= 2, window-checked otherwise).
    """
    affine = is_affine_facet(monoid, facet_index, bound, window)
    if affine is None:
        raise MonoidError("facet saturation inconclusive; cannot classify ray")
    if not affine:
        raise MonoidError("distinguished ray is defined only for affine facets")
    tau = distinguished_ray_face(monoid, facet_index)
    (ray_pos,) = tuple(tau.ray_indices)
    r = monoid.cone.extremal_rays[ray_pos]
    normal = monoid.cone.facet_normals[facet_index]
    if not monoid.contains(r):
        return False, f"ray vector {r} is not in the monoid", r
    pair = pairing(r, normal)
    if pair != 1:
        return False, (f"ray vector {r} pairs to {pair} with the facet "
                       "normal; 1 is required"), r
    holes_on = monoid.holes_on_facet(facet_index, bound)
    if monoid.hole_structure() is not None and monoid.rank == 2:
        engines = monoid.hole_engines()
        eng = next(e for e in engines if e.ray == r)
        for h in holes_on:
            c = eng.line_of(h)
            if eng.line_is_empty(c):
                continue   # the full line is holes: propagation holds exactly
            # some position on the line is covered, and coverage in a covered
            # residue class is upward unbounded, so a member past h exists
            t_h = eng._t_of(h, c)
            t = t_h + 1
            top = max(max(eng.state(c)) + eng.stab, t) + eng.d + 1
            while t <= top and not eng.covered(c, t):
                t += 1
            if t > top:  # pragma: no cover - contradicts upward coverage
                raise LatticeError("persistence break without witness")
            k = t - t_h
            member = vadd(h, vscale(k, r))
            return False, (f"hole {h} does not propagate: {h} + {k}*{r} "
                           f"= {member} is in the monoid"), r
        return True, "every facet hole propagates along the ray (exact)", r
    window_used = window
    for h in holes_on:
        for k in range(1, window_used + 1):
            member = vadd(h, vscale(k, r))
            if monoid.contains(member):
                return False, (f"hole {h} does not propagate: {h} + {k}*{r} "
                               f"= {member} is in the monoid"), r
    if holes_on:
        return True, ("every facet hole propagates along the ray "
                      f"({window_tag(window_used)})"), r
    return True, "no holes on the facet; propagation is vacuous", r


def slice_derivation_for_facet(monoid: AffineMonoid, facet_index: int,
                               bound: Optional[int] = None,
                               window: int = DEFAULT_FAMILY_WINDOW
                               ) -> Optional[SliceDerivation]:
    """The root derivation with slice attached to an affine facet/ray pair."""
    affine = is_affine_facet(monoid, facet_index, bound, window)
    if not affine:
        return None
    ok, _reason, r = is_affine_ray(monoid, facet_index, bound, window)
    if not ok:
        return None
    root = DemazureRoot(facet_index, vneg(r))
    verdict = descends(monoid, root, bound)
    if verdict.status != "yes":  # pragma: no cover - contradicts the theory
        raise LatticeError(
            "slice root fails to descend; internal inconsistency")
    return SliceDerivation(facet_index, root, root.derivation(monoid), r,
                           verdict.certificate)


def classify_facet(monoid: AffineMonoid, facet_index: int,
                   bound: Optional[int] = None,
                   window: int = DEFAULT_FAMILY_WINDOW) -> FacetClassification:
    status = monoid.facet_saturation_status(facet_index, bound, window)
    tau = distinguished_ray_face(monoid, facet_index)
    notes = []
    if tau.dim != 1:
        return FacetClassification(facet_index, status, False, None, None,
                                   "no distinguished ray: the other facets "
                                   f"meet in dimension {tau.dim}", None, ())
    (ray_pos,) = tuple(tau.ray_indices)
    r = monoid.cone.extremal_rays[ray_pos]
    if status.label == FACET_NOWHERE:
        return FacetClassification(facet_index, status, False, r, None,
                                   "facet has no saturation point", None, ())
    if status.label not in (FACET_SATURATED, FACET_ALMOST):
        return FacetClassification(facet_index, status, None, r, None,
                                   "facet saturation inconclusive", None, ())
    if status.label == FACET_ALMOST and status.holes_on_facet:
        notes.append(
            "facet carries holes yet contains a saturation point; a strictly "
            "hole-free reading of the affine-facet condition would reject it, "
            "the saturation-point reading used here accepts it")
    ok, reason, _r = is_affine_ray(monoid, facet_index, bound, window)
    slice_der = None
    if ok:
        slice_der = slice_derivation_for_facet(monoid, facet_index, bound, window)
    return FacetClassification(facet_index, status, True, r, ok, reason,
                               slice_der, tuple(notes))


def classify_all_facets(monoid: AffineMonoid, bound: Optional[int] = None,
                        window: int = DEFAULT_FAMILY_WINDOW) -> tuple:
    return tuple(classify_facet(monoid, i, bound, window)
                 for i in range(len(monoid.cone.facet_normals)))

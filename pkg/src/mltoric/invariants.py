"""Makar-Limanov faces, the affine-factor splitting, and rigidity verdicts.

Everything here is assembly: the per-facet saturation and affinity work is
done by ``monoid`` and ``demazure``, and this module intersects, projects,
and cross-checks the results into one report.

Two empty-intersection conventions are fixed here.  The face cut out by the
almost-saturated facets degenerates to the whole cone when no facet
qualifies, so the graded Makar-Limanov algebra is everything and the variety
is rigid.  The face cut out by slice derivations has no such geometric
stand-in when no slice exists at all; that case is reported as the
``NO_SLICE`` marker rather than a face.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

from .cones import Face, face_from_ray_indices
from .demazure import DEFAULT_ROOT_HEIGHT, classify_all_facets
from .lattice import LatticeError, pairing, rank_of, vscale, vsub
from .monoid import (
    DEFAULT_FAMILY_WINDOW,
    EXACT,
    FACET_ALMOST,
    FACET_SATURATED,
    FACET_UNKNOWN,
    AffineMonoid,
)


@dataclass(frozen=True)
class NoSliceMarker:
    """Stands in for the slice-kernel face when no slice derivation exists.

    The intersection defining that subalgebra then runs over an empty family,
    so the subalgebra is all of the coordinate ring.  Not a face: callers
    must branch on it before touching face attributes.
    """

    def __repr__(self) -> str:
        return "no-slice-exists"


NO_SLICE = NoSliceMarker()


@dataclass(frozen=True)
class SplitFactor:
    """The decomposition of the variety as a core times an affine space.

    ``pairs`` lists (facet index, ray vector, facet normal) for each affine
    ray, in facet order.  ``core_generators`` are the projections of the
    monoid generators along those rays, in the analyzed monoid's normalized
    coordinates; ``core_monoid`` is the same data re-embedded in rank n - k.
    """

    k: int
    pairs: tuple
    core_generators: tuple
    core_monoid: AffineMonoid

    def decompose(self, point: Sequence[int]) -> tuple:
        """Split ``point`` into (core part, ray coefficients)."""
        p = tuple(point)
        coeffs = tuple(pairing(p, nrm) for _, _, nrm in self.pairs)
        core = p
        for c, (_, ray, _) in zip(coeffs, self.pairs):
            core = vsub(core, vscale(c, ray))
        return core, coeffs

    def member(self, point: Sequence[int]) -> bool:
        """Membership in the original monoid, answered through the splitting.

        ``point`` is in the analyzed monoid's normalized coordinates.  Must
        agree with direct membership; the test suite holds it to that.
        """
        core, coeffs = self.decompose(point)
        if any(c < 0 for c in coeffs):
            return False
        q = self.core_monoid.to_normalized(core)
        return q is not None and self.core_monoid.contains(q)


@dataclass(frozen=True)
class Certification:
    degree_bound: int
    family_window: int
    root_height: int
    is_exact: bool
    tags: tuple


@dataclass(frozen=True)
class InvariantReport:
    monoid: AffineMonoid
    classifications: tuple
    almost_saturated: tuple            # facet indices
    ml_face: Optional[Face]
    affine_rays: tuple                 # primitive ray vectors, sorted
    ml_star_face: object               # Face | NO_SLICE | None when undetermined
    split: Optional[SplitFactor]
    is_rigid_core: Optional[bool]
    is_affine_space: Optional[bool]
    ml_equals_ml_star: Optional[bool]
    variety_is_rigid: Optional[bool]
    certification: Certification
    status: str                        # "complete" | "partial"
    notes: tuple

    @property
    def split_k(self) -> Optional[int]:
        return self.split.k if self.split is not None else None

    @property
    def core_monoid(self) -> Optional[AffineMonoid]:
        return self.split.core_monoid if self.split is not None else None


def almost_saturated_facets(classifications: Sequence) -> tuple:
    return tuple(
        c.facet_index for c in classifications
        if c.saturation.label in (FACET_SATURATED, FACET_ALMOST))


def ml_face(monoid: AffineMonoid, classifications: Sequence) -> Optional[Face]:
    """Intersection of all almost-saturated facets, as a face of the cone.

    An empty intersection family leaves the improper face: every homogeneous
    locally nilpotent derivation is zero and the whole coordinate ring is its
    own Makar-Limanov algebra.  Returns None while any facet is unresolved,
    since an unresolved facet could still shrink the intersection.
    """
    if any(c.saturation.label == FACET_UNKNOWN for c in classifications):
        return None
    indices = frozenset(range(len(monoid.cone.extremal_rays)))
    for c in classifications:
        if c.saturation.label in (FACET_SATURATED, FACET_ALMOST):
            indices &= monoid.facets[c.facet_index].ray_indices
    return Face(monoid.cone, indices)


def affine_ray_pairs(classifications: Sequence) -> Optional[tuple]:
    """(facet index, ray vector) for each facet whose ray passed both tests.

    None when some facet with a distinguished ray has an unresolved
    saturation status: that ray's affinity is then out of reach and every
    ray-derived verdict must stay open.
    """
    pairs = []
    for c in classifications:
        if c.is_affine is None:
            return None
        if c.is_affine and c.affine_ray:
            pairs.append((c.facet_index, c.distinguished_ray))
    return tuple(pairs)


def ml_star_face(monoid: AffineMonoid, classifications: Sequence):
    """Face spanned by the non-affine extremal rays, or the no-slice marker.

    Raises LatticeError if the non-affine rays fail to span a face of the
    expected dimension; that would contradict the splitting theory and can
    only mean a bug upstream.
    """
    pairs = affine_ray_pairs(classifications)
    if pairs is None:
        return None
    if not pairs:
        return NO_SLICE
    affine_vectors = {ray for _, ray in pairs}
    non_affine = frozenset(
        i for i, r in enumerate(monoid.cone.extremal_rays)
        if r not in affine_vectors)
    face = face_from_ray_indices(monoid.cone, non_affine)
    if face.ray_indices != non_affine:
        raise LatticeError(
            "non-affine rays do not form a face: smallest containing face "
            f"adds rays {sorted(face.ray_indices - non_affine)}")
    if face.dim != monoid.rank - len(pairs):
        raise LatticeError(
            f"slice-kernel face has dimension {face.dim}, "
            f"expected {monoid.rank - len(pairs)}")
    return face


def split_affine_factor(monoid: AffineMonoid,
                        classifications: Sequence) -> Optional[SplitFactor]:
    """Project out the affine rays and re-embed what remains.

    Every generator g must decompose as g' + sum of c_i * r_i with c_i >= 0
    and g' back in the monoid; a failure raises LatticeError because it
    would falsify the splitting on this instance.  None while the affine-ray
    classification is unresolved.
    """
    pairs = affine_ray_pairs(classifications)
    if pairs is None:
        return None
    rays = [ray for _, ray in pairs]
    if rank_of(rays) != len(rays):
        raise LatticeError(
            f"affine ray vectors {rays} are linearly dependent")
    triples = []
    for a, (facet_index, ray) in enumerate(pairs):
        nrm = monoid.cone.facet_normals[facet_index]
        for b, (other_index, other_ray) in enumerate(pairs):
            want = 1 if a == b else 0
            got = pairing(other_ray, nrm)
            if got != want:
                raise LatticeError(
                    f"affine ray {other_ray} pairs to {got} with the normal "
                    f"of facet {facet_index}, expected {want}")
        triples.append((facet_index, ray, nrm))
    core_gens = []
    for g in monoid.generators:
        core = g
        for _, ray, nrm in triples:
            core = vsub(core, vscale(pairing(g, nrm), ray))
        if not monoid.contains(core):
            raise LatticeError(
                f"splitting factorization failed: generator {g} has core "
                f"part {core} outside the monoid")
        core_gens.append(core)
    distinct = tuple(dict.fromkeys(core_gens))
    if not distinct:
        distinct = ((0,) * monoid.rank,)
    core_name = f"{monoid.name}-core" if monoid.name else None
    core_monoid = AffineMonoid(distinct, name=core_name)
    if core_monoid.rank != monoid.rank - len(pairs):
        raise LatticeError(
            f"core monoid has rank {core_monoid.rank}, "
            f"expected {monoid.rank - len(pairs)}")
    return SplitFactor(len(pairs), tuple(triples), distinct, core_monoid)


def _gather_certificates(classifications: Sequence) -> tuple:
    tags = set()
    for c in classifications:
        tags.add(c.saturation.certificate)
        if c.slice_derivation is not None:
            tags.add(c.slice_derivation.certificate)
    return tuple(sorted(tags))


def analyze(monoid: AffineMonoid,
            bound: Optional[int] = None,
            window: int = DEFAULT_FAMILY_WINDOW,
            height: int = DEFAULT_ROOT_HEIGHT) -> InvariantReport:
    """Full classification of one monoid, honest about what stayed open."""
    classifications = classify_all_facets(monoid, bound, window)
    almost = almost_saturated_facets(classifications)
    ml = ml_face(monoid, classifications)
    star = ml_star_face(monoid, classifications)
    split = split_affine_factor(monoid, classifications)

    notes = []
    for c in classifications:
        notes.extend(c.notes)

    affine_rays: tuple = ()
    if split is not None:
        affine_rays = tuple(sorted(ray for _, ray, _ in split.pairs))

    if ml is not None and isinstance(star, Face):
        if not ml.ray_indices <= star.ray_indices:
            raise LatticeError(
                "face containment violated: the almost-saturated intersection "
                f"spans rays {sorted(ml.ray_indices)} but the slice-kernel "
                f"face only spans {sorted(star.ray_indices)}")

    slice_exists = any(c.slice_derivation is not None for c in classifications)
    ml_equals_star = True if slice_exists else None

    if ml is None or star is None:
        rigid_core = None
    else:
        star_indices = (frozenset(range(len(monoid.cone.extremal_rays)))
                        if star is NO_SLICE else star.ray_indices)
        rigid_core = ml.ray_indices == star_indices

    if star is None:
        affine_space = None
    elif isinstance(star, Face):
        affine_space = star.is_apex
    else:
        # no slice at all; only the trivial variety is still an affine space
        affine_space = monoid.rank == 0

    if any(c.saturation.label == FACET_UNKNOWN for c in classifications):
        variety_rigid = False if almost else None
    else:
        variety_rigid = not almost
    if variety_rigid:
        notes.append("no facet is almost-saturated: the coordinate ring "
                     "admits no nonzero homogeneous locally nilpotent "
                     "derivation, so the variety is rigid")

    tags = _gather_certificates(classifications)
    certification = Certification(
        degree_bound=bound if bound is not None else monoid.default_degree_bound,
        family_window=window,
        root_height=height,
        is_exact=all(t == EXACT for t in tags),
        tags=tags)

    status = "complete" if (ml is not None and star is not None) else "partial"
    if status == "partial":
        notes.append("some facet verdicts stayed inconclusive within the "
                     "given bounds; rerun with a larger degree bound")

    return InvariantReport(
        monoid=monoid,
        classifications=classifications,
        almost_saturated=almost,
        ml_face=ml,
        affine_rays=affine_rays,
        ml_star_face=star,
        split=split,
        is_rigid_core=rigid_core,
        is_affine_space=affine_space,
        ml_equals_ml_star=ml_equals_star,
        variety_is_rigid=variety_rigid,
        certification=certification,
        status=status,
        notes=tuple(notes))

"""Cross-validation suite run by the `check` subcommand.

Every check answers one question twice, through routes that share as little
code as possible, and fails loudly when the answers disagree.  A failure here
is a bug in the library, never in the input: inputs that cannot be checked
(no descended root to exercise, no splitting to reconstruct) produce skips.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .demazure import DEFAULT_ROOT_HEIGHT, descended_roots
from .derivations import (
    AMBIENT,
    NORMALIZATION,
    AlgebraElement,
    apply,
    exponential,
    nilpotency_index,
    vanishes_on_face,
)
from .invariants import NO_SLICE, InvariantReport, analyze
from .lattice import pairing, vadd, vscale
from .monoid import (
    DEFAULT_FAMILY_WINDOW,
    FACET_ALMOST,
    FACET_NOWHERE,
    FACET_SATURATED,
    SAT_NO,
    SAT_YES,
    AffineMonoid,
)

PASS = "pass"
FAIL = "fail"
SKIP = "skip"

# brute-force enumeration gets expensive fast; checks cap their own bounds
BRUTE_BOUND = 12
VANISH_BOUND = 10


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str


def brute_force_members(monoid: AffineMonoid, bound: int) -> set:
    """All bounded-degree generator combinations, by plain enumeration.

    Deliberately ignorant of the membership solver: no cone pruning, no
    memoization, just nested multiplicity loops.
    """
    gens = monoid.generators
    out: set = set()

    def rec(i: int, cur: tuple, deg: int) -> None:
        if i == len(gens):
            out.add(cur)
            return
        g = gens[i]
        dg = monoid.degree(g)
        p, d = cur, deg
        while d <= bound:
            rec(i + 1, p, d)
            p = vadd(p, g)
            d += dg
    rec(0, (0,) * monoid.rank, 0)
    return out


def _sample_members(monoid: AffineMonoid, bound: int, rng: random.Random,
                    count: int) -> list:
    pool = [p for p in monoid._lattice_points_up_to(bound) if monoid.contains(p)]
    if len(pool) <= count:
        return pool
    return sorted(rng.sample(pool, count))


def _root_derivations(monoid: AffineMonoid, height: int,
                      bound: Optional[int]) -> list:
    """(root, derivation) for every descended root, in ray order."""
    per_ray = descended_roots(monoid, height, bound)
    out = []
    for i in sorted(per_ray):
        for root in per_ray[i]:
            out.append((root, root.derivation(monoid)))
    return out


def check_membership_routes(monoid: AffineMonoid, bound: int) -> CheckResult:
    b = min(bound, BRUTE_BOUND)
    brute = brute_force_members(monoid, b)
    for p in monoid._lattice_points_up_to(b):
        if monoid.contains(p) != (p in brute):
            return CheckResult(
                "membership-two-routes", FAIL,
                f"solver and enumeration disagree at {p}")
    return CheckResult(
        "membership-two-routes", PASS,
        f"agreed on every lattice point of degree <= {b}")


def check_hole_partition(monoid: AffineMonoid, bound: int) -> CheckResult:
    b = min(bound, BRUTE_BOUND)
    holes = set(monoid.holes_up_to(b).holes)
    for p in monoid._lattice_points_up_to(b):
        member = monoid.contains(p)
        if member == (p in holes):
            return CheckResult(
                "hole-member-partition", FAIL,
                f"{p} is {'both' if member else 'neither'} member and hole")
    return CheckResult(
        "hole-member-partition", PASS,
        f"members and holes partition the cone points of degree <= {b}")


def check_facet_witnesses(monoid: AffineMonoid, report: InvariantReport,
                          bound: int, window: int) -> CheckResult:
    for c in report.classifications:
        s = c.saturation
        if s.label in (FACET_SATURATED, FACET_ALMOST):
            verdict = monoid.is_saturation_point(s.witness, bound, window)
            if verdict.status != SAT_YES:
                return CheckResult(
                    "facet-witnesses", FAIL,
                    f"facet {s.facet_index} witness {s.witness} failed "
                    f"re-verification: {verdict.status}")
            nrm = monoid.cone.facet_normals[s.facet_index]
            if pairing(s.witness, nrm) != 0:
                return CheckResult(
                    "facet-witnesses", FAIL,
                    f"facet {s.facet_index} witness {s.witness} is not on "
                    "the facet")
            if s.label == FACET_SATURATED and s.holes_on_facet:
                return CheckResult(
                    "facet-witnesses", FAIL,
                    f"facet {s.facet_index} is labeled saturated but carries "
                    f"holes {s.holes_on_facet}")
        elif s.label == FACET_NOWHERE:
            probes = monoid._facet_points_up_to(
                s.facet_index, min(bound, BRUTE_BOUND))
            for p in probes:
                if not monoid.contains(p):
                    continue
                verdict = monoid.is_saturation_point(p, bound, window)
                if verdict.status == SAT_YES:
                    return CheckResult(
                        "facet-witnesses", FAIL,
                        f"facet {s.facet_index} is labeled nowhere-saturated "
                        f"but {p} is a saturation point")
    return CheckResult("facet-witnesses", PASS,
                       "every facet verdict re-verified")


def check_descent_routes(monoid: AffineMonoid, height: int, bound: int,
                         sample_bound: int) -> CheckResult:
    from .demazure import all_demazure_roots, descends
    checked = 0
    members = [p for p in monoid._lattice_points_up_to(min(sample_bound, BRUTE_BOUND))
               if monoid.contains(p)]
    for i, roots in sorted(all_demazure_roots(monoid, height).items()):
        for root in roots:
            verdict = descends(monoid, root, bound)
            checked += 1
            if verdict.status == "yes":
                for p in members:
                    q = vadd(p, root.shift)
                    if monoid.is_hole(q):
                        return CheckResult(
                            "descent-two-routes", FAIL,
                            f"root {root.shift} at ray {i} was accepted but "
                            f"maps {p} to hole {q}")
            else:
                w = verdict.witness
                if w is None or not monoid.contains(w) \
                        or not monoid.is_hole(vadd(w, root.shift)):
                    return CheckResult(
                        "descent-two-routes", FAIL,
                        f"root {root.shift} at ray {i} was rejected but its "
                        f"witness {w} does not certify the rejection")
    return CheckResult("descent-two-routes", PASS,
                       f"{checked} root verdicts re-verified")


def check_leibniz(monoid: AffineMonoid, derivations: list, bound: int,
                  rng: random.Random, samples: int) -> CheckResult:
    from .derivations import HomogeneousDerivation
    if derivations:
        delta = derivations[0][1]
    else:
        # no descended root: the degree-counting derivation still obeys the rule
        delta = HomogeneousDerivation(monoid.grading, (0,) * monoid.rank)
    members = _sample_members(monoid, min(bound, BRUTE_BOUND), rng, samples)
    if not members:
        return CheckResult("leibniz-rule", SKIP, "no members to sample")
    pairs = 0
    for _ in range(samples):
        a = rng.choice(members)
        b = rng.choice(members)
        f = AlgebraElement.monomial(monoid, a, rng.randint(1, 5), AMBIENT)
        g = AlgebraElement.monomial(monoid, b, rng.randint(1, 5), AMBIENT)
        lhs = apply(delta, f * g)
        rhs = apply(delta, f) * g + f * apply(delta, g)
        if lhs != rhs:
            return CheckResult(
                "leibniz-rule", FAIL,
                f"product rule fails on exponents {a}, {b}")
        pairs += 1
    return CheckResult("leibniz-rule", PASS,
                       f"product rule held on {pairs} random pairs")


def check_nilpotency_index(monoid: AffineMonoid, derivations: list,
                           bound: int, rng: random.Random,
                           samples: int) -> CheckResult:
    if not derivations:
        return CheckResult("nilpotency-index", SKIP, "no descended root")
    members = _sample_members(monoid, min(bound, BRUTE_BOUND), rng, samples)
    if not members:
        return CheckResult("nilpotency-index", SKIP, "no members to sample")
    tried = 0
    for root, delta in derivations:
        nrm = monoid.cone.facet_normals[root.ray_index]
        for m in members:
            want = pairing(m, nrm) + 1
            f = AlgebraElement.monomial(monoid, m, mode=NORMALIZATION)
            got = nilpotency_index(delta, f, max_iter=want + 4)
            if got != want:
                return CheckResult(
                    "nilpotency-index", FAIL,
                    f"root {root.shift}: index on {m} is {got}, "
                    f"pairing predicts {want}")
            tried += 1
    return CheckResult("nilpotency-index", PASS,
                       f"pairing formula confirmed on {tried} monomials")


def check_exponential_laws(monoid: AffineMonoid, derivations: list,
                           bound: int, rng: random.Random) -> CheckResult:
    if not derivations:
        return CheckResult("exponential-laws", SKIP, "no descended root")
    members = _sample_members(monoid, min(bound, BRUTE_BOUND), rng, 6)
    if not members:
        return CheckResult("exponential-laws", SKIP, "no members to sample")
    _, delta = derivations[0]
    s, t = Fraction(1), Fraction(1, 2)
    for m in members:
        f = AlgebraElement.monomial(monoid, m, mode=NORMALIZATION)
        twice = exponential(delta, s, exponential(delta, t, f))
        once = exponential(delta, s + t, f)
        if twice != once:
            return CheckResult(
                "exponential-laws", FAIL,
                f"one-parameter group law fails on {m}")
    for m in members:
        for m2 in members[:2]:
            f = AlgebraElement.monomial(monoid, m, mode=NORMALIZATION)
            g = AlgebraElement.monomial(monoid, m2, mode=NORMALIZATION)
            if exponential(delta, s, f * g) != \
                    exponential(delta, s, f) * exponential(delta, s, g):
                return CheckResult(
                    "exponential-laws", FAIL,
                    f"automorphism property fails on {m}, {m2}")
    return CheckResult("exponential-laws", PASS,
                       "group law and multiplicativity held on samples")


def check_face_containment(report: InvariantReport) -> CheckResult:
    ml, star = report.ml_face, report.ml_star_face
    if ml is None or star is None:
        return CheckResult("face-containment", SKIP, "faces undetermined")
    if star is NO_SLICE:
        return CheckResult("face-containment", PASS,
                           "no slice: the larger algebra is everything")
    if not ml.ray_indices <= star.ray_indices:
        return CheckResult(
            "face-containment", FAIL,
            f"rays {sorted(ml.ray_indices)} not within "
            f"{sorted(star.ray_indices)}")
    return CheckResult("face-containment", PASS,
                       "kernel-intersection face contains the slice face")


def check_vanishing_on_ml(monoid: AffineMonoid, report: InvariantReport,
                          derivations: list) -> CheckResult:
    if report.ml_face is None:
        return CheckResult("vanishing-on-ml-face", SKIP, "face undetermined")
    candidates = [d for _, d in derivations]
    for c in report.classifications:
        if c.slice_derivation is not None:
            candidates.append(c.slice_derivation.derivation)
    if not candidates:
        return CheckResult("vanishing-on-ml-face", SKIP,
                           "no derivation to test")
    for d in candidates:
        if not vanishes_on_face(d, monoid, report.ml_face, VANISH_BOUND):
            return CheckResult(
                "vanishing-on-ml-face", FAIL,
                f"derivation with shift {d.shift} moves a monomial of the "
                "kernel-intersection face")
    return CheckResult(
        "vanishing-on-ml-face", PASS,
        f"{len(candidates)} derivations vanish on the face, "
        f"degree <= {VANISH_BOUND}")


def check_splitting(monoid: AffineMonoid, report: InvariantReport,
                    bound: int) -> CheckResult:
    if report.split is None:
        return CheckResult("splitting-reconstruction", SKIP,
                           "splitting undetermined")
    split = report.split
    if split.k != len(report.affine_rays):
        return CheckResult(
            "splitting-reconstruction", FAIL,
            f"k = {split.k} but {len(report.affine_rays)} affine rays")
    b = min(bound, BRUTE_BOUND)
    for p in monoid._lattice_points_up_to(b):
        if split.member(p) != monoid.contains(p):
            return CheckResult(
                "splitting-reconstruction", FAIL,
                f"splitting route disagrees with membership at {p}")
    return CheckResult(
        "splitting-reconstruction", PASS,
        f"split membership matches direct membership to degree {b}")


def run_all(monoid: AffineMonoid,
            bound: Optional[int] = None,
            window: int = DEFAULT_FAMILY_WINDOW,
            height: int = DEFAULT_ROOT_HEIGHT,
            samples: int = 25,
            seed: int = 0) -> tuple:
    """The whole suite, deterministically seeded.  Returns CheckResults."""
    if bound is None:
        bound = monoid.default_degree_bound
    rng = random.Random(seed)
    report = analyze(monoid, bound, window, height)
    derivations = _root_derivations(monoid, height, bound)
    return (
        check_membership_routes(monoid, bound),
        check_hole_partition(monoid, bound),
        check_facet_witnesses(monoid, report, bound, window),
        check_descent_routes(monoid, height, bound, bound),
        check_leibniz(monoid, derivations, bound, rng, samples),
        check_nilpotency_index(monoid, derivations, bound, rng, 5),
        check_exponential_laws(monoid, derivations, bound, rng),
        check_face_containment(report),
        check_vanishing_on_ml(monoid, report, derivations),
        check_splitting(monoid, report, bound),
    )

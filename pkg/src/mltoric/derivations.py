"""Symbolic calculus on the monoid algebra and its normalization.

Elements are finite rational combinations of monomials indexed by lattice
points; a homogeneous derivation sends the monomial at m to a scaled
monomial at m + shift, with coefficient proportional to a fixed linear form
evaluated at m.  Everything here is exact: rational coefficients, explicit
nilpotency witnesses, and closure errors instead of silent coercion when an
image monomial escapes the allowed support.

This module is deliberately independent of the root-classification code so
it can serve as a second opinion on every derivation-theoretic claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .cones import Face
from .lattice import as_vector, pairing, vadd, vneg
from .monoid import AffineMonoid, MonoidError

STRICT = "strict"
NORMALIZATION = "normalization"
AMBIENT = "ambient"   # whole group algebra; no support restriction


class ClosureError(MonoidError):
    """An operation produced a monomial outside the element's allowed support."""


def _mode_test(monoid: AffineMonoid, mode: str) -> Callable[[tuple], bool]:
    if mode == STRICT:
        return monoid.contains
    if mode == NORMALIZATION:
        return monoid.in_saturation
    if mode == AMBIENT:
        return lambda _m: True
    raise MonoidError(f"unknown membership mode: {mode!r}")


class AlgebraElement:
    """Finite rational combination of monomials with mode-checked support."""

    __slots__ = ("monoid", "mode", "coeffs")

    def __init__(self, monoid: AffineMonoid, mode: str,
                 coeffs: dict, _checked: bool = False):
        self.monoid = monoid
        self.mode = mode
        clean = {}
        test = None if _checked else _mode_test(monoid, mode)
        for m, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            m = as_vector(m)
            if test is not None and not test(m):
                raise ClosureError(
                    f"monomial at {m} is outside the {mode} support")
            clean[m] = c
        self.coeffs = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def monomial(monoid: AffineMonoid, point: Sequence[int],
                 coeff=1, mode: str = STRICT) -> "AlgebraElement":
        return AlgebraElement(monoid, mode, {as_vector(point): Fraction(coeff)})

    @staticmethod
    def one(monoid: AffineMonoid, mode: str = STRICT) -> "AlgebraElement":
        return AlgebraElement.monomial(monoid, (0,) * monoid.rank, 1, mode)

    @staticmethod
    def zero(monoid: AffineMonoid, mode: str = STRICT) -> "AlgebraElement":
        return AlgebraElement(monoid, mode, {}, _checked=True)

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, point: Sequence[int]) -> Fraction:
        return self.coeffs.get(as_vector(point), Fraction(0))

    def support(self) -> tuple:
        return tuple(sorted(self.coeffs))

    def degree(self) -> int:
        """Largest grading degree in the support (zero element: 0)."""
        if not self.coeffs:
            return 0
        return max(pairing(m, self.monoid.grading) for m in self.coeffs)

    def _compatible(self, other: "AlgebraElement") -> None:
        if self.monoid is not other.monoid or self.mode != other.mode:
            raise MonoidError("elements live in different algebras")

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._compatible(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return AlgebraElement(self.monoid, self.mode, out, _checked=True)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scaled(-1)

    def scaled(self, factor) -> "AlgebraElement":
        factor = Fraction(factor)
        return AlgebraElement(
            self.monoid, self.mode,
            {m: c * factor for m, c in self.coeffs.items()}, _checked=True)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._compatible(other)
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = vadd(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        # sums of allowed points stay allowed in both modes
        return AlgebraElement(self.monoid, self.mode, out, _checked=True)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraElement)
                and self.monoid is other.monoid
                and self.mode == other.mode
                and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = [f"{c}*x^{m}" for m, c in sorted(self.coeffs.items())]
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# derivation-like operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomogeneousDerivation:
    """Monomial map: x^m -> scale * <dual_vector, m> * x^(m + shift)."""

    dual_vector: tuple
    shift: tuple
    scale: Fraction = Fraction(1)

    def apply_to(self, f: AlgebraElement) -> AlgebraElement:
        out: dict = {}
        for m, c in f.coeffs.items():
            weight = self.scale * pairing(m, self.dual_vector)
            if weight == 0:
                continue
            image = vadd(m, self.shift)
            out[image] = out.get(image, Fraction(0)) + c * weight
        out = {m: c for m, c in out.items() if c != 0}
        test = _mode_test(f.monoid, f.mode)
        for m in out:
            if not test(m):
                raise ClosureError(
                    f"derivation image leaves the {f.mode} algebra "
                    f"at monomial {m}")
        return AlgebraElement(f.monoid, f.mode, out, _checked=True)

    def height(self, monoid: AffineMonoid) -> int:
        vals = [abs(pairing(self.shift, n))
                for n in monoid.cone.facet_normals]
        return max([1] + vals)


@dataclass(frozen=True)
class DerivationSum:
    parts: tuple

    def apply_to(self, f: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement.zero(f.monoid, f.mode)
        for p in self.parts:
            out = out + p.apply_to(f)
        return out

    def height(self, monoid: AffineMonoid) -> int:
        return max([1] + [p.height(monoid) for p in self.parts])


@dataclass(frozen=True)
class Replica:
    """Kernel element times a derivation: g -> factor * inner(g)."""

    factor: AlgebraElement
    inner: "Derivation"

    def apply_to(self, f: AlgebraElement) -> AlgebraElement:
        return self.factor * self.inner.apply_to(f)

    def height(self, monoid: AffineMonoid) -> int:
        extra = [abs(pairing(m, n))
                 for m in self.factor.coeffs
                 for n in monoid.cone.facet_normals]
        return self.inner.height(monoid) + max([0] + extra)


@dataclass(frozen=True)
class Conjugate:
    """exp(t*outer) . inner . exp(-t*outer), an automorphism twist of inner."""

    outer: "Derivation"
    inner: "Derivation"
    t: Fraction = Fraction(1)
    max_iter: Optional[int] = None

    def apply_to(self, f: AlgebraElement) -> AlgebraElement:
        back = exponential(self.outer, -self.t, f, self.max_iter)
        mid = self.inner.apply_to(back)
        return exponential(self.outer, self.t, mid, self.max_iter)

    def height(self, monoid: AffineMonoid) -> int:
        return self.outer.height(monoid) + self.inner.height(monoid)


Derivation = Union[HomogeneousDerivation, DerivationSum, Replica, Conjugate]


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def apply(delta: Derivation, f: AlgebraElement) -> AlgebraElement:
    return delta.apply_to(f)


def default_max_iter(delta: Derivation, f: AlgebraElement) -> int:
    return f.degree() * delta.height(f.monoid) + 4


def nilpotency_index(delta: Derivation, f: AlgebraElement,
                     max_iter: Optional[int] = None) -> Optional[int]:
    """Least k with the k-th application vanishing, or None within the budget."""
    if max_iter is None:
        max_iter = default_max_iter(delta, f)
    if max_iter <= 0:
        raise MonoidError("iteration budget must be positive")
    cur = f
    for k in range(1, max_iter + 1):
        cur = delta.apply_to(cur)
        if cur.is_zero:
            return k
    return None


def non_nilpotency_proof(delta: HomogeneousDerivation,
                         f: AlgebraElement) -> Optional[str]:
    """Exact eigenline argument: a proof that iteration never vanishes.

    Applies to a single homogeneous derivation on a single monomial x^m: the
    k-th application carries the coefficient prod_j (<v,m> + j<v,shift>), so
    it vanishes eventually iff one factor hits zero at a nonnegative integer.
    Returns a human-readable proof when no factor ever vanishes, else None.
    """
    if not isinstance(delta, HomogeneousDerivation) or len(f.coeffs) != 1:
        return None
    if delta.scale == 0:
        return None
    (m,) = f.coeffs
    base = pairing(m, delta.dual_vector)
    step = pairing(delta.shift, delta.dual_vector)
    if base == 0:
        return None  # kernel monomial: vanishes at once
    if step == 0:
        return (f"every application scales by <v,m> = {base} != 0 and shifts "
                f"the exponent by {delta.shift}; no power vanishes")
    if base % step == 0 and -base // step >= 0:
        return None  # a factor does vanish: genuinely nilpotent on this monomial
    return (f"factors <v,m> + k<v,shift> = {base} + k*({step}) never vanish "
            f"for integer k >= 0; no power vanishes")


def exponential(delta: Derivation, t, f: AlgebraElement,
                max_iter: Optional[int] = None) -> AlgebraElement:
    """Finite sum of t^k/k! times iterated applications; refuses without a witness."""
    idx = nilpotency_index(delta, f, max_iter)
    if idx is None:
        raise MonoidError(
            "exponential refused: nilpotency not established within budget")
    t = Fraction(t)
    out = f
    cur = f
    fact = 1
    power = Fraction(1)
    for k in range(1, idx):
        cur = delta.apply_to(cur)
        fact *= k
        power *= t
        out = out + cur.scaled(power / fact)
    return out


def replica(f: AlgebraElement, delta: Derivation) -> Replica:
    if not delta.apply_to(f).is_zero:
        raise MonoidError("replica factor must lie in the kernel")
    return Replica(f, delta)


@dataclass(frozen=True)
class SliceSumReport:
    ok: bool
    slice_image_is_one: bool
    results: tuple      # per sample: (monomial, nilpotency index or None)
    layer_profiles: tuple  # per sample: distinct <., dual_vector'> values visited
    failures: tuple


def sum_with_slice_check(delta: HomogeneousDerivation,
                         delta_prime: Optional[Derivation],
                         slice_point: Sequence[int],
                         samples: Sequence[AlgebraElement],
                         max_iter: Optional[int] = None) -> SliceSumReport:
    """Check that delta + delta_prime stays locally nilpotent with the same slice.

    ``delta`` must send the slice monomial to 1 and ``delta_prime`` must kill
    it; the sum is then tested for nilpotency on each sample, recording the
    layers (values of delta_prime's linear form on visited supports) that the
    inductive argument peels off.
    """
    if not samples:
        raise MonoidError("need at least one sample")
    monoid = samples[0].monoid
    mode = samples[0].mode
    s = AlgebraElement.monomial(monoid, slice_point, 1, mode)
    parts = [delta] if delta_prime is None else [delta, delta_prime]
    total = DerivationSum(tuple(parts))
    image = total.apply_to(s)
    slice_ok = image == AlgebraElement.one(monoid, mode)

    layer_form = None
    if isinstance(delta_prime, HomogeneousDerivation):
        layer_form = delta_prime.dual_vector
    elif isinstance(delta_prime, Replica) and isinstance(
            delta_prime.inner, HomogeneousDerivation):
        layer_form = delta_prime.inner.dual_vector

    results = []
    profiles = []
    failures = []
    for f in samples:
        layers = set()
        cur = f
        budget = max_iter if max_iter is not None else default_max_iter(total, f)
        idx = None
        for k in range(1, budget + 1):
            if layer_form is not None:
                layers.update(pairing(m, layer_form) for m in cur.coeffs)
            cur = total.apply_to(cur)
            if cur.is_zero:
                idx = k
                break
        results.append((f.support(), idx))
        profiles.append(tuple(sorted(layers)))
        if idx is None:
            failures.append((f.support(), "no vanishing within budget"))
    if not slice_ok:
        failures.append((tuple(s.support()), "slice image is not 1"))
    return SliceSumReport(not failures, slice_ok, tuple(results),
                          tuple(profiles), tuple(failures))


def vanishes_on_face(delta: Derivation, monoid: AffineMonoid, face: Face,
                     bound: Optional[int] = None) -> bool:
    """Does the derivation kill every monoid monomial on the face, up to degree?"""
    if bound is None:
        bound = monoid.default_degree_bound
    for p in monoid._lattice_points_up_to(bound):
        if not face.contains_point(p):
            continue
        if not monoid.contains(p):
            continue
        # ambient mode: vanishing is about the coefficient formula, and must
        # not be masked by closure errors for operators that do not descend
        image = delta.apply_to(AlgebraElement.monomial(monoid, p, mode=AMBIENT))
        if not image.is_zero:
            return False
    return True

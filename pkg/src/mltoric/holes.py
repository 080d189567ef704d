"""Exact decomposition of the hole set in lattice rank one and two.

In rank two the holes of a pointed full-dimensional monoid split into
finitely many exceptional points plus finitely many integer progressions
running parallel to the two facets.  The engine below computes that split
exactly: it sweeps the lines parallel to each facet, tracks how generator
combinations cover each line, and certifies its own eventual periodicity
instead of trusting a fixed window.  Certificates are checked, never
assumed; a structure that would contradict the existence of saturation
points raises instead of producing a wrong answer.

Rank one is the numerical-semigroup special case (finitely many gaps).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .lattice import LatticeError, pairing, vadd, vscale, vsub

_SWEEP_CAP = 200_000


def _ceil_div(a: int, b: int) -> int:
    # b > 0
    return -((-a) // b)


# ---------------------------------------------------------------------------
# numerical semigroups (coin-problem sieve)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Semigroup1D:
    """Submonoid of Z>=0 generated by positive integers, with exact membership.

    ``d`` is the gcd of the generators; membership below ``d * conductor`` is
    table-driven, everything at or beyond is in (multiples of d only).
    """

    generators: tuple
    d: int
    conductor: int    # in units of d: every multiple d*s with s >= conductor is in
    _table: tuple     # membership of d*s for s < conductor

    def contains(self, t: int) -> bool:
        if t < 0 or t % self.d != 0:
            return False
        s = t // self.d
        return s >= self.conductor or self._table[s]

    def gaps(self) -> tuple:
        """Multiples of d missing from the semigroup (the classic gaps when d=1)."""
        return tuple(
            self.d * s for s in range(self.conductor) if not self._table[s]
        )

    def elements_up_to(self, bound: int) -> tuple:
        return tuple(t for t in range(0, bound + 1) if self.contains(t))

    @property
    def stabilization(self) -> int:
        """Offset gap beyond which o' + S is contained in o + S for o' = o (mod d)."""
        return self.d * self.conductor


def semigroup_1d(values: Sequence[int]) -> Semigroup1D:
    vals = sorted({int(v) for v in values})
    if not vals or vals[0] <= 0:
        raise LatticeError("numerical semigroup needs positive generators")
    d = 0
    for v in vals:
        d = gcd(d, v)
    scaled = sorted({v // d for v in vals})
    lo = scaled[0]
    limit = max(scaled) * lo + max(scaled) + 1
    while True:
        reach = [False] * (limit + 1)
        reach[0] = True
        for i in range(1, limit + 1):
            reach[i] = any(i >= a and reach[i - a] for a in scaled)
        last_false = -1
        for i, ok in enumerate(reach):
            if not ok:
                last_false = i
        if limit - last_false > max(scaled):
            cond = last_false + 1
            return Semigroup1D(tuple(vals), d, cond, tuple(reach[:cond]))
        if limit > 2 ** 24:  # pragma: no cover - gcd is 1, conductor is finite
            raise LatticeError("runaway numerical semigroup sieve")
        limit *= 2


# ---------------------------------------------------------------------------
# hole structure containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoleRay:
    """An infinite progression of holes base + k*stride*direction, k >= 0.

    ``full_line`` marks progressions where every cone lattice point on the
    base's line (to infinity) is a hole; those have stride 1 and are what the
    hole-family reports list, since their direction is primitive.
    """

    base: tuple
    direction: tuple
    stride: int
    full_line: bool

    def step(self) -> tuple:
        return vscale(self.stride, self.direction)

    def member(self, point: tuple) -> bool:
        diff = vsub(point, self.base)
        step = self.step()
        k = None
        for x, y in zip(diff, step):
            if y == 0:
                if x != 0:
                    return False
            else:
                if x % y != 0:
                    return False
                kk = x // y
                if k is not None and kk != k:
                    return False
                k = kk
        return k is not None and k >= 0

    def members_up_to(self, grading: tuple, bound: int) -> list:
        out = []
        step = self.step()
        step_deg = pairing(step, grading)
        if step_deg <= 0:  # pragma: no cover - grading is interior
            raise LatticeError("hole progression does not increase in degree")
        cur = self.base
        while pairing(cur, grading) <= bound:
            out.append(cur)
            cur = vadd(cur, step)
        return out


@dataclass(frozen=True)
class HoleStructure:
    """The complete hole set: finitely many points plus finitely many rays."""

    sporadic: tuple
    rays: tuple

    @property
    def is_empty(self) -> bool:
        return not self.sporadic and not self.rays

    def contains(self, point: tuple) -> bool:
        return point in self.sporadic or any(r.member(point) for r in self.rays)

    def holes_up_to(self, grading: tuple, bound: int) -> list:
        pts = {p for p in self.sporadic if pairing(p, grading) <= bound}
        for ray in self.rays:
            pts.update(ray.members_up_to(grading, bound))
        return sorted(pts, key=lambda p: (pairing(p, grading), p))


# ---------------------------------------------------------------------------
# the per-direction line engine (rank 2)
# ---------------------------------------------------------------------------

def _complement_vector(normal: tuple) -> tuple:
    """Some u with <u, normal> = 1 (the normal is primitive)."""
    n1, n2 = normal
    g = gcd(abs(n1), abs(n2))
    if g != 1:
        raise LatticeError("facet normal is not primitive")
    # extended euclid on the two entries
    old_r, r = n1, n2
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    # old_s*n1 + old_t*n2 = old_r = ±1
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return (old_s, old_t)


class DirectionEngine:
    """Coverage of a rank-2 monoid along lines parallel to one extremal ray.

    Lines are indexed by c = <x, normal> >= 0; along a line, points are
    x = c*u + t*ray.  The engine computes, per line, the set of t covered by
    the monoid, as finitely many offset+T tails (T = the facet semigroup),
    then proves the per-line states eventually repeat.
    """

    def __init__(self, generators: Sequence[tuple], ray: tuple, normal: tuple,
                 off_normal: tuple):
        self.ray = ray
        self.normal = normal
        self.off_normal = off_normal
        self.alpha = pairing(ray, off_normal)       # > 0 by pointedness
        if self.alpha <= 0:
            raise LatticeError("ray/normal orientation broken")
        self.u = _complement_vector(normal)
        self.beta = pairing(self.u, off_normal)

        facet_ts = []
        lifts = []   # (a, t) for generators off this facet
        for g in generators:
            a = pairing(g, normal)
            if a < 0:
                raise LatticeError("generator outside its own cone")
            t = self._t_of(g, a)
            if a == 0:
                facet_ts.append(t)
            else:
                lifts.append((a, t))
        if not facet_ts:
            raise LatticeError("extremal ray carries no generator")
        if min(facet_ts) <= 0:
            raise LatticeError("facet generator with nonpositive position")
        self.T = semigroup_1d(facet_ts)
        self.d = self.T.d
        self.stab = self.T.stabilization
        if not lifts:
            raise LatticeError("cone is not full-dimensional")
        self.lifts = tuple(sorted(lifts))
        self.A = semigroup_1d([a for a, _ in lifts])
        if self.A.d != 1:
            # impossible once the generators generate the full lattice
            raise LatticeError("line levels not coprime; lattice not normalized")
        self.window = max(a for a, _ in lifts)

        self._states: list = []
        self._cycle: Optional[tuple] = None   # (c0, period, shift, kind)
        self._sweep()

    # -- coordinates ---------------------------------------------------

    def _t_of(self, x: tuple, c: Optional[int] = None) -> int:
        if c is None:
            c = pairing(x, self.normal)
        rem = vsub(x, vscale(c, self.u))
        for i, ri in enumerate(self.ray):
            if ri != 0:
                t, m = divmod(rem[i], ri)
                if m != 0:  # pragma: no cover - u, ray span the lattice
                    raise LatticeError("point does not split along the line")
                check = vscale(t, self.ray)
                if check != rem:  # pragma: no cover
                    raise LatticeError("line split inconsistent")
                return t
        raise LatticeError("zero ray")  # pragma: no cover

    def point(self, c: int, t: int) -> tuple:
        return vadd(vscale(c, self.u), vscale(t, self.ray))

    def line_of(self, x: tuple) -> int:
        return pairing(x, self.normal)

    def t_min(self, c: int) -> int:
        # least t with the point on line c inside the cone
        return _ceil_div(-c * self.beta, self.alpha)

    # -- state sweep and periodicity certificate ------------------------

    def _truncate(self, offsets) -> frozenset:
        if not offsets:
            return frozenset()
        keep = set()
        mins: dict = {}
        for o in offsets:
            r = o % self.d
            if r not in mins or o < mins[r]:
                mins[r] = o
        span = max(self.stab, 1)
        for o in offsets:
            if o - mins[o % self.d] < span:
                keep.add(o)
        return frozenset(keep)

    def _next_state(self, c: int) -> frozenset:
        acc = set()
        for a, t in self.lifts:
            if a > c:
                continue
            prev = self._states[c - a]
            for o in prev:
                acc.add(o + t)
        return self._truncate(acc)

    def _line_fully_covered(self, c: int) -> bool:
        state = self._states[c]
        if not state:
            return False
        residues = {o % self.d for o in state}
        if len(residues) < self.d:
            return False
        top = max(state) + self.stab
        t = self.t_min(c)
        while t <= top:
            if not self._covered_by(state, t):
                return False
            t += 1
        return True

    @staticmethod
    def _normalize(state: frozenset):
        if not state:
            return ()
        m = min(state)
        return tuple(sorted(o - m for o in state))

    def _sweep(self) -> None:
        self._states.append(frozenset([0]))
        seen: dict = {}
        scan_from = self.A.conductor + 1  # beyond the last empty line
        c = 0
        while c < _SWEEP_CAP:
            c += 1
            self._states.append(self._next_state(c))
            top = c
            base = top - self.window + 1
            if base < scan_from:
                continue
            sig_states = tuple(self._normalize(self._states[base + j])
                               for j in range(self.window))
            mins = [min(self._states[base + j]) for j in range(self.window)
                    if self._states[base + j]]
            anchor = mins[0] if mins else 0
            key = (base % self.alpha,
                   sig_states,
                   tuple(m - anchor for m in mins))
            if key in seen:
                prev_base, prev_anchor = seen[key]
                period = base - prev_base
                shift = anchor - prev_anchor
                if self._certify(prev_base, period, shift):
                    return
            seen[key] = (base, anchor)
        raise LatticeError("line coverage did not stabilize "  # pragma: no cover
                           f"within {_SWEEP_CAP} lines")

    def _certify(self, c0: int, period: int, shift: int) -> bool:
        if period % self.alpha != 0:
            return False
        # all window states must repeat with one uniform shift
        for j in range(self.window):
            lo = self._states[c0 + j]
            hi = self._states[c0 + period + j]
            if frozenset(o + shift for o in lo) != hi:
                return False
        sigma = -(period * self.beta) // self.alpha  # drift of the cone boundary
        if shift == sigma:
            kind = "locked"
        elif shift < sigma:
            # coverage sinks below the boundary: demand hole-free window lines
            for j in range(self.window):
                if not self._line_fully_covered(c0 + j):
                    return False
            kind = "absorbed"
        else:
            # coverage receding from the boundary would pile up holes with
            # both facet levels unbounded, contradicting saturation points
            return False
        # extend the stored prefix so every line below c0 + period is direct
        while len(self._states) < c0 + period + self.window + 1:
            self._states.append(self._next_state(len(self._states)))
        self._cycle = (c0, period, shift, kind)
        if kind == "locked":
            for c in range(c0, c0 + period):
                if not self._states[c]:
                    raise LatticeError(
                        "empty line inside the periodic regime; saturation "
                        "points could not exist")  # pragma: no cover
                if self.uncovered_classes(c):
                    raise LatticeError(
                        "uncovered residue class inside the periodic regime; "
                        "saturation points could not exist")  # pragma: no cover
        return True

    @property
    def cycle_start(self) -> int:
        return self._cycle[0]

    @property
    def cycle_period(self) -> int:
        return self._cycle[1]

    @property
    def holes_stop(self) -> bool:
        """True when lines in the periodic regime are entirely covered."""
        return self._cycle[3] == "absorbed"

    def state(self, c: int) -> frozenset:
        if c < 0:
            raise LatticeError("negative line index")
        if c < len(self._states):
            return self._states[c]
        c0, period, shift, _ = self._cycle
        k = (c - c0) // period
        base = c - k * period
        if base >= len(self._states):  # pragma: no cover
            raise LatticeError("periodic lookup out of range")
        return frozenset(o + k * shift for o in self._states[base])

    # -- per-line queries ------------------------------------------------

    def _covered_by(self, state: frozenset, t: int) -> bool:
        return any(self.T.contains(t - o) for o in state)

    def covered(self, c: int, t: int) -> bool:
        """Is the point at position t on line c in the monoid?"""
        return self._covered_by(self.state(c), t)

    def line_is_empty(self, c: int) -> bool:
        """No monoid point at all on line c (every cone point there is a hole)."""
        return not self.state(c)

    def uncovered_classes(self, c: int) -> tuple:
        state = self.state(c)
        if not state:
            return ()
        present = {o % self.d for o in state}
        return tuple(r for r in range(self.d) if r not in present)

    def class_has_coverage(self, c: int, t: int) -> bool:
        """Does t's residue class on line c contain any covered position?"""
        state = self.state(c)
        return any((t - o) % self.d == 0 for o in state)

    def line_holes(self, c: int) -> list:
        """The finitely many holes on line c outside uncovered residue classes."""
        state = self.state(c)
        if not state:
            return []
        uncovered = set(self.uncovered_classes(c))
        out = []
        top = max(state) + self.stab
        t = self.t_min(c)
        while t <= top:
            if t % self.d not in uncovered and not self._covered_by(state, t):
                out.append(t)
            t += 1
        return out

    def first_covered(self, c: int) -> Optional[int]:
        """Least position >= t_min(c) on line c that lies in the monoid."""
        state = self.state(c)
        if not state:
            return None
        t = max(self.t_min(c), min(state))
        top = max(state) + self.stab + self.d + 1
        while t <= top:
            if self._covered_by(state, t):
                return t
            t += 1
        return None  # pragma: no cover - nonempty state always has a tail

    def max_level_of_line_holes(self, c: int) -> int:
        """Largest pairing with the other facet normal among line-c holes, -1 if none."""
        best = -1
        for t in self.line_holes(c):
            best = max(best, c * self.beta + t * self.alpha)
        return best


# ---------------------------------------------------------------------------
# global decompositions
# ---------------------------------------------------------------------------

def rank1_structure(generators: Sequence[tuple]) -> HoleStructure:
    vals = [g[0] for g in generators]
    if any(v <= 0 for v in vals):
        raise LatticeError("rank-1 monoid generators must be positive")
    sg = semigroup_1d(vals)
    if sg.d != 1:
        raise LatticeError("rank-1 monoid does not generate the lattice")
    holes = tuple((t,) for t in range(1, sg.conductor) if not sg.contains(t))
    return HoleStructure(holes, ())


def rank2_structure(
    generators: Sequence[tuple],
    rays: Sequence[tuple],
    normals_for_rays: Sequence[tuple],
) -> tuple:
    """Exact hole decomposition for a pointed full-dimensional rank-2 monoid.

    ``normals_for_rays[i]`` must vanish on ``rays[i]``.  Returns the structure
    together with the two line engines (indexed like ``rays``) for follow-up
    queries: saturation tests, family persistence, descent checks.
    """
    if len(rays) != 2 or len(normals_for_rays) != 2:
        raise LatticeError("rank-2 decomposition needs exactly two facets")
    engines = []
    for i in (0, 1):
        engines.append(DirectionEngine(
            generators, rays[i], normals_for_rays[i], normals_for_rays[1 - i]))

    rays_out = []
    for i, eng in enumerate(engines):
        for c in eng.A.gaps():
            if not eng.line_is_empty(c):  # pragma: no cover - gap <=> empty
                raise LatticeError("unreachable line level is covered")
            base = eng.point(c, eng.t_min(c))
            rays_out.append(HoleRay(base, eng.ray, 1, True))
        for c in range(eng.cycle_start):
            for res in eng.uncovered_classes(c):
                tm = eng.t_min(c)
                t0 = tm + ((res - tm) % eng.d)
                rays_out.append(HoleRay(eng.point(c, t0), eng.ray, eng.d, False))

    # sporadic strips: each engine enumerates lines up to its own periodic
    # start plus one period, extended to cover the other engine's repeating
    # hole levels so nothing falls between the strips
    levels = []
    for eng in engines:
        if eng.holes_stop:
            levels.append(-1)
        else:
            lam = -1
            for c in range(eng.cycle_start, eng.cycle_start + eng.cycle_period):
                lam = max(lam, eng.max_level_of_line_holes(c))
            levels.append(lam)
    points = set()
    for i, eng in enumerate(engines):
        strip_top = max(eng.cycle_start + eng.cycle_period - 1, levels[1 - i])
        for c in range(strip_top + 1):
            for t in eng.line_holes(c):
                points.add(eng.point(c, t))

    rays_out = tuple(sorted(set(rays_out),
                            key=lambda r: (r.base, r.direction, r.stride)))
    sporadic = tuple(sorted(
        p for p in points if not any(r.member(p) for r in rays_out)))
    return HoleStructure(sporadic, rays_out), tuple(engines)

"""Harmonic measure: closed forms, level sets and a walk-on-spheres oracle.

Closed forms are available for an interval of the real line seen from the
upper half-plane, for a side of a sector and for an arc of the unit circle.
Everything else is estimated by walk-on-spheres.  Unbounded model domains are
never walked directly: the walk runs in the unit disk and exits are pushed
forward through the domain's Riemann map before scoring, which is legitimate
because harmonic measure is conformally invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _rng
from .domains import ModelDomain
from .geometry import DomainError

__all__ = [
    "BoundarySet",
    "WalkRegion",
    "MCEstimate",
    "LevelArc",
    "hm_halfplane_interval",
    "hm_sector_side",
    "hm_disk_arc",
    "exact_measure",
    "level_set_arc",
    "hm_monte_carlo",
    "strong_markov_residual",
    "monotonicity_check",
]

ON_BOUNDARY_TOL = 1e-7


# ---------------------------------------------------------------------------
# boundary sets


@dataclass(frozen=True)
class BoundarySet:
    """A Borel piece ``B`` of a domain boundary, given by its indicator.

    Use the factories ``real_interval``, ``ray``, ``vertical_side``,
    ``disk_arc`` and ``custom``.
    """

    kind: str
    params: tuple = ()
    indicator_fn: Callable | None = None
    name: str = ""

    @classmethod
    def real_interval(cls, a: float, b: float) -> "BoundarySet":
        if not a < b:
            raise ValueError("need a < b")
        return cls("real_interval", (float(a), float(b)))

    @classmethod
    def ray(cls, angle: float, apex: complex = 0j) -> "BoundarySet":
        """The side ``{arg(z - apex) = angle}``."""
        return cls("ray", (float(angle), complex(apex)))

    @classmethod
    def vertical_side(cls, sign: int = 1, shift: complex = 0j) -> "BoundarySet":
        """Upper (``sign=+1``) or lower half of the boundary line of ``H + shift``."""
        return cls.ray(math.copysign(math.pi / 2, sign), shift)

    @classmethod
    def disk_arc(cls, phi1: float, phi2: float) -> "BoundarySet":
        """Counter-clockwise arc of the unit circle from ``e^{i phi1}`` to ``e^{i phi2}``."""
        if math.isclose((phi2 - phi1) % (2 * math.pi), 0.0, abs_tol=1e-14):
            raise ValueError("disk arc endpoints must differ")
        return cls("disk_arc", (float(phi1), float(phi2)))

    @classmethod
    def custom(cls, indicator: Callable, name: str = "custom") -> "BoundarySet":
        return cls("custom", (), indicator, name)

    @property
    def arc_length(self) -> float:
        phi1, phi2 = self.params
        return (phi2 - phi1) % (2 * math.pi)

    def complement_arc(self) -> "BoundarySet":
        phi1, phi2 = self.params
        return BoundarySet.disk_arc(phi2, phi1)

    def indicator(self, z, tol: float = ON_BOUNDARY_TOL):
        z = np.asarray(z, dtype=complex)
        with np.errstate(invalid="ignore"):
            if self.kind == "real_interval":
                a, b = self.params
                out = (np.abs(z.imag) <= tol * np.maximum(1, np.abs(z))) & (z.real >= a) & (z.real <= b)
            elif self.kind == "ray":
                ang, apex = self.params
                v = z - apex
                d = np.angle(v * np.exp(-1j * ang))
                out = (np.abs(d) <= tol) & (np.abs(v) > 0)
            elif self.kind == "disk_arc":
                phi1, _ = self.params
                rel = (np.angle(z) - phi1) % (2 * math.pi)
                out = (np.abs(np.abs(z) - 1) <= tol) & (rel <= self.arc_length)
            else:
                out = np.asarray(self.indicator_fn(z), dtype=bool)
        out = out & np.isfinite(z)
        return bool(out) if out.ndim == 0 else out

    def sample_points(self, n: int = 9):
        """A few interior points of ``B`` (``None`` for custom sets)."""
        s = np.linspace(0.05, 0.95, n)
        if self.kind == "real_interval":
            a, b = self.params
            return a + s * (b - a) + 0j
        if self.kind == "ray":
            ang, apex = self.params
            return apex + np.logspace(-2, 2, n) * np.exp(1j * ang)
        if self.kind == "disk_arc":
            return np.exp(1j * (self.params[0] + s * self.arc_length))
        return None

    def to_dict(self) -> dict:
        if self.kind == "custom":
            raise ValueError("custom boundary sets are not serialisable")
        if self.kind == "ray":
            ang, apex = self.params
            return {"kind": "ray", "angle": ang, "apex": [apex.real, apex.imag]}
        if self.kind == "real_interval":
            return {"kind": "real_interval", "a": self.params[0], "b": self.params[1]}
        return {"kind": "disk_arc", "phi1": self.params[0], "phi2": self.params[1]}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundarySet":
        kind = d["kind"]
        if kind == "real_interval":
            return cls.real_interval(d["a"], d["b"])
        if kind == "ray":
            apex = d.get("apex", 0)
            apex = complex(*apex) if isinstance(apex, (list, tuple)) else complex(apex)
            return cls.ray(d["angle"], apex)
        if kind == "disk_arc":
            return cls.disk_arc(d["phi1"], d["phi2"])
        raise ValueError(f"unknown boundary set kind {kind!r}")


# ---------------------------------------------------------------------------
# closed forms


def hm_halfplane_interval(z, a: float, b: float):
    """``omega(z, [a, b], {Im z > 0}) = arg((z - b)/(z - a)) / pi``."""
    z = np.asarray(z, dtype=complex)
    if not a < b:
        raise ValueError("need a < b")
    if np.any(z.imag <= 0):
        raise DomainError("evaluation point must satisfy Im z > 0")
    out = np.angle((z - b) / (z - a)) / math.pi
    return float(out) if out.ndim == 0 else out


def hm_sector_side(z, a: float, beta: float):
    """``omega(z, {arg z = beta}, {a < arg z < beta}) = (arg z - a)/(beta - a)``."""
    z = np.asarray(z, dtype=complex)
    if not a < beta:
        raise ValueError("need a < beta")
    # measure arguments from the bisector so sectors crossing the negative axis work
    mid = (a + beta) / 2
    rel = np.angle(z * np.exp(-1j * mid)) + mid
    if np.any((z == 0) | (rel <= a) | (rel >= beta)) or beta - a > 2 * math.pi:
        raise DomainError("evaluation point outside the sector")
    out = (rel - a) / (beta - a)
    return float(out) if out.ndim == 0 else out


def _arc_to_interval(phi1: float, phi2: float):
    """Rotation and real interval ``[x1, x2]`` transporting an arc to the line.

    The disk is rotated by ``exp(-i c)`` so the complementary arc is centred
    at ``1`` and then sent to the upper half-plane by ``T(w) = i (1 + w)/(1 - w)``.
    """
    L = (phi2 - phi1) % (2 * math.pi)
    c = phi2 + (2 * math.pi - L) / 2
    x1 = -1 / math.tan((math.pi - L / 2) / 2)
    x2 = -1 / math.tan((math.pi + L / 2) / 2)
    return c, x1, x2


def _to_upper(w, c):
    w = np.asarray(w, dtype=complex) * np.exp(-1j * c)
    return 1j * (1 + w) / (1 - w)


def _from_upper(W, c):
    return (W - 1j) / (W + 1j) * np.exp(1j * c)


def hm_disk_arc(z, arc: BoundarySet):
    """Harmonic measure of a counter-clockwise arc of the unit circle."""
    if arc.kind != "disk_arc":
        raise ValueError("hm_disk_arc needs a disk_arc boundary set")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise DomainError("evaluation point must lie in the unit disk")
    c, x1, x2 = _arc_to_interval(*arc.params)
    W = _to_upper(z, c)
    out = np.angle((W - x2) / (W - x1)) / math.pi
    return float(out) if out.ndim == 0 else out


def exact_measure(domain, target: BoundarySet, z):
    """Closed-form ``omega(z, target, domain)`` or ``None`` when none applies."""
    if not isinstance(domain, ModelDomain):
        return None
    if domain.kind == "disk" and target.kind == "disk_arc":
        return hm_disk_arc(z, target)
    angles = domain.sector_angles
    if angles is None:
        return None
    a1, a2 = angles
    s = domain.shift
    if target.kind == "real_interval" and math.isclose(a1, 0.0, abs_tol=1e-15) \
            and math.isclose(a2, math.pi) and s.imag == 0:
        a, b = target.params
        return hm_halfplane_interval(np.asarray(z) - s.real, a - s.real, b - s.real)
    if target.kind == "ray" and abs(target.params[1] - s) < 1e-14:
        ang = target.params[0]
        to_upper = hm_sector_side(np.asarray(z) - s, -a1, a2)
        if _same_angle(ang, a2):
            return to_upper
        if _same_angle(ang, -a1):
            return 1 - to_upper
    return None


def _same_angle(a, b):
    return abs(math.remainder(a - b, 2 * math.pi)) < 1e-12


# ---------------------------------------------------------------------------
# level sets


@dataclass(frozen=True)
class LevelArc:
    """The level set ``{omega(., B, D) = k}``: a circular arc or a diameter."""

    k: float
    endpoints: tuple[complex, complex]
    center: complex | None
    radius: float
    is_diameter: bool
    _c: float = 0.0
    _x: tuple[float, float] = (0.0, 0.0)

    def parametrize(self, rho):
        """Point of the arc for ``rho`` in ``(0, inf)``; ``rho -> 0`` tends to the
        end point ``e^{i phi2}`` of ``B``."""
        x1, x2 = self._x
        q = np.asarray(rho, dtype=float) * np.exp(1j * math.pi * self.k)
        W = (x2 - q * x1) / (1 - q)
        return _from_upper(W, self._c)

    def points(self, n: int = 50, margin: float = 0.02):
        """``n`` points evenly spread along the arc from its geometry."""
        p1, p2 = self.endpoints
        s = np.linspace(margin, 1 - margin, n)
        if self.is_diameter:
            return p1 + s * (p2 - p1)
        a1 = np.angle(p1 - self.center)
        a2 = np.angle(p2 - self.center)
        span = (a2 - a1) % (2 * math.pi)
        mid = self.center + self.radius * np.exp(1j * (a1 + span / 2))
        if abs(mid) >= 1:
            span -= 2 * math.pi
        return self.center + self.radius * np.exp(1j * (a1 + s * span))

    @property
    def meeting_angle(self) -> float:
        """Angle at which the arc meets the unit circle, measured from the
        complement of ``B``; equals ``k pi``."""
        p2 = self.endpoints[1]
        w = self.parametrize(1e-8)
        return float(abs(np.angle((w - p2) / (1j * p2))))


def level_set_arc(arc: BoundarySet, k: float) -> LevelArc:
    """Level set of the harmonic measure of a disk arc.

    The arc runs through both endpoints of ``B`` and meets the circle at angle
    ``k pi``; it is the diameter when ``B`` is a half-circle and ``k = 1/2``.
    """
    if arc.kind != "disk_arc":
        raise ValueError("level_set_arc needs a disk_arc boundary set")
    if not 0 < k < 1:
        raise ValueError("need 0 < k < 1")
    phi1, phi2 = arc.params
    c, x1, x2 = _arc_to_interval(phi1, phi2)
    ends = (complex(np.exp(1j * phi1)), complex(np.exp(1j * phi2)))
    probe = LevelArc(k, ends, None, math.inf, True, c, (x1, x2))
    a, b, m = probe.parametrize([0.5, 2.0, 1.0])
    # circle through three points; collinear means a diameter
    d = 2 * (a.real * (b.imag - m.imag) + b.real * (m.imag - a.imag) + m.real * (a.imag - b.imag))
    if abs(d) < 1e-12:
        return LevelArc(k, ends, None, math.inf, True, c, (x1, x2))
    ux = (abs(a) ** 2 * (b.imag - m.imag) + abs(b) ** 2 * (m.imag - a.imag)
          + abs(m) ** 2 * (a.imag - b.imag)) / d
    uy = (abs(a) ** 2 * (m.real - b.real) + abs(b) ** 2 * (a.real - m.real)
          + abs(m) ** 2 * (b.real - a.real)) / d
    centre = complex(ux, uy)
    return LevelArc(k, ends, centre, float(abs(a - centre)), False, c, (x1, x2))


# ---------------------------------------------------------------------------
# walk on spheres


@dataclass(frozen=True)
class WalkRegion:
    """A bounded region for walk-on-spheres.

    ``distance`` returns a lower bound on the distance to the boundary and
    ``project`` the nearest boundary point.
    """

    distance: Callable
    project: Callable
    contains: Callable
    name: str = "region"

    @classmethod
    def unit_disk(cls) -> "WalkRegion":
        return cls(lambda w: 1 - np.abs(w), lambda w: w / np.abs(w),
                   lambda w: np.abs(w) < 1, "unit_disk")

    @classmethod
    def upper_half_disk(cls) -> "WalkRegion":
        def dist(w):
            return np.minimum(1 - np.abs(w), w.imag)

        def proj(w):
            return np.where(w.imag < 1 - np.abs(w), w.real + 0j, w / np.abs(w))

        return cls(dist, proj, lambda w: (np.abs(w) < 1) & (w.imag > 0), "upper_half_disk")


@dataclass
class MCEstimate:
    mean: float
    stderr: float
    walks: int
    unfinished: int = 0

    @property
    def unreliable(self) -> bool:
        return self.unfinished > 0

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "walks": self.walks,
                "unfinished": self.unfinished, "unreliable": self.unreliable}


def _walk_block(rng, size, start, region: WalkRegion, step_cap, eps, max_steps):
    w = np.full(size, start, dtype=complex)
    active = np.arange(size)
    for _ in range(max_steps):
        if active.size == 0:
            break
        r = np.minimum(region.distance(w[active]), step_cap)
        moving = r > eps
        active = active[moving]
        r = r[moving]
        w[active] += r * np.exp(2j * math.pi * rng.random(active.size))
    return region.project(w), active.size


def walk_exits(region: WalkRegion, start: complex, walks: int, seed: int = 0,
               step_cap: float = math.inf, boundary_eps: float = 1e-5,
               max_steps: int = 10_000, n_jobs: int = 1, score=None):
    """Run walk-on-spheres from ``start``; returns per-block ``(sum, sumsq, n, unfinished)``.

    ``score(exits, rng)`` maps projected exit points to values, drawing any
    further randomness from the block's stream; by default the exits
    themselves are returned instead of sums.
    """
    if not boundary_eps > 0:
        raise ValueError("boundary_eps must be positive")
    if not region.contains(np.asarray(start, dtype=complex)):
        raise DomainError("walk must start inside the region")

    def run(rng, size, index):
        exits, unfinished = _walk_block(rng, size, start, region, step_cap,
                                        boundary_eps, max_steps)
        if score is None:
            return exits, unfinished
        v = np.asarray(score(exits, rng), dtype=float)
        return v.sum(), (v * v).sum(), size, unfinished

    return _rng.map_blocks(run, walks, seed, n_jobs)


def _estimate(blocks) -> MCEstimate:
    s = sum(b[0] for b in blocks)
    s2 = sum(b[1] for b in blocks)
    n = sum(b[2] for b in blocks)
    mean = s / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    return MCEstimate(float(mean), float(math.sqrt(var / n)), int(n),
                      int(sum(b[3] for b in blocks)))


def _region_and_transport(domain):
    """Walk region plus the map sending its boundary to the domain boundary."""
    if isinstance(domain, WalkRegion):
        return domain, None
    if isinstance(domain, ModelDomain):
        if domain.kind == "disk":
            return WalkRegion.unit_disk(), None
        return WalkRegion.unit_disk(), domain
    raise TypeError("domain must be a ModelDomain or a WalkRegion")


def hm_monte_carlo(domain, target: BoundarySet, z: complex, walks: int = 100_000,
                   step_cap: float = math.inf, boundary_eps: float = 1e-5, seed: int = 0,
                   max_steps: int = 10_000, n_jobs: int = 1) -> MCEstimate:
    """Walk-on-spheres estimate of ``omega(z, target, domain)``.

    Model domains other than the disk are walked in the unit disk, starting
    at ``f^-1(z)``; exits are pushed through ``f`` before the target
    indicator is applied.  Walks still running after ``max_steps`` are scored
    at their projected position and counted in ``unfinished``.
    """
    region, transport = _region_and_transport(domain)
    if transport is not None:
        start = complex(transport.to_disk(z))

        def score(exits, rng):
            with np.errstate(all="ignore"):
                pts = transport.from_disk(exits, check=False)
            return target.indicator(pts)
    else:
        start = complex(z)

        def score(exits, rng):
            return target.indicator(exits)
    blocks = walk_exits(region, start, walks, seed, step_cap, boundary_eps, max_steps,
                        n_jobs, score)
    return _estimate(blocks)


def _boundary_dist(domain, pts):
    if isinstance(domain, WalkRegion):
        return np.abs(domain.distance(pts))
    return np.abs(domain.boundary_distance(pts))


def _omega(domain, target, z, walks, seed, n_jobs):
    exact = exact_measure(domain, target, z)
    if exact is not None:
        return float(exact), 0.0
    est = hm_monte_carlo(domain, target, z, walks, seed=seed, n_jobs=n_jobs)
    return est.mean, est.stderr


def _check_common_boundary(inner, outer, target):
    pts = target.sample_points()
    if pts is None:
        return
    for dom in (inner, outer):
        d = _boundary_dist(dom, pts)
        if np.any(d > 1e-9 * np.maximum(1, np.abs(pts))):
            raise ValueError("B must lie on the common boundary of both domains")


@dataclass
class MarkovResult:
    residual: float
    lhs: float
    rhs: float
    stderr: float
    monotone: bool
    inner_term: float
    integral_term: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def strong_markov_residual(inner, outer, target: BoundarySet, z: complex,
                           walks: int = 100_000, seed: int = 0, n_jobs: int = 1,
                           return_details: bool = False):
    """``|omega(z,B,outer) - omega(z,B,inner) - integral|`` for ``inner ⊂ outer``.

    The integral of ``omega(zeta, B, outer)`` against the exit distribution of
    ``inner`` over the part of its boundary inside ``outer`` is estimated by
    walking in ``inner``.  Closed forms are used for ``omega(., B, outer)`` and
    ``omega(z, B, inner)`` when available; otherwise the walk scores exits on
    ``B`` directly and the outer measure at interior exits by a continued walk.
    """
    _check_common_boundary(inner, outer, target)
    lhs, lhs_err = _omega(outer, target, z, walks, seed + 1, n_jobs)
    if inner is outer or (isinstance(inner, ModelDomain) and inner == outer):
        # the integral runs over an empty set
        first, first_err = _omega(inner, target, z, walks, seed + 1, n_jobs)
        res = MarkovResult(abs(lhs - first), lhs, first, first_err, first <= lhs, first, 0.0)
        return res if return_details else res.residual

    exact_inner = exact_measure(inner, target, z)
    region, transport = _region_and_transport(inner)
    start = complex(transport.to_disk(z)) if transport is not None else complex(z)

    def score(exits, rng):
        with np.errstate(all="ignore"):
            pts = transport.from_disk(exits, check=False) if transport is not None else exits
        pts = np.asarray(pts, dtype=complex)
        finite = np.isfinite(pts)
        safe = np.where(finite, pts, 0)
        off_outer = finite & (_boundary_dist(outer, safe) > 1e-9 * np.maximum(1, np.abs(safe)))
        off_outer &= np.asarray(_contains(outer, safe), dtype=bool)
        val = np.zeros(pts.shape)
        if off_outer.any():
            val[off_outer] = _outer_values(outer, target, safe[off_outer], rng)
        if exact_inner is None:
            val[~off_outer] = target.indicator(safe[~off_outer]) & finite[~off_outer]
        return val

    est = _estimate(walk_exits(region, start, walks, seed, score=score, n_jobs=n_jobs))
    if exact_inner is None:
        # the walk scored B itself, so its mean is the whole right-hand side
        first, first_err = _omega(inner, target, z, walks, seed + 2, n_jobs)
        rhs = est.mean
        integral = rhs - first
    else:
        first, first_err = float(exact_inner), 0.0
        integral = est.mean
        rhs = first + integral
    err = math.hypot(est.stderr, lhs_err)
    monotone = first <= lhs + 4 * math.hypot(first_err, lhs_err) + 1e-12
    res = MarkovResult(abs(lhs - rhs), lhs, rhs, err, bool(monotone), first, integral)
    return res if return_details else res.residual


def _contains(domain, pts):
    return domain.contains(pts)


def _outer_values(outer, target, pts, rng):
    exact = exact_measure(outer, target, pts)
    if exact is not None:
        return exact
    # no closed form: continue each walk inside the outer domain
    region, transport = _region_and_transport(outer)
    starts = transport.to_disk(pts) if transport is not None else pts
    exits, _ = _walk_many(rng, np.asarray(starts, dtype=complex), region)
    with np.errstate(all="ignore"):
        out_pts = transport.from_disk(exits, check=False) if transport is not None else exits
    return target.indicator(out_pts).astype(float)


def _walk_many(rng, starts, region, eps=1e-5, max_steps=10_000):
    w = starts.copy()
    active = np.arange(w.size)
    for _ in range(max_steps):
        if active.size == 0:
            break
        r = region.distance(w[active])
        moving = r > eps
        active = active[moving]
        w[active] += r[moving] * np.exp(2j * math.pi * rng.random(active.size))
    return region.project(w), active.size


def monotonicity_check(inner, outer, target: BoundarySet, z: complex, walks: int = 20_000,
                       seed: int = 0, n_sigma: float = 4.0) -> bool:
    """``omega(z, B, inner) <= omega(z, B, outer)`` up to Monte-Carlo error."""
    a, ea = _omega(inner, target, z, walks, seed, 1)
    b, eb = _omega(outer, target, z, walks, seed + 1, 1)
    return a <= b + n_sigma * math.hypot(ea, eb) + 1e-12

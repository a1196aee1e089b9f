"""Angle traces, cluster intervals and the convergence classifier.

The convergence angle of a disk sequence ``w_n -> sigma`` is
``theta_n = pi/2 - arg(1 - conj(sigma) w_n)``, which lies in ``(0, pi)``;
``theta = pi/2`` is orthogonal approach and ``0`` or ``pi`` tangential.  For a
right half-plane point ``z = rho e^{i phi}`` pulled back by the Cayley map the
angle is ``theta = phi + pi/2``.

Sequences in other domains are pulled back through ``f^-1``.  The quantity
``1 - conj(sigma) f^-1(z)`` is evaluated by fusing the final Moebius atoms of
``f^-1`` with ``w -> 1 - conj(sigma) w``, so traces running far out towards
infinity keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import BoundaryEnd, ModelDomain, sandwich_check
from .geometry import ConformalChain, apply_chain, moebius
from .harmonic import BoundarySet, hm_disk_arc
from .sectors import ASetSpec, exhausts

__all__ = [
    "WrongEndError",
    "SequenceTrace",
    "ClusterInterval",
    "Classification",
    "Theorem11Report",
    "angle_trace",
    "cluster_interval",
    "classify_convergence",
    "angle_via_harmonic_measure",
    "theorem_1_1_check",
]

DEFAULT_TOL = 0.02
DEFAULT_TAIL = 0.5
BINS = 64


class WrongEndError(ValueError):
    """The pulled-back sequence does not approach the requested boundary point."""


@dataclass
class SequenceTrace:
    """An ordered finite sequence of points in an ambient domain."""

    points: np.ndarray
    ambient: ModelDomain | None = None
    label: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        if self.ambient is not None and not np.all(self.ambient.contains(self.points)):
            bad = self.points[~np.asarray(self.ambient.contains(self.points))][0]
            raise ValueError(f"trace point {bad} lies outside {self.ambient.describe()}")

    def __len__(self) -> int:
        return len(self.points)

    def escapes(self) -> bool:
        """Audit that the tail leaves compact sets: hyperbolic distance from
        ``f(0)`` is larger over the last quarter than over the first."""
        dom = self.ambient or ModelDomain.disk()
        base = dom.from_disk(0.0)
        k = np.asarray(dom.hyperbolic_distance(self.points, np.full(len(self), base)))
        q = max(1, len(self) // 4)
        return bool(np.median(k[-q:]) > np.median(k[:q]))


def _points(points):
    return np.asarray(getattr(points, "points", points), dtype=complex).ravel()


# ---------------------------------------------------------------------------
# angle traces


def angle_trace(sigma: complex, points):
    """``theta_n = pi/2 - arg(1 - conj(sigma) z_n)`` for points of the unit disk."""
    if not math.isclose(abs(sigma), 1.0, abs_tol=1e-12):
        raise ValueError("sigma must have unit modulus")
    z = _points(points)
    if np.any(np.abs(z) >= 1):
        raise ValueError("angle traces need points of the unit disk")
    q = 1 - np.conj(sigma) * z
    if np.any(q == 0):
        raise ValueError("angle undefined at z = sigma")
    return math.pi / 2 - np.angle(q)


@dataclass
class ClusterInterval:
    """Finite-sample cluster set ``[lo, hi]`` of an angle trace's tail."""

    lo: float
    hi: float
    tail_fraction: float
    histogram: np.ndarray = field(repr=False)
    gap: bool = False

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "tail_fraction": self.tail_fraction,
                "gap": self.gap, "histogram": self.histogram.tolist()}


def cluster_interval(angles, tail_fraction: float = DEFAULT_TAIL, bins: int = BINS,
                     gap_tol: float = DEFAULT_TOL) -> ClusterInterval:
    """``[min, max]`` of the last ``tail_fraction`` of ``angles`` plus a histogram.

    A gap is flagged when a run of empty bins strictly inside ``[lo, hi]`` is
    wider than ``gap_tol`` (and than one bin).
    """
    a = np.asarray(angles, dtype=float).ravel()
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    n_tail = max(1, int(math.ceil(len(a) * tail_fraction)))
    tail = a[len(a) - n_tail:]
    if tail.size == 0:
        raise ValueError("empty tail")
    lo, hi = float(tail.min()), float(tail.max())
    if hi > lo:
        hist, edges = np.histogram(tail, bins=bins, range=(lo, hi))
    else:
        hist = np.zeros(bins, dtype=int)
        hist[0] = tail.size
    width = (hi - lo) / bins
    gap = False
    if hi > lo:
        run = 0
        for count in hist[1:-1]:
            run = run + 1 if count == 0 else 0
            if run * width > max(gap_tol, width):
                gap = True
                break
    return ClusterInterval(lo, hi, tail_fraction, hist, gap)


# ---------------------------------------------------------------------------
# classification


@dataclass
class Classification:
    """``kind`` is ``by_angle``, ``angle_set``, ``tangential`` or ``non_interval_cluster``."""

    kind: str
    theta: float | None
    interval: tuple[float, float]
    cluster: ClusterInterval
    sigma: complex
    angles: np.ndarray = field(repr=False, default=None)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "theta": self.theta, "interval": list(self.interval),
                "sigma": [self.sigma.real, self.sigma.imag], "cluster": self.cluster.to_dict()}


def _inverse_chain(pair) -> ConformalChain:
    if isinstance(pair, ModelDomain):
        return pair.riemann.inverse()
    if isinstance(pair, ConformalChain):
        return pair.inverse()
    if pair is None:
        return ConformalChain((), "disk", "disk")
    raise TypeError("pair must be a ModelDomain, a ConformalChain f: D -> domain, or None")


def _estimate_sigma(w, tol):
    q = max(1, len(w) // 10)
    tail = w[-q:]
    u = tail / np.abs(tail)
    s = np.mean(u)
    if not abs(s) > 1e-12:
        raise WrongEndError("preimage tail does not settle on one boundary point")
    s = s / abs(s)
    spread = float(np.max(np.abs(np.angle(u / s))))
    if spread > tol:
        raise WrongEndError(f"preimage tail does not settle on one boundary point (spread {spread:.3g})")
    return complex(s)


def _one_minus(points, inv: ConformalChain, sigma: complex):
    chain = inv.then([moebius(-np.conj(sigma), 1, 0, 1)]).simplified()
    with np.errstate(all="ignore"):
        return np.asarray(apply_chain(chain, points, check=False), dtype=complex)


def pulled_back_angles(points, pair=None, sigma: complex | None = None, tol: float = DEFAULT_TOL):
    """Angle trace of ``f^-1(z_n)``; returns ``(angles, sigma)``.

    ``sigma`` defaults to the marked end of a ``ModelDomain`` pair (``1`` for
    disk sequences) when the preimages head there, and otherwise to the
    normalised preimage tail.
    """
    z = _points(points)
    if z.size == 0:
        raise ValueError("empty trace")
    inv = _inverse_chain(pair)
    with np.errstate(all="ignore"):
        w = np.asarray(apply_chain(inv, z, check=False), dtype=complex)
    if sigma is None:
        sigma = _estimate_sigma(w, tol)
        if pair is None or isinstance(pair, ModelDomain):
            marked = 1 + 0j if pair is None else pair.sigma
            if abs(np.angle(sigma / marked)) <= tol:
                sigma = marked
    q = _one_minus(z, inv, sigma)
    k = max(1, len(q) // 10)
    head, tail = np.median(np.abs(q[:k])), np.median(np.abs(q[-k:]))
    if not (tail < 0.05 and (tail < head or tail < 1e-3)):
        raise WrongEndError("preimages do not converge to sigma")
    return math.pi / 2 - np.angle(q), complex(sigma)


def classify_convergence(points, pair=None, sigma: complex | None = None,
                         tail_fraction: float = DEFAULT_TAIL,
                         tol: float = DEFAULT_TOL) -> Classification:
    """Classify how ``f^-1(z_n)`` approaches ``sigma``.

    The cluster interval of the tail's angle trace is tested in this order:
    touching ``0`` or ``pi`` within ``tol`` gives ``tangential``; width at most
    ``tol`` gives ``by_angle`` at the midpoint; a histogram gap gives
    ``non_interval_cluster``; anything else is an ``angle_set``.

    Parameters
    ----------
    points : array_like or SequenceTrace
    pair : ModelDomain or ConformalChain, optional
        Riemann map ``f: D -> domain``; omitted for disk sequences.
    """
    angles, sigma = pulled_back_angles(points, pair, sigma, tol)
    ci = cluster_interval(angles, tail_fraction, gap_tol=tol)
    if ci.lo <= tol or ci.hi >= math.pi - tol:
        kind, theta = "tangential", (math.pi if ci.hi >= math.pi - tol else 0.0)
    elif ci.width <= tol:
        kind, theta = "by_angle", ci.mid
    elif ci.gap:
        kind, theta = "non_interval_cluster", None
    else:
        kind, theta = "angle_set", None
    return Classification(kind, theta, (ci.lo, ci.hi), ci, sigma, angles)


def angle_via_harmonic_measure(points, arc: BoundarySet, tail_fraction: float = DEFAULT_TAIL,
                               sigma: complex | None = None) -> ClusterInterval:
    """Cluster interval of the harmonic-measure angle ``pi omega(z_n, B, D)``.

    ``sigma`` must be an end point of ``B`` and defaults to its starting
    (clockwise-most) end, where ``pi omega`` is the convergence angle itself.
    When ``sigma`` is the other end the values are reported as
    ``pi (1 - omega)`` so they are again convergence angles.
    """
    phi1, phi2 = arc.params
    start, end = np.exp(1j * phi1), np.exp(1j * phi2)
    if sigma is None:
        sigma = start
    if abs(sigma - start) < 1e-12:
        flip = False
    elif abs(sigma - end) < 1e-12:
        flip = True
    else:
        raise ValueError("sigma must be an end point of the arc")
    om = hm_disk_arc(_points(points), arc)
    vals = math.pi * (1 - np.asarray(om) if flip else np.asarray(om))
    return cluster_interval(vals, tail_fraction)


# ---------------------------------------------------------------------------
# theorem check


@dataclass
class Theorem11Report:
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    predicted: tuple[float, float]
    classified: Classification
    agree: bool
    sandwich: object = None
    exhaustion: object = None

    @property
    def conditions_hold(self) -> bool:
        return self.cond_i and self.cond_ii and self.cond_iii

    @property
    def consistent(self) -> bool:
        """False only when every hypothesis holds and the classification disagrees."""
        return self.agree or not self.conditions_hold

    def to_dict(self) -> dict:
        return {"cond_i": self.cond_i, "cond_ii": self.cond_ii, "cond_iii": self.cond_iii,
                "conditions_hold": self.conditions_hold,
                "predicted": {"kind": "angle_set", "interval": list(self.predicted)},
                "classified": self.classified.to_dict(), "agree": self.agree,
                "consistent": self.consistent,
                "sandwich": self.sandwich.to_dict() if self.sandwich else None,
                "exhaustion": self.exhaustion.to_dict() if self.exhaustion else None}


def interval_agrees(c: Classification, theta1: float, theta2: float, tol: float) -> bool:
    lo, hi = c.interval
    if c.kind == "by_angle":
        return abs(c.theta - theta1) <= tol and abs(c.theta - theta2) <= tol
    if c.kind in ("angle_set", "tangential"):
        return abs(lo - theta1) <= tol and abs(hi - theta2) <= tol
    return False


def theorem_1_1_check(delta: ModelDomain, U: ModelDomain, R: float, spec: ASetSpec, points,
                      xi: BoundaryEnd | None = None, tol: float = DEFAULT_TOL,
                      eps_grid: float = 0.05, tail_start: int | None = None,
                      tail_fraction: float = DEFAULT_TAIL, samples: int = 10_000,
                      seed: int = 0) -> Theorem11Report:
    """Check the three hypotheses and compare the predicted angle-set with the classifier.

    (i) ``E_U(xi, R) ⊂ delta ⊆ U`` by sampling, (ii) the geodesic starts in
    ``delta``, (iii) the trace exhausts ``A_U(gamma, theta1, theta2)``.  The
    classification uses ``delta``'s own Riemann map.
    """
    g = spec.geodesic
    if g.domain != U:
        g = g.transported(U)
        spec = ASetSpec(g, spec.theta1, spec.theta2)
    sw = sandwich_check(delta, U, xi, R, samples, seed)
    start = g(g.t0 if math.isfinite(g.t0) else 0.0)
    cond_ii = bool(delta.contains(start))
    ex = exhausts(points, spec, eps_grid, tail_start)
    cls = classify_convergence(points, delta, tail_fraction=tail_fraction, tol=tol)
    agree = interval_agrees(cls, spec.theta1, spec.theta2, tol)
    return Theorem11Report(sw.holds, cond_ii, ex.passed, (spec.theta1, spec.theta2), cls,
                           agree, sw, ex)

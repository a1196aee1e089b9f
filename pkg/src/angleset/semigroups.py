"""Continuous semigroups of the disk in Koenigs form ``phi_t = h^-1(h + t)``.

A model is a planar domain ``Omega`` that is starlike at infinity
(``Omega + t ⊆ Omega``) together with its Riemann map ``h: D -> Omega``
normalised by ``h(0) = 0``.  The Denjoy-Wolff point ``tau`` is the disk end
of ``+inf``; for the catalog models it is ``1``.

Trajectories far out towards ``tau`` are handled in the right half-plane
coordinate ``u = C^-1(h^-1(w))``: ``1 - phi = 2/(u + 1)`` and hyperbolic steps
are measured with the half-plane metric, both free of cancellation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .classify import ClusterInterval, classify_convergence, cluster_interval
from .domains import ModelDomain, radius_for_offset, sandwich_check
from .geometry import ConformalChain, hyperbolic_distance_halfplane

__all__ = [
    "HypothesisError",
    "PreconditionError",
    "SemigroupModel",
    "TrajectoryRecord",
    "SemigroupType",
    "trajectory",
    "trajectory_record",
    "classify_semigroup",
    "slope_cluster",
    "corollary_4_1_predict",
    "proposition_4_1_scenario",
    "geometric_grid",
]


class HypothesisError(ValueError):
    """Parameters outside the range where the slope formula is established."""


class PreconditionError(ValueError):
    """A scenario's geometric precondition failed."""


def geometric_grid(t0: float, t_max: float, n: int) -> np.ndarray:
    return np.geomspace(t0, t_max, n)


@dataclass(frozen=True)
class SemigroupModel:
    """Koenigs model of a non-elliptic semigroup.

    Build catalog models with :meth:`strip`, :meth:`zero_step`,
    :meth:`positive_step` and :meth:`sector`, or wrap any starlike planar
    catalog domain with :meth:`from_planar`.
    """

    name: str
    planar: ModelDomain
    params: tuple = ()

    @classmethod
    def from_planar(cls, planar: ModelDomain, name: str = "", params: tuple = ()) -> "SemigroupModel":
        """Shift ``planar`` so its Riemann map fixes ``0``."""
        p0 = complex(planar.from_disk(0.0))
        omega = planar.shifted(-p0) if p0 != 0 else planar
        return cls(name or planar.describe(), omega, params)

    @classmethod
    def strip(cls) -> "SemigroupModel":
        """``h(z) = log((1 + z)/(1 - z))`` onto ``{|Im w| < pi/2}``: hyperbolic."""
        return cls.from_planar(ModelDomain.strip(math.pi / 2), "strip")

    @classmethod
    def zero_step(cls) -> "SemigroupModel":
        """``h(z) = 2z/(1 - z)`` onto ``{Re w > -1}``: parabolic of zero step."""
        return cls.from_planar(ModelDomain.half_plane(0), "zero_step")

    @classmethod
    def positive_step(cls) -> "SemigroupModel":
        """``h(z) = 2iz/(1 - z)`` onto ``{Im w > -1}``: parabolic of positive step."""
        return cls.from_planar(ModelDomain.rotated_half_plane(0.0), "positive_step")

    @classmethod
    def sector(cls, alpha1: float, alpha2: float) -> "SemigroupModel":
        """Koenigs domain ``U(alpha1, alpha2)`` shifted so that ``h(0) = 0``."""
        return cls.from_planar(ModelDomain.sector(alpha1, alpha2), "sector", (alpha1, alpha2))

    @classmethod
    def from_dict(cls, d: dict) -> "SemigroupModel":
        name = d["model"]
        if name == "sector":
            return cls.sector(d["alpha1"], d["alpha2"])
        if name in ("strip", "zero_step", "positive_step"):
            return getattr(cls, name)()
        raise ValueError(f"unknown semigroup model {name!r}")

    def to_dict(self) -> dict:
        d = {"model": self.name}
        if self.name == "sector":
            d["alpha1"], d["alpha2"] = self.params
        return d

    @property
    def koenigs(self) -> ConformalChain:
        return self.planar.riemann

    @property
    def tau(self) -> complex:
        return self.planar.sigma

    def h(self, z):
        return self.planar.from_disk(z)

    def h_inv(self, w):
        return self.planar.to_disk(w)

    def starlike_audit(self, samples: int = 200, seed: int = 0) -> bool:
        """Sampled check of ``Omega + t ⊆ Omega``."""
        rng = np.random.default_rng(seed)
        w = self.h(0.95 * np.sqrt(rng.random(samples)) * np.exp(2j * math.pi * rng.random(samples)))
        t = rng.exponential(5.0, samples)
        return bool(np.all(self.planar.contains(w + t)))


def trajectory(model: SemigroupModel, z: complex, t):
    """``phi_t(z) = h^-1(h(z) + t)``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("semigroup times must be non-negative")
    w = model.h(z) + t
    out = model.h_inv(w)
    return np.where(t == 0, z, out) if np.ndim(out) else (complex(z) if t == 0 else complex(out))


@dataclass
class TrajectoryRecord:
    start: complex
    times: np.ndarray
    disk_points: np.ndarray
    omega_points: np.ndarray
    slope_args: np.ndarray

    def rows(self):
        for t, p, a in zip(self.times, self.disk_points, self.slope_args):
            yield (float(t), float(p.real), float(p.imag), float(a))


def _slope_args(model: SemigroupModel, omega_points):
    """``arg(1 - conj(tau) phi_t)``, computed in half-plane coordinates."""
    tau = model.tau
    if abs(tau - 1) < 1e-12:
        u = model.planar.to_right_half_plane(omega_points, check=False)
        return -np.angle(u + 1) + 0.0  # no negative zeros in exports
    phi = model.h_inv(omega_points)
    return np.angle(1 - np.conj(tau) * phi)


def trajectory_record(model: SemigroupModel, z: complex, times) -> TrajectoryRecord:
    times = np.asarray(times, dtype=float)
    w = model.h(z) + times
    pts = np.asarray(model.h_inv(w), dtype=complex)
    return TrajectoryRecord(complex(z), times, pts, w, _slope_args(model, w))


@dataclass
class SemigroupType:
    """``kind`` is ``hyperbolic``, ``parabolic_zero_step``,
    ``parabolic_positive_step`` or ``inconclusive``."""

    kind: str
    step_limit: float | None
    decade_slope: float | None
    final_step: float | None
    im_ranges: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _im_ranges(model: SemigroupModel, ks=range(1, 9)):
    # uniform angles plus a geometric ladder towards tau, where Im h can blow up
    ladder = 10.0 ** -np.linspace(0, 12, 121)
    psi = np.concatenate([np.linspace(-math.pi, math.pi, 721), ladder, -ladder])
    psi = psi + np.angle(model.tau)
    ranges = []
    for k in ks:
        r = 1 - 10.0 ** (-k)
        with np.errstate(all="ignore"):
            im = np.asarray(model.planar.from_disk(r * np.exp(1j * psi), check=False)).imag
        im = im[np.isfinite(im)]
        ranges.append(float(np.ptp(im)))
    return ranges


def classify_semigroup(model: SemigroupModel, z: complex = 0j, s: float = 1.0,
                       t_grid=None) -> SemigroupType:
    """Hyperbolic when ``Omega`` sits in a horizontal strip, else parabolic.

    The strip test samples ``Im h`` on circles ``|z| = 1 - 10^-k`` and asks the
    range to stop growing.  Parabolic models are split by the step
    ``d(t) = k_D(phi_t(z), phi_{t+s}(z))`` over the last decade of ``t_grid``:
    zero step when its log-log slope is below ``-0.1`` and the final value is
    below ``0.05``, positive step when the slope is flat and the value stays
    above ``0.05``.
    """
    ranges = _im_ranges(model)
    t_grid = geometric_grid(1.0, 1e6, 61) if t_grid is None else np.asarray(t_grid, float)
    w = model.h(z)
    with np.errstate(all="ignore"):
        u1 = model.planar.to_right_half_plane(w + t_grid, check=False)
        u2 = model.planar.to_right_half_plane(w + t_grid + s, check=False)
        d = np.asarray(hyperbolic_distance_halfplane(u1, u2))
    last = t_grid >= t_grid[-1] / 10
    x, y = np.log10(t_grid[last]), np.log10(np.maximum(d[last], 1e-300))
    slope = float(np.polyfit(x, y, 1)[0]) if last.sum() >= 2 else 0.0
    final = float(d[-1])
    if ranges[-1] <= 1.5 * ranges[len(ranges) // 2] and math.isfinite(ranges[-1]):
        # the step is not needed here and overflows for fast strip trajectories
        return SemigroupType("hyperbolic", None, None, None, ranges)
    if slope < -0.1 and final < 0.05:
        kind = "parabolic_zero_step"
    elif abs(slope) <= 0.1 and final > 0.05:
        kind = "parabolic_positive_step"
    else:
        kind = "inconclusive"
    return SemigroupType(kind, final, slope, final, ranges)


def slope_cluster(model: SemigroupModel, z: complex = 0j, t_max: float = 1e6,
                  samples: int = 200, tail_fraction: float = 0.2) -> ClusterInterval:
    """Cluster interval of ``arg(1 - conj(tau) phi_t(z))`` on a geometric grid."""
    times = geometric_grid(1.0, t_max, samples)
    rec = trajectory_record(model, z, times)
    done = np.abs(1 - np.conj(model.tau) * rec.disk_points) == 0
    if done.any():
        warnings.warn("trajectory reached tau numerically; trace truncated", RuntimeWarning)
        keep = ~done
        return cluster_interval(rec.slope_args[keep], tail_fraction)
    return cluster_interval(rec.slope_args, tail_fraction)


def corollary_4_1_predict(alpha1: float, alpha2: float, strict: bool = True) -> float:
    """Limit slope ``(pi/2)(alpha2 - alpha1)/(alpha1 + alpha2)``.

    Raises :class:`HypothesisError` when ``alpha1 + alpha2 < pi`` unless
    ``strict=False`` (exploratory use only).
    """
    for a in (alpha1, alpha2):
        if not 0 < a <= math.pi:
            raise ValueError("angles must lie in (0, pi]")
    if strict and alpha1 + alpha2 < math.pi:
        raise HypothesisError("the slope formula needs alpha1 + alpha2 >= pi")
    return math.pi / 2 * (alpha2 - alpha1) / (alpha1 + alpha2)


@dataclass
class Prop41Report:
    theta: float
    measured: float | None
    kind: str
    agree: bool
    sandwich: object

    def to_dict(self) -> dict:
        return {"predicted": self.theta, "measured": self.measured, "kind": self.kind,
                "agree": self.agree, "sandwich": self.sandwich.to_dict()}


def proposition_4_1_scenario(theta: float, a: float, delta: ModelDomain | None = None,
                             t_grid=None, tol: float = 0.02, samples: int = 10_000,
                             seed: int = 0) -> Prop41Report:
    """The trace ``t -> t`` in ``delta`` with ``U_theta + a ⊂ delta ⊆ U_theta``.

    ``U_theta + a`` is the horodisk at infinity of ``U_theta`` whose boundary
    line sits ``a sin(theta)`` inside, so the sandwich is audited with
    :func:`sandwich_check` before the trace is classified through ``delta``'s
    Riemann map.
    """
    U = ModelDomain.rotated_half_plane(theta)
    delta = U if delta is None else delta
    R = radius_for_offset(U, a * math.sin(theta))
    sw = sandwich_check(delta, U, None, R, samples, seed)
    if not sw.holds:
        raise PreconditionError(f"sandwich fails ({sw.status}) with witness {sw.witness}")
    t_grid = geometric_grid(1.0 + a, 1e6, 400) if t_grid is None else np.asarray(t_grid, float)
    cls = classify_convergence(t_grid + 0j, delta, tol=tol)
    measured = cls.theta
    agree = cls.kind == "by_angle" and abs(measured - theta) <= tol
    return Prop41Report(theta, measured, cls.kind, agree, sw)

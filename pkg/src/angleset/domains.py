"""Catalog of simply connected model domains, horodisks and the sandwich audit.

Every catalog domain carries a closed-form Riemann map ``f: D -> domain`` as a
:class:`~angleset.geometry.ConformalChain`, so hyperbolic quantities and
horodisks are computed by pulling points back to the unit disk.

The catalog:

``disk``
    the unit disk.
``half_plane``
    ``H + shift`` with ``H = {Re z > 0}``.
``rotated_half_plane``
    ``U_theta + shift`` with ``U_theta = {-theta < arg z < pi - theta}``.
``sector``
    ``U(alpha1, alpha2) + shift`` with ``U(a1, a2) = {-a1 < arg z < a2}``.
``strip``
    ``{|Im(z - shift)| < half_width}``.
``custom``
    membership predicate plus a user supplied Riemann chain.

Shifts are complex.  Unbounded catalog domains are marked at infinity in the
positive real direction, which their Riemann maps send to ``sigma = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import _rng
from .geometry import (
    ConformalChain,
    DomainError,
    apply_chain,
    hyperbolic_distance_disk,
    log_atom,
    moebius,
    power,
    rotation,
    scaling,
    translation,
)

__all__ = [
    "SamplingError",
    "BoundaryEnd",
    "ModelDomain",
    "Horodisk",
    "SandwichVerdict",
    "contains",
    "horodisk_contains",
    "halfplane_offset",
    "radius_for_offset",
    "containment_audit",
    "sandwich_check",
    "domain_from_dict",
]

INV_CAYLEY = moebius(1, 1, -1, 1)


class SamplingError(ValueError):
    """The region to sample is empty or degenerate."""


@dataclass(frozen=True)
class BoundaryEnd:
    """An accessible boundary point or an end at infinity.

    ``kind="point"``: the finite boundary point ``point`` reached along the
    straight segment arriving with direction ``angle`` (the approach ray is
    ``point - r exp(i angle)``, ``r -> 0+``).

    ``kind="infinity"``: infinity reached along ``base + r exp(i angle)``,
    ``r -> +inf``, where ``base`` is any interior point.
    """

    kind: str = "infinity"
    point: complex = 0j
    angle: float = 0.0

    @classmethod
    def at_infinity(cls, ray_angle: float = 0.0) -> "BoundaryEnd":
        return cls("infinity", 0j, float(ray_angle))

    @classmethod
    def at_point(cls, point: complex, approach_angle: float | None = None) -> "BoundaryEnd":
        point = complex(point)
        if approach_angle is None:
            # default: radial approach from the origin (right for disk ends)
            approach_angle = float(np.angle(point)) if point != 0 else 0.0
        return cls("point", point, float(approach_angle))

    def to_dict(self) -> dict:
        if self.kind == "infinity":
            return {"type": "infinity", "ray_angle": self.angle}
        return {"type": "point", "re": self.point.real, "im": self.point.imag,
                "approach_angle": self.angle}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundaryEnd":
        if d["type"] == "infinity":
            return cls.at_infinity(d.get("ray_angle", 0.0))
        return cls.at_point(complex(d["re"], d.get("im", 0.0)), d.get("approach_angle"))


def _sector_chain(alpha1: float, alpha2: float, shift: complex) -> tuple:
    total = alpha1 + alpha2
    atoms = [INV_CAYLEY]
    if not math.isclose(total, math.pi, rel_tol=0, abs_tol=1e-15):
        atoms.append(power(total / math.pi, math.pi / 2))
    if alpha1 != alpha2:
        atoms.append(rotation(-(alpha1 - alpha2) / 2))
    if shift != 0:
        atoms.append(translation(shift))
    return tuple(atoms)


@dataclass(frozen=True)
class ModelDomain:
    """A simply connected model domain with its Riemann map pair.

    Use the classmethod constructors rather than building instances directly.
    """

    kind: str
    params: tuple = ()
    shift: complex = 0j
    marked_end: BoundaryEnd = BoundaryEnd()
    predicate: Callable | None = field(default=None, compare=False, repr=False)
    chain: ConformalChain | None = field(default=None, compare=False, repr=False)
    boundary_fn: Callable | None = field(default=None, compare=False, repr=False)
    name: str = ""

    # -- constructors ---------------------------------------------------
    @classmethod
    def disk(cls, marked_end: BoundaryEnd | None = None) -> "ModelDomain":
        return cls("disk", (), 0j, marked_end or BoundaryEnd.at_point(1.0))

    @classmethod
    def half_plane(cls, shift: complex = 0, marked_end=None) -> "ModelDomain":
        return cls("half_plane", (), complex(shift), marked_end or BoundaryEnd.at_infinity())

    @classmethod
    def rotated_half_plane(cls, theta: float, shift: complex = 0,
                           marked_end=None) -> "ModelDomain":
        if not 0 <= theta < math.pi:
            raise ValueError("theta must lie in [0, pi)")
        return cls("rotated_half_plane", (float(theta),), complex(shift),
                   marked_end or BoundaryEnd.at_infinity())

    @classmethod
    def sector(cls, alpha1: float, alpha2: float, shift: complex = 0,
               marked_end=None) -> "ModelDomain":
        if not (0 <= alpha1 <= math.pi and 0 <= alpha2 <= math.pi and alpha1 + alpha2 > 0):
            raise ValueError("sector needs 0 <= alpha1, alpha2 <= pi and alpha1 + alpha2 > 0")
        return cls("sector", (float(alpha1), float(alpha2)), complex(shift),
                   marked_end or BoundaryEnd.at_infinity())

    @classmethod
    def strip(cls, half_width: float = math.pi / 2, shift: complex = 0,
              marked_end=None) -> "ModelDomain":
        if not half_width > 0:
            raise ValueError("half_width must be positive")
        return cls("strip", (float(half_width),), complex(shift),
                   marked_end or BoundaryEnd.at_infinity())

    @classmethod
    def custom(cls, predicate: Callable, riemann: ConformalChain,
               marked_end: BoundaryEnd, boundary_distance: Callable | None = None,
               name: str = "custom") -> "ModelDomain":
        """A domain given by a membership predicate and a Riemann chain ``D -> domain``."""
        if predicate is None or riemann is None:
            raise ValueError("custom domains need both a predicate and a Riemann chain")
        return cls("custom", (), 0j, marked_end, predicate, riemann, boundary_distance, name)

    # -- geometry -------------------------------------------------------
    @property
    def sector_angles(self) -> tuple[float, float] | None:
        """``(alpha1, alpha2)`` for sector-like kinds, else ``None``."""
        if self.kind == "half_plane":
            return (math.pi / 2, math.pi / 2)
        if self.kind == "rotated_half_plane":
            th = self.params[0]
            return (th, math.pi - th)
        if self.kind == "sector":
            return self.params
        return None

    @property
    def riemann(self) -> ConformalChain:
        """The Riemann map ``f: D -> domain``."""
        if self.kind == "custom":
            return self.chain
        return _catalog_chain(self)

    def contains(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(invalid="ignore"):
            if self.kind == "disk":
                out = np.abs(z) < 1
            elif self.kind == "strip":
                out = np.abs((z - self.shift).imag) < self.params[0]
            elif self.kind == "custom":
                out = np.asarray(self.predicate(z), dtype=bool)
            else:
                a1, a2 = self.sector_angles
                zs = z - self.shift
                ang = np.angle(zs)
                out = (zs != 0) & (ang > -a1) & (ang < a2)
        out = out & np.isfinite(z)
        return bool(out) if out.ndim == 0 else out

    def boundary_distance(self, z):
        """Euclidean distance from ``z`` to the boundary (catalog kinds)."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "disk":
            d = np.abs(1 - np.abs(z))
        elif self.kind == "strip":
            d = np.abs(self.params[0] - np.abs((z - self.shift).imag))
        elif self.kind == "custom":
            if self.boundary_fn is None:
                raise NotImplementedError("custom domain without boundary_distance")
            d = np.asarray(self.boundary_fn(z), dtype=float)
        else:
            a1, a2 = self.sector_angles
            zs = z - self.shift
            d = np.minimum(_ray_distance(zs, -a1), _ray_distance(zs, a2))
        return float(d) if d.ndim == 0 else d

    def to_disk(self, z, check: bool = True):
        if check and not np.all(self.contains(z)):
            raise DomainError(f"point outside {self.describe()}")
        return apply_chain(self.riemann, z, "inverse", check=False)

    def from_disk(self, w, check: bool = True):
        return apply_chain(self.riemann, w, "forward", check=check)

    def to_right_half_plane(self, z, check: bool = True):
        """``C^-1(f^-1(z))``: coordinates in ``{Re u > 0}`` with the marked end of
        catalog domains at ``u = inf``.  Adjacent Moebius atoms are fused, so
        points far out towards the end keep full precision."""
        if check and not np.all(self.contains(z)):
            raise DomainError(f"point outside {self.describe()}")
        chain = self.riemann.inverse().then([INV_CAYLEY]).simplified()
        with np.errstate(divide="ignore", invalid="ignore"):
            return apply_chain(chain, z, check=False)

    def hyperbolic_distance(self, z, w):
        return hyperbolic_distance_disk(self.to_disk(z), self.to_disk(w))

    def end_to_disk(self, end: BoundaryEnd | None = None) -> complex:
        """The point of the unit circle corresponding to a boundary end."""
        end = end or self.marked_end
        if self.kind == "disk" and end.kind == "point":
            if not math.isclose(abs(end.point), 1.0, abs_tol=1e-12):
                raise ValueError("disk ends must lie on the unit circle")
            return end.point / abs(end.point)
        if end.kind == "infinity":
            base = self.from_disk(0.0)
            radii = [10.0 ** k for k in (1, 2, 4, 8, 16, 32, 64, 128, 256)]
            pts = [base + r * np.exp(1j * end.angle) for r in radii]
        else:
            radii = [10.0 ** -k for k in (1, 2, 4, 8, 12)]
            pts = [end.point - r * np.exp(1j * end.angle) for r in radii]
        best = None
        for p in pts:
            if not self.contains(p):
                continue
            with np.errstate(all="ignore"):
                w = apply_chain(self.riemann, p, "inverse", check=False)
            if np.isfinite(w) and abs(w) > 0:
                best = w
        if best is None:
            raise ValueError("marked end is not reached along its ray inside the domain")
        return complex(best / abs(best))

    @property
    def sigma(self) -> complex:
        return self.end_to_disk(self.marked_end)

    def shifted(self, c: complex) -> "ModelDomain":
        if self.kind in ("disk", "custom"):
            raise ValueError(f"{self.kind} domains cannot be shifted")
        return ModelDomain(self.kind, self.params, self.shift + complex(c), self.marked_end)

    def describe(self) -> str:
        if self.kind == "custom":
            return self.name
        args = ", ".join(f"{p:g}" for p in self.params)
        s = f"{self.kind}({args})"
        if self.shift:
            s += f" + {self.shift:g}"
        return s

    # -- serialisation -------------------------------------------------
    def to_dict(self) -> dict:
        if self.kind == "custom":
            raise ValueError("custom domains are not serialisable")
        d: dict = {"kind": self.kind}
        if self.kind == "rotated_half_plane":
            d["theta"] = self.params[0]
        elif self.kind == "sector":
            d["alpha1"], d["alpha2"] = self.params
        elif self.kind == "strip":
            d["half_width"] = self.params[0]
        if self.kind != "disk":
            d["shift"] = [self.shift.real, self.shift.imag]
        d["marked_end"] = self.marked_end.to_dict()
        return d


def _parse_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1] if len(v) > 1 else 0.0)
    return complex(v)


def domain_from_dict(d: dict) -> ModelDomain:
    """Build a catalog domain from its JSON descriptor."""
    kind = d["kind"]
    end = BoundaryEnd.from_dict(d["marked_end"]) if "marked_end" in d else None
    shift = _parse_complex(d.get("shift", 0))
    if kind == "disk":
        return ModelDomain.disk(end)
    if kind == "half_plane":
        return ModelDomain.half_plane(shift, end)
    if kind == "rotated_half_plane":
        return ModelDomain.rotated_half_plane(d["theta"], shift, end)
    if kind == "sector":
        return ModelDomain.sector(d["alpha1"], d["alpha2"], shift, end)
    if kind == "strip":
        return ModelDomain.strip(d.get("half_width", math.pi / 2), shift, end)
    raise ValueError(f"unknown domain kind {kind!r}")


def _ray_distance(z, angle):
    rot = z * np.exp(-1j * angle)
    return np.where(rot.real > 0, np.abs(rot.imag), np.abs(z))


def _catalog_chain(dom: ModelDomain) -> ConformalChain:
    pred = dom.contains
    if dom.kind == "disk":
        return ConformalChain((), "disk", "disk")
    if dom.kind == "strip":
        s = dom.params[0]
        atoms = [INV_CAYLEY, log_atom()]
        if s != math.pi / 2:
            atoms.append(scaling(2 * s / math.pi))
        if dom.shift:
            atoms.append(translation(dom.shift))
        return ConformalChain(tuple(atoms), "disk", dom.describe(), target_test=pred)
    a1, a2 = dom.sector_angles
    return ConformalChain(_sector_chain(a1, a2, dom.shift), "disk", dom.describe(),
                          target_test=pred)


def contains(domain: ModelDomain, z):
    """True iff ``z`` lies in the open domain."""
    return domain.contains(z)


# ---------------------------------------------------------------------------
# horodisks


@dataclass(frozen=True)
class Horodisk:
    """``E(xi, R) = f(E_D(sigma, R))`` with ``E_D(sigma, R) = {|sigma - z|^2 < R (1 - |z|^2)}``."""

    domain: ModelDomain
    radius: float
    center: BoundaryEnd | None = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("horodisk radius must be positive")

    @property
    def sigma(self) -> complex:
        return self.domain.end_to_disk(self.center or self.domain.marked_end)

    def disk_center_radius(self) -> tuple[complex, float]:
        """Euclidean centre and radius of the horodisk inside the unit disk."""
        R = self.radius
        return self.sigma / (1 + R), R / (1 + R)

    def contains(self, z):
        return horodisk_contains(self, z)


def _disk_horodisk_test(w, sigma, R):
    aw = np.abs(w)
    return np.abs(sigma - w) ** 2 < R * (1 - aw) * (1 + aw)


def horodisk_contains(h: Horodisk, z):
    """Membership in a horodisk, evaluated on the disk preimage of ``z``."""
    if not np.all(h.domain.contains(z)):
        raise DomainError("point outside the horodisk's ambient domain")
    w = h.domain.to_disk(z, check=False)
    out = _disk_horodisk_test(np.asarray(w), h.sigma, h.radius)
    return bool(out) if np.ndim(out) == 0 else out


def halfplane_offset(domain: ModelDomain, R: float) -> float:
    """Offset ``a(R)`` with ``E(infinity, R) = domain + a(R) n``.

    Only half-plane kinds qualify; ``n`` is the inward unit normal of the
    boundary line.  The horocycle of radius ``R`` at ``sigma`` is transported
    through the Riemann map and the common offset of its image points read
    off; the images are checked to lie on one line parallel to the boundary.
    """
    angles = domain.sector_angles
    if angles is None or not math.isclose(sum(angles), math.pi, abs_tol=1e-12):
        raise ValueError("horodisk offsets are defined for half-plane domains only")
    a1, a2 = angles
    normal = np.exp(1j * (a2 - a1) / 2)
    c, rho = Horodisk(domain, R).disk_center_radius()
    sigma = domain.sigma
    psi = np.linspace(0.5, 2 * math.pi - 0.5, 9)
    ring = c + rho * sigma * np.exp(1j * psi)
    img = domain.from_disk(ring, check=False)
    offs = ((img - domain.shift) * np.conj(normal)).real
    if np.ptp(offs) > 1e-6 * max(1.0, abs(float(np.mean(offs)))):
        raise ValueError("horocycle image is not a line parallel to the boundary")
    return float(np.mean(offs))


def radius_for_offset(domain: ModelDomain, a: float) -> float:
    """Inverse of :func:`halfplane_offset`: the radius ``R`` with ``a(R) = a``."""
    if not a > 0:
        raise ValueError("offset must be positive")
    g = lambda logr: halfplane_offset(domain, math.exp(logr)) - a
    lo, hi = -1.0, 1.0
    # a(R) decreases in R: widen the bracket until it straddles the root
    while g(lo) < 0 and lo > -20:
        lo *= 2
    while g(hi) > 0 and hi < 20:
        hi *= 2
    return math.exp(brentq(g, lo, hi, xtol=1e-14, rtol=1e-14))


# ---------------------------------------------------------------------------
# sampling and the sandwich audit


def _stratified_near(rng, n, sigma, rmax):
    """Jittered log-radial / angular samples of ``sigma (1 - r e^{i psi})``."""
    if n <= 0:
        return np.empty(0, complex)
    u = (np.arange(n) + rng.random(n)) / n
    logr = np.log(1e-6) + u * (np.log(rmax) - np.log(1e-6))
    psi = rng.uniform(-math.pi / 2, math.pi / 2, n)
    return sigma * (1 - np.exp(logr) * np.exp(1j * psi))


def _uniform_disk(rng, n, center=0j, radius=1.0):
    r = radius * np.sqrt(rng.random(n))
    return center + r * np.exp(2j * math.pi * rng.random(n))


def sample_horodisk(h: Horodisk, rng, n):
    c, rho = h.disk_center_radius()
    bulk = _uniform_disk(rng, n - n // 2, c, rho)
    near = _stratified_near(rng, n // 2, h.sigma, 2 * rho)
    pts = np.concatenate([bulk, near])
    return pts[_disk_horodisk_test(pts, h.sigma, h.radius)]


def sample_domain(domain: ModelDomain, rng, n, end: BoundaryEnd | None = None):
    sigma = domain.end_to_disk(end or domain.marked_end)
    bulk = _uniform_disk(rng, n - n // 2, 0j, 1 - 1e-9)
    near = _stratified_near(rng, n // 2, sigma, 1.0)
    pts = np.concatenate([bulk, near])
    return pts[np.abs(pts) < 1]


@dataclass
class SandwichVerdict:
    status: str
    witness: complex | None
    checked_inner: int
    checked_outer: int

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def to_dict(self) -> dict:
        w = None if self.witness is None else [self.witness.real, self.witness.imag]
        return {"status": self.status, "witness": w,
                "checked_inner": self.checked_inner, "checked_outer": self.checked_outer}


def _first_violation(sampler, chain, test, samples, seed, n_jobs):
    def run(rng, size, index):
        w = sampler(rng, size)
        with np.errstate(all="ignore"):
            z = apply_chain(chain, w, "forward", check=False)
        z = z[np.isfinite(z)]
        bad = ~np.asarray(test(z), dtype=bool)
        return len(z), (complex(z[bad][0]) if bad.any() else None)

    results = _rng.map_blocks(run, samples, seed, n_jobs)
    checked = sum(r[0] for r in results)
    witness = next((r[1] for r in results if r[1] is not None), None)
    return checked, witness


def containment_audit(inner: ModelDomain, outer: ModelDomain, samples: int = 10_000,
                      seed: int = 0, n_jobs: int = 1):
    """Monte-Carlo test of ``inner ⊆ outer``; returns ``(checked, witness)``."""
    if samples < 2:
        raise SamplingError("need at least two samples")
    return _first_violation(lambda rng, n: sample_domain(inner, rng, n), inner.riemann,
                            outer.contains, samples, seed, n_jobs)


def sandwich_check(inner: ModelDomain, outer: ModelDomain, end: BoundaryEnd | None = None,
                   R: float = 1.0, samples: int = 10_000, seed: int = 0,
                   n_jobs: int = 1) -> SandwichVerdict:
    """Audit ``E_outer(end, R) ⊂ inner ⊆ outer`` by sampling.

    Points of the horodisk are drawn uniformly plus densely near the marked
    end and tested for membership in ``inner``; then points of ``inner`` are
    tested for membership in ``outer``.  The first counterexample found is
    returned as the witness.
    """
    if not (R > 0 and math.isfinite(R)) or samples < 2:
        raise SamplingError("degenerate sampling region (need R > 0 and samples >= 2)")
    h = Horodisk(outer, R, end)
    n_in, w_in = _first_violation(lambda rng, n: sample_horodisk(h, rng, n), outer.riemann,
                                  inner.contains, samples, seed, n_jobs)
    if n_in == 0:
        raise SamplingError("horodisk sampling produced no usable points")
    if w_in is not None:
        return SandwichVerdict("fails_inner", w_in, n_in, 0)
    n_out, w_out = containment_audit(inner, outer, samples, seed + 1, n_jobs)
    if w_out is not None:
        return SandwichVerdict("fails_outer", w_out, n_in, n_out)
    return SandwichVerdict("holds", None, n_in, n_out)

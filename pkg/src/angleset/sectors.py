"""Geodesics, hyperbolic sectors, half-components and A-sets.

A geodesic of a model domain is stored as a disk automorphism ``M`` together
with a starting time: ``gamma(t) = f(M(tanh t))`` for ``t >= t0`` where ``f`` is
the domain's Riemann map.  Composing ``f^-1``, ``M^-1`` and the inverse Cayley
map ``w -> (1 + w)/(1 - w)`` *straightens* the domain to the right half-plane
with ``gamma(t) = exp(2t)``; every predicate in this module is evaluated in
those coordinates.

Right and left of a geodesic follow the forward tangent: a point is on the
``plus`` side when it lies to the right of the direction of travel, which in
straightened coordinates means ``Im u < 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import INV_CAYLEY, BoundaryEnd, ModelDomain
from .geometry import (
    ConformalChain,
    DomainError,
    apply_chain,
    hyperbolic_distance_disk,
    hyperbolic_distance_halfplane,
    moebius,
)

__all__ = [
    "Geodesic",
    "HyperbolicSector",
    "ASetSpec",
    "ExhaustVerdict",
    "amplitude_R",
    "beta_from_amplitude",
    "distance_to_geodesic",
    "straight_distance",
    "sector_contains",
    "half_component",
    "aset_case",
    "aset_contains",
    "exhausts",
]

CLOSED_TOL = 1e-12
ON_TOL = 1e-12
_GOLD = (math.sqrt(5) - 1) / 2


def _three_point(z1, z2, z3) -> np.ndarray:
    """Matrix of the Moebius map sending ``z1, z2, z3`` to ``0, inf, 1``."""
    return np.array([[z3 - z2, -z1 * (z3 - z2)], [z3 - z1, -z2 * (z3 - z1)]], dtype=complex)


@dataclass(frozen=True)
class Geodesic:
    """Unit-speed geodesic ``t -> f(M(tanh t))`` of a model domain.

    Parameters
    ----------
    domain : ModelDomain
    coeffs : tuple of 4 complex
        Coefficients ``(a, b, c, d)`` of the disk automorphism
        ``M(w) = (a w + b) / (c w + d)``.
    t0 : float
        Start of the parameter range; ``-inf`` for a full geodesic.
    """

    domain: ModelDomain
    coeffs: tuple
    t0: float = 0.0
    _straight: ConformalChain = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        a, b, c, d = self.coeffs
        m_inv = moebius(d, -b, -c, a)
        chain = self.domain.riemann.inverse().then([m_inv, INV_CAYLEY]).simplified()
        object.__setattr__(self, "_straight", chain)

    # -- constructors ---------------------------------------------------
    @classmethod
    def ray(cls, domain: ModelDomain, start: complex,
            end: BoundaryEnd | complex | None = None) -> "Geodesic":
        """Geodesic ray from ``start`` to a boundary end (default: the marked end).

        ``end`` may also be given directly as a point of the unit circle.
        """
        w0 = complex(domain.to_disk(start))
        sigma = _end_on_circle(domain, end)
        lam = (sigma - w0) / (1 - w0.conjugate() * sigma)
        return cls(domain, (lam, w0, w0.conjugate() * lam, 1 + 0j), 0.0)

    @classmethod
    def line(cls, domain: ModelDomain, tail, head=None) -> "Geodesic":
        """Full geodesic from boundary end ``tail`` to ``head`` (default: marked end)."""
        a = _end_on_circle(domain, tail)
        b = _end_on_circle(domain, head)
        if abs(a - b) < 1e-14:
            raise ValueError("geodesic ends must differ")
        # third point: middle of the counter-clockwise arc from b to a
        span = (np.angle(a) - np.angle(b)) % (2 * math.pi)
        c = np.exp(1j * (np.angle(b) + span / 2))
        src = _three_point(-1, 1, 1j)
        dst = _three_point(a, b, c)
        m = np.linalg.solve(dst, src)
        m = m / np.sqrt(np.linalg.det(m))
        return cls(domain, tuple(complex(x) for x in m.ravel()), -math.inf)

    def transported(self, domain: ModelDomain) -> "Geodesic":
        """The same disk geodesic pushed into another domain's Riemann map."""
        return Geodesic(domain, self.coeffs, self.t0)

    # -- evaluation -----------------------------------------------------
    def disk_point(self, t):
        a, b, c, d = self.coeffs
        w = np.tanh(np.asarray(t, dtype=float)).astype(complex)
        return (a * w + b) / (c * w + d)

    def __call__(self, t):
        return self.domain.from_disk(self.disk_point(t), check=False)

    def straighten(self, z):
        """Straightened coordinate ``u`` with ``gamma(t) = exp(2t)``."""
        if not np.all(self.domain.contains(z)):
            raise DomainError("point outside the geodesic's domain")
        with np.errstate(divide="ignore", invalid="ignore"):
            return apply_chain(self._straight, z, check=False)

    @property
    def forward_end(self) -> complex:
        """Forward end as a point of the unit circle."""
        a, b, c, d = self.coeffs
        return complex((a + b) / (c + d))

    @property
    def backward_end(self) -> complex | None:
        if self.t0 > -math.inf:
            return None
        a, b, c, d = self.coeffs
        return complex((-a + b) / (-c + d))

    @property
    def start(self) -> complex | None:
        return None if self.t0 == -math.inf else complex(self(self.t0))

    @property
    def t_range(self) -> tuple[float, float]:
        return (self.t0, math.inf)

    @property
    def r0(self) -> float:
        """Straightened modulus of the starting point, 0 for a full geodesic."""
        return math.exp(2 * self.t0)


def _end_on_circle(domain: ModelDomain, end) -> complex:
    if end is None:
        return domain.sigma
    if isinstance(end, BoundaryEnd):
        return domain.end_to_disk(end)
    end = complex(end)
    if not math.isclose(abs(end), 1.0, abs_tol=1e-12):
        raise ValueError("disk ends must lie on the unit circle")
    return end / abs(end)


# ---------------------------------------------------------------------------
# amplitude


def amplitude_R(theta):
    """Hyperbolic amplitude ``arctanh|tan(theta/2)|`` of a Euclidean half-angle.

    Equals ``k_H(1, exp(i theta))``.

    Raises
    ------
    DomainError
        If ``|theta| >= pi/2``.
    """
    th = np.asarray(theta, dtype=float)
    if np.any(np.abs(th) >= math.pi / 2) or np.any(~np.isfinite(th)):
        raise DomainError("amplitude_R needs |theta| < pi/2")
    out = np.arctanh(np.abs(np.tan(th / 2)))
    return float(out) if out.ndim == 0 else out


def beta_from_amplitude(r0: float, R):
    """Opening angle ``beta`` with ``k_H(r0, r0 exp(i beta)) = R``.

    Independent of ``r0`` by scaling invariance; equals ``2 arctan(tanh R)``.
    """
    if not r0 > 0:
        raise ValueError("r0 must be positive")
    R = np.asarray(R, dtype=float)
    if np.any(R < 0):
        raise ValueError("amplitude must be non-negative")
    out = 2 * np.arctan(np.tanh(R))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# distance to a geodesic


def straight_distance(u, r0: float):
    """Closed-form ``k_H(u, [r0, inf))`` for ``u`` in the right half-plane."""
    u = np.asarray(u, dtype=complex)
    ang = np.abs(np.angle(u))
    along = np.arctanh(np.minimum(np.tan(ang / 2), 1.0))
    if r0 <= 0:
        return along
    with np.errstate(invalid="ignore"):
        near = hyperbolic_distance_halfplane(np.full(u.shape, r0, dtype=complex), u) \
            if u.ndim else hyperbolic_distance_halfplane(complex(r0), complex(u))
    return np.where(np.abs(u) >= r0, along, near)


def distance_to_geodesic(domain: ModelDomain, z, gamma: Geodesic):
    """``inf_t k(z, gamma(t))`` by coarse bracketing and golden-section search.

    The search runs over ``x = 2t`` in straightened coordinates, where
    ``t -> k(z, gamma(t))`` is unimodal.
    """
    if domain is not gamma.domain and domain != gamma.domain:
        gamma = gamma.transported(domain)
    u = np.atleast_1d(gamma.straighten(z)).astype(complex)
    lo_bound = 2 * gamma.t0
    centre = np.log(np.abs(u))
    grid = centre[:, None] + np.linspace(-12.0, 12.0, 65)[None, :]
    grid = np.maximum(grid, lo_bound)

    def k(x, uu):
        return hyperbolic_distance_halfplane(np.exp(x).astype(complex), uu)

    vals = k(grid, u[:, None])
    j = np.argmin(vals, axis=1)
    rows = np.arange(len(u))
    a = grid[rows, np.maximum(j - 1, 0)]
    b = grid[rows, np.minimum(j + 1, grid.shape[1] - 1)]
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = k(c, u), k(d, u)
    for _ in range(80):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = b - _GOLD * (b - a)
        d_new = a + _GOLD * (b - a)
        c, d = c_new, d_new
        fc, fd = k(c, u), k(d, u)
        if np.all(b - a < 1e-12):
            break
    best = np.minimum(np.minimum(fc, fd), vals[rows, j])
    return float(best[0]) if np.ndim(z) == 0 else best


# ---------------------------------------------------------------------------
# sectors and half-components


@dataclass(frozen=True)
class HyperbolicSector:
    """Open hyperbolic neighbourhood ``{z : k(z, gamma) < R}`` of a geodesic."""

    geodesic: Geodesic
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("amplitude must be positive")

    @property
    def beta(self) -> float:
        return beta_from_amplitude(1.0, self.R)

    def contains(self, z, closed: bool = False):
        return sector_contains(self, z, closed)


def sector_contains(S: HyperbolicSector, z, closed: bool = False):
    """Sector membership through the straightened closed form.

    In straightened coordinates the sector is
    ``{|u| > r0, |arg u| < beta} ∪ {k_H(r0, u) < R}``.
    ``closed=True`` evaluates the closure with a ``1e-12`` tolerance.
    """
    g = S.geodesic
    u = np.asarray(g.straighten(z), dtype=complex)
    beta = S.beta
    ang = np.abs(np.angle(u))
    if closed:
        cone = ang <= beta + CLOSED_TOL
        if g.r0 > 0:
            cone = (np.abs(u) >= g.r0) & cone
            cone |= straight_distance(u, g.r0) <= S.R + CLOSED_TOL
    else:
        cone = ang < beta
        if g.r0 > 0:
            cone = (np.abs(u) > g.r0) & cone
            disk = hyperbolic_distance_halfplane(np.full(u.shape, g.r0, complex), u) \
                if u.ndim else hyperbolic_distance_halfplane(complex(g.r0), complex(u))
            cone = cone | (disk < S.R)
    cone = cone & np.isfinite(u)
    return bool(cone) if np.ndim(cone) == 0 else cone


def _side(u):
    im = np.asarray(u, dtype=complex).imag
    scale = np.maximum(np.abs(u), 1.0)
    return np.where(im < -ON_TOL * scale, 1, np.where(im > ON_TOL * scale, -1, 0))


def half_component(gamma: Geodesic, z):
    """``"plus"`` (right of travel), ``"minus"`` (left) or ``"on_geodesic"``."""
    s = _side(gamma.straighten(z))
    names = np.array(["on_geodesic", "plus", "minus"])
    out = names[s]
    return str(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# A-sets

_CASE_TAGS = ("i", "ii", "iii", "iv", "v", "vi")


def aset_case(theta1: float, theta2: float, tol: float = 1e-12) -> str:
    """Which of the six A-set cases applies to ``[theta1, theta2]``."""
    if not 0 < theta1 <= theta2 < math.pi:
        raise ValueError("need 0 < theta1 <= theta2 < pi")
    half = math.pi / 2
    if abs(theta1 + theta2 - math.pi) <= tol:
        return "iii"
    if theta2 < half - tol:
        return "i"
    if theta1 > half + tol:
        return "ii"
    if abs(theta2 - half) <= tol:
        return "iv"
    if abs(theta1 - half) <= tol:
        return "v"
    return "vi"


@dataclass(frozen=True)
class ASetSpec:
    """The A-set ``A(gamma, theta1, theta2)``; ``case_tag`` is derived."""

    geodesic: Geodesic
    theta1: float
    theta2: float

    def __post_init__(self):
        aset_case(self.theta1, self.theta2)

    @property
    def case_tag(self) -> str:
        return aset_case(self.theta1, self.theta2)

    @property
    def radii(self) -> tuple[float, float]:
        return (amplitude_R(math.pi / 2 - self.theta1), amplitude_R(math.pi / 2 - self.theta2))

    def contains(self, z):
        return aset_contains(self, z)


def aset_contains(spec: ASetSpec, z):
    """Membership in the closed A-set (the marked end itself excluded).

    Sector boundaries count as inside; the geodesic counts as inside every
    half-component whose closure reaches it.
    """
    g = spec.geodesic
    u = np.asarray(g.straighten(z), dtype=complex)
    d = straight_distance(u, g.r0)
    side = _side(u)
    plus = side >= 0
    minus = side <= 0
    R1, R2 = spec.radii
    tol = CLOSED_TOL
    case = spec.case_tag
    if case == "iii":
        out = d <= R1 + tol
    elif case == "i":
        out = (d >= R2 - tol) & (d <= R1 + tol) & plus
    elif case == "ii":
        out = (d >= R1 - tol) & (d <= R2 + tol) & minus
    elif case == "iv":
        out = (d <= R1 + tol) & plus
    elif case == "v":
        out = (d <= R2 + tol) & minus
    else:
        out = ((d <= R1 + tol) & plus) | ((d <= R2 + tol) & minus)
    out = out & np.isfinite(u)
    return bool(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# exhaustion


@dataclass
class ExhaustVerdict:
    """Outcome of :func:`exhausts`.

    ``status`` is ``"exhausts"``, ``"fails_containment"`` or ``"fails_filling"``.
    For containment failures ``omega`` is the offending pair and ``witness``
    the first tail point outside; for filling failures ``theta`` is the empty
    band centre and ``witness_gap`` the half-width ``eps`` tested.
    """

    status: str
    omega: tuple[float, float] | None = None
    witness: complex | None = None
    theta: float | None = None
    witness_gap: float | None = None
    eps_grid: float = 0.05
    eps: float = 0.05
    tail_start: int = 0

    @property
    def passed(self) -> bool:
        return self.status == "exhausts"

    def to_dict(self) -> dict:
        w = None if self.witness is None else [self.witness.real, self.witness.imag]
        return {"status": self.status, "omega": self.omega, "witness": w,
                "theta": self.theta, "witness_gap": self.witness_gap,
                "eps_grid": self.eps_grid, "eps": self.eps, "tail_start": self.tail_start}


def _clip_pair(lo, hi):
    return max(lo, 1e-6), min(hi, math.pi - 1e-6)


def containment_pairs(theta1, theta2, eps_grid):
    """``(omega1, omega2)`` pairs approaching ``(theta1, theta2)`` from outside."""
    pairs = []
    for k in (4, 2, 1):
        d = k * eps_grid
        w1 = max(theta1 - d, theta1 / 2)
        w2 = min(theta2 + d, (theta2 + math.pi) / 2)
        pairs.append((w1, w2))
    return pairs


def exhausts(points, spec: ASetSpec, eps_grid: float = 0.05, tail_start: int | None = None,
             eps: float | None = None) -> ExhaustVerdict:
    """Finite-trace evidence that a sequence exhausts ``A(gamma, theta1, theta2)``.

    Containment: every tail point lies in ``A(gamma, w1, w2)`` for a ladder of
    pairs ``w1 < theta1``, ``w2 > theta2`` shrinking to ``(theta1, theta2)``.
    Filling: for each ``theta`` on an ``eps_grid`` grid over ``[theta1, theta2]``
    some tail point lies in ``A(gamma, theta - eps, theta + eps)``.

    Parameters
    ----------
    points : array_like or SequenceTrace
    tail_start : int, optional
        First index of the tail, by default half the sequence length.
    eps : float, optional
        Band half-width for the filling check, by default ``eps_grid``.
    """
    pts = np.asarray(getattr(points, "points", points), dtype=complex).ravel()
    if not eps_grid > 0:
        raise ValueError("eps_grid must be positive")
    eps = eps_grid if eps is None else eps
    tail_start = len(pts) // 2 if tail_start is None else int(tail_start)
    tail = pts[tail_start:]
    if tail.size == 0:
        raise ValueError("empty tail: nothing to test")
    g = spec.geodesic
    base = dict(eps_grid=eps_grid, eps=eps, tail_start=tail_start)

    for w1, w2 in containment_pairs(spec.theta1, spec.theta2, eps_grid):
        inside = np.atleast_1d(aset_contains(ASetSpec(g, w1, w2), tail))
        if not inside.all():
            return ExhaustVerdict("fails_containment", omega=(w1, w2),
                                  witness=complex(tail[np.argmin(inside)]), **base)

    grid = np.arange(spec.theta1, spec.theta2, eps_grid)
    grid = np.append(grid, spec.theta2)
    for th in grid:
        lo, hi = _clip_pair(th - eps, th + eps)
        if not np.any(aset_contains(ASetSpec(g, lo, hi), tail)):
            return ExhaustVerdict("fails_filling", theta=float(th), witness_gap=eps, **base)
    return ExhaustVerdict("exhausts", **base)

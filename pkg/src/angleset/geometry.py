"""Closed-form conformal atoms and hyperbolic distances.

Everything here works on Python complex numbers or numpy complex arrays and
is vectorised; scalar in, scalar out.

Orientation and branch conventions used across the package:

* ``arg`` is the principal branch, values in ``(-pi, pi]``.
* The Cayley transform ``C(z) = (z - 1) / (z + 1)`` sends the right half-plane
  onto the unit disk and ``infinity`` onto ``1``.
* Power atoms are only ever applied on sectors symmetric about the positive
  real axis, so the principal branch is enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "BranchError",
    "ConformalAtom",
    "ConformalChain",
    "rotation",
    "scaling",
    "translation",
    "power",
    "moebius",
    "cayley",
    "log_atom",
    "exp_atom",
    "cayley_chain",
    "sector_straightening",
    "apply_chain",
    "hyperbolic_distance_disk",
    "hyperbolic_distance_halfplane",
    "unwrap_angle_diff",
]

BRANCH_SLACK = 1e-12


class DomainError(ValueError):
    """A point lies outside the domain an operation is defined on."""


class BranchError(ValueError):
    """A power or logarithm atom was evaluated off its branch sector."""


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _unwrap(out, like):
    if np.ndim(like) == 0:
        return complex(out)
    return out


def unwrap_angle_diff(a, b):
    """Return ``a - b`` reduced to ``(-pi, pi]``."""
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    d = np.mod(d + np.pi, 2 * np.pi) - np.pi
    d = np.where(d == -np.pi, np.pi, d)
    return float(d) if np.ndim(d) == 0 else d


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class ConformalAtom:
    """One elementary conformal map with an exact inverse.

    ``kind`` is one of ``rotation``, ``scaling``, ``translation``, ``power``,
    ``moebius``, ``cayley``, ``log`` and ``exp``.  ``params`` holds the real or
    complex parameters of that kind:

    ========== =========================================================
    rotation   ``(phi,)``: ``z -> exp(i phi) z``
    scaling    ``(r,)``: ``z -> r z`` with ``r > 0``
    translation ``(c,)``: ``z -> z + c``
    power      ``(p, half_angle)``: ``z -> z**p`` on ``|arg z| < half_angle``
    moebius    ``(a, b, c, d)``: ``z -> (a z + b) / (c z + d)``
    cayley     ``()``: ``z -> (z - 1) / (z + 1)``
    log        ``()``: principal logarithm on the slit plane
    exp        ``(half_width,)``: ``exp`` on ``|Im z| < half_width <= pi``
    ========== =========================================================
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        k, p = self.kind, self.params
        if k == "scaling" and not p[0] > 0:
            raise ValueError("scaling factor must be positive")
        if k == "moebius":
            a, b, c, d = p
            if abs(a * d - b * c) == 0:
                raise ValueError("moebius map needs ad - bc != 0")
        if k == "power":
            exponent, half = p
            if not exponent > 0:
                raise ValueError("power exponent must be positive")
            if not 0 < half <= np.pi or exponent * half > np.pi + BRANCH_SLACK:
                raise ValueError(
                    f"power {exponent} on half-angle {half} leaves the principal branch")
        if k == "exp" and not 0 < p[0] <= np.pi:
            raise ValueError("exp atom needs half_width in (0, pi]")
        if k not in _EVAL:
            raise ValueError(f"unknown atom kind {k!r}")

    def __call__(self, z, check: bool = True):
        z = _as_complex(z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = _EVAL[self.kind](self, z, check)
        return out

    def inverse(self) -> "ConformalAtom":
        k, p = self.kind, self.params
        if k == "rotation":
            return ConformalAtom("rotation", (-p[0],))
        if k == "scaling":
            return ConformalAtom("scaling", (1.0 / p[0],))
        if k == "translation":
            return ConformalAtom("translation", (-p[0],))
        if k == "power":
            exponent, half = p
            return ConformalAtom("power", (1.0 / exponent, min(exponent * half, np.pi)))
        if k == "moebius":
            a, b, c, d = p
            return ConformalAtom("moebius", (d, -b, -c, a))
        if k == "cayley":
            return ConformalAtom("moebius", (1, 1, -1, 1))
        if k == "log":
            return ConformalAtom("exp", (np.pi,))
        if k == "exp":
            return ConformalAtom("log", ())
        raise AssertionError(k)

    def matrix(self) -> np.ndarray | None:
        """2x2 coefficient matrix for Moebius-type atoms, ``None`` otherwise."""
        k, p = self.kind, self.params
        if k == "rotation":
            return np.array([[np.exp(1j * p[0]), 0], [0, 1]], dtype=complex)
        if k == "scaling":
            return np.array([[p[0], 0], [0, 1]], dtype=complex)
        if k == "translation":
            return np.array([[1, p[0]], [0, 1]], dtype=complex)
        if k == "moebius":
            return np.array([[p[0], p[1]], [p[2], p[3]]], dtype=complex)
        if k == "cayley":
            return np.array([[1, -1], [1, 1]], dtype=complex)
        return None


def _eval_rotation(atom, z, check):
    return np.exp(1j * atom.params[0]) * z


def _eval_scaling(atom, z, check):
    return atom.params[0] * z


def _eval_translation(atom, z, check):
    return z + atom.params[0]


def _eval_power(atom, z, check):
    exponent, half = atom.params
    if check:
        bad = (np.abs(np.angle(z)) > half + BRANCH_SLACK) & (z != 0)
        if np.any(bad):
            raise BranchError(
                f"power atom z**{exponent:g} evaluated outside |arg z| < {half:g}")
    zero = z == 0
    return np.where(zero, 0, np.exp(exponent * np.log(np.where(zero, 1, z))))


def _at_infinity(z, value, limit):
    # overflowed inputs (e.g. exp of a large real part) go to the pole's image
    inf = np.isinf(z.real) | np.isinf(z.imag)
    if not np.any(inf):
        return value
    return np.where(inf, limit, value)


def _eval_moebius(atom, z, check):
    a, b, c, d = atom.params
    with np.errstate(invalid="ignore"):
        w = (a * z + b) / (c * z + d)
    return _at_infinity(z, w, a / c if c != 0 else complex(np.inf))


def _eval_cayley(atom, z, check):
    with np.errstate(invalid="ignore"):
        w = (z - 1) / (z + 1)
    return _at_infinity(z, w, 1 + 0j)


def _eval_log(atom, z, check):
    if check and np.any((z.imag == 0) & (z.real <= 0)):
        raise BranchError("log atom evaluated on the slit (-inf, 0]")
    return np.log(z)


def _eval_exp(atom, z, check):
    if check and np.any(np.abs(z.imag) > atom.params[0] + BRANCH_SLACK):
        raise BranchError("exp atom evaluated outside its strip")
    return np.exp(z)


_EVAL = {
    "rotation": _eval_rotation,
    "scaling": _eval_scaling,
    "translation": _eval_translation,
    "power": _eval_power,
    "moebius": _eval_moebius,
    "cayley": _eval_cayley,
    "log": _eval_log,
    "exp": _eval_exp,
}


def rotation(phi: float) -> ConformalAtom:
    return ConformalAtom("rotation", (float(phi),))


def scaling(r: float) -> ConformalAtom:
    return ConformalAtom("scaling", (float(r),))


def translation(c: complex) -> ConformalAtom:
    return ConformalAtom("translation", (complex(c),))


def power(p: float, half_angle: float) -> ConformalAtom:
    return ConformalAtom("power", (float(p), float(half_angle)))


def moebius(a, b, c, d) -> ConformalAtom:
    return ConformalAtom("moebius", tuple(complex(x) for x in (a, b, c, d)))


def cayley() -> ConformalAtom:
    return ConformalAtom("cayley", ())


def log_atom() -> ConformalAtom:
    return ConformalAtom("log", ())


def exp_atom(half_width: float = np.pi) -> ConformalAtom:
    return ConformalAtom("exp", (float(half_width),))


# ---------------------------------------------------------------------------
# chains

_NAMED_DOMAINS: dict[str, Callable] = {
    "plane": lambda z: np.isfinite(z),
    "disk": lambda z: np.abs(z) < 1,
    "right_half_plane": lambda z: z.real > 0,
    "upper_half_plane": lambda z: z.imag > 0,
}


def _predicate(spec):
    if spec is None:
        return None
    if callable(spec):
        return spec
    return _NAMED_DOMAINS.get(spec)


@dataclass(frozen=True)
class ConformalChain:
    """An ordered composition of atoms, applied left to right.

    ``source`` and ``target`` name the domains the chain maps between.  They
    are either one of the names ``plane``, ``disk``, ``right_half_plane``,
    ``upper_half_plane`` or an arbitrary label; the optional ``source_test``
    and ``target_test`` membership predicates override the lookup by name.
    """

    atoms: tuple[ConformalAtom, ...] = ()
    source: str = "plane"
    target: str = "plane"
    source_test: Callable | None = field(default=None, compare=False, repr=False)
    target_test: Callable | None = field(default=None, compare=False, repr=False)

    def inverse(self) -> "ConformalChain":
        return ConformalChain(
            tuple(a.inverse() for a in reversed(self.atoms)),
            source=self.target, target=self.source,
            source_test=self.target_test, target_test=self.source_test)

    def then(self, other: "ConformalChain | Sequence[ConformalAtom]", target=None,
             target_test=None) -> "ConformalChain":
        """Compose ``other`` after this chain."""
        if isinstance(other, ConformalChain):
            return ConformalChain(self.atoms + other.atoms, self.source, other.target,
                                  self.source_test, other.target_test)
        return ConformalChain(self.atoms + tuple(other), self.source,
                              target or self.target, self.source_test, target_test)

    def simplified(self) -> "ConformalChain":
        """Fuse runs of Moebius-type atoms into single Moebius atoms.

        Fusing removes round-off from pairs like ``C`` followed by ``C^-1``,
        which otherwise lose relative precision near the boundary point ``1``.
        """
        out: list[ConformalAtom] = []
        acc = None
        for atom in self.atoms:
            m = atom.matrix()
            if m is None:
                if acc is not None:
                    out.append(_matrix_atom(acc))
                    acc = None
                out.append(atom)
            else:
                acc = m if acc is None else m @ acc
        if acc is not None:
            out.append(_matrix_atom(acc))
        return ConformalChain(tuple(out), self.source, self.target,
                              self.source_test, self.target_test)

    def __call__(self, z, check: bool = True):
        return apply_chain(self, z, "forward", check=check)


def _matrix_atom(m: np.ndarray) -> ConformalAtom:
    scale = np.max(np.abs(m))
    m = m / scale
    # snap round-off so identities stay exact
    m = np.where(np.abs(m.real) < 1e-15, 0, m.real) + 1j * np.where(
        np.abs(m.imag) < 1e-15, 0, m.imag)
    return ConformalAtom("moebius", tuple(complex(x) for x in m.ravel()))


def apply_chain(chain: ConformalChain, z, direction: str = "forward",
                check: bool = True):
    """Evaluate ``chain`` (or its inverse) at ``z``.

    With ``check`` the input is tested against the source domain (target
    domain for ``direction="inverse"``) and every power/log atom against its
    branch sector.  ``check=False`` is used for boundary extension, where
    inputs sit on the closure of the domain.
    """
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    if direction == "inverse":
        chain = chain.inverse()
    w = _as_complex(z)
    if check:
        test = chain.source_test or _predicate(chain.source)
        if test is not None and not np.all(test(w)):
            raise DomainError(f"point outside the chain's source domain {chain.source!r}")
    for atom in chain.atoms:
        w = atom(w, check=check)
    return _unwrap(w, z)


def cayley_chain() -> ConformalChain:
    """``C: right half-plane -> disk``."""
    return ConformalChain((cayley(),), source="right_half_plane", target="disk")


def sector_straightening(alpha1: float, alpha2: float) -> ConformalChain:
    """Chain ``g3 o g2 o g1`` straightening ``{-alpha1 < arg z < alpha2}``.

    ``g1`` rotates the sector to be symmetric about the positive axis, ``g2``
    raises to the power ``pi / (alpha1 + alpha2)`` and ``g3`` rotates back so
    that the positive real axis is fixed.  The image is the half-plane
    ``{-pi a1/(a1+a2) < arg w < pi a2/(a1+a2)}``.
    """
    total = alpha1 + alpha2
    if not (0 <= alpha1 <= np.pi and 0 <= alpha2 <= np.pi and total > 0):
        raise ValueError("sector needs 0 <= alpha1, alpha2 <= pi and alpha1 + alpha2 > 0")
    p = np.pi / total
    g1 = rotation((alpha1 - alpha2) / 2)
    g2 = power(p, total / 2)
    g3 = rotation(-np.pi / 2 * (alpha1 - alpha2) / total)
    lo, hi = -alpha1, alpha2
    th = np.pi * alpha1 / total

    def in_sector(w):
        a = np.angle(w)
        return (a > lo) & (a < hi) & (w != 0)

    def in_image(w):
        a = np.angle(w)
        return (a > -th) & (a < np.pi - th) & (w != 0)

    return ConformalChain((g1, g2, g3), source=f"sector({alpha1:g},{alpha2:g})",
                          target=f"half_plane(theta={th:g})",
                          source_test=in_sector, target_test=in_image)


# ---------------------------------------------------------------------------
# hyperbolic distance


def _distance_from_ratio(m2, one_minus_m2):
    # 1/2 log((1+m)/(1-m)) = log1p(m) - 1/2 log(1 - m^2)
    m = np.sqrt(m2)
    return np.log1p(m) - 0.5 * np.log(one_minus_m2)


def hyperbolic_distance_disk(z, w):
    """Hyperbolic distance in the unit disk (curvature -4 normalisation).

    ``1 - m^2`` is evaluated as ``(1-|z|^2)(1-|w|^2)/|1 - conj(z) w|^2`` which
    keeps the result accurate for points close to the unit circle.
    """
    z, w = np.broadcast_arrays(_as_complex(z), _as_complex(w))
    az, aw = np.abs(z), np.abs(w)
    if np.any(az >= 1) or np.any(aw >= 1):
        raise DomainError("hyperbolic_distance_disk needs |z| < 1 and |w| < 1")
    den = np.abs(1 - np.conj(z) * w) ** 2
    m2 = np.abs(z - w) ** 2 / den
    one_minus = (1 - az) * (1 + az) * (1 - aw) * (1 + aw) / den
    d = np.maximum(_distance_from_ratio(m2, one_minus), 0.0)
    return float(d) if d.ndim == 0 else d


def hyperbolic_distance_halfplane(z, w):
    """Hyperbolic distance in the right half-plane.

    This is the disk distance pulled back through the Cayley transform; the
    pullback simplifies to ``m = |z - w| / |conj(z) + w|`` and
    ``1 - m^2 = 4 Re z Re w / |conj(z) + w|^2``.
    """
    z, w = np.broadcast_arrays(_as_complex(z), _as_complex(w))
    if np.any(z.real <= 0) or np.any(w.real <= 0):
        raise DomainError("hyperbolic_distance_halfplane needs Re z > 0 and Re w > 0")
    den = np.abs(np.conj(z) + w) ** 2
    m2 = np.abs(z - w) ** 2 / den
    one_minus = 4 * z.real * w.real / den
    d = np.maximum(_distance_from_ratio(m2, one_minus), 0.0)
    return float(d) if d.ndim == 0 else d

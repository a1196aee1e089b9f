"""Regenerate the frozen oracle values used in the tests.

Run ``python tests/oracles.py``.  Everything is computed with mpmath at 30
digits from first principles (Poisson-kernel quadrature, explicit artanh
forms), independently of the package.
"""

import mpmath as mp

mp.mp.dps = 30
pi = mp.pi


def k_half_plane(z, w):
    """Right half-plane distance ``artanh |z - w| / |conj(z) + w|``."""
    return mp.atanh(abs(z - w) / abs(mp.conj(z) + w))


def poisson_disk(z, t1, t2):
    r2 = abs(z) ** 2
    return mp.quad(lambda t: (1 - r2) / abs(mp.expj(t) - z) ** 2, [t1, t2]) / (2 * pi)


def poisson_upper(z, a, b):
    x, y = mp.re(z), mp.im(z)
    return mp.quad(lambda t: y / ((x - t) ** 2 + y ** 2), [a, b]) / pi


def clamped_ray_distance(z):
    """``min_{rho >= 1} k_H(z, rho)``, by bracketing the minimiser in log rho."""
    f = lambda x: k_half_plane(z, mp.e ** x)
    x = mp.findroot(lambda x: mp.diff(f, x), 0.0) if mp.diff(f, 0) < 0 else mp.mpf(0)
    return f(max(x, 0))


ORACLES = {
    "R(pi/3)": mp.atanh(mp.tan(pi / 6)),
    "R(pi/6)": mp.atanh(mp.tan(pi / 12)),
    "k_H(1, e^{i pi/3})": k_half_plane(mp.mpc(1), mp.expj(pi / 3)),
    "k_H(2e^{i pi/6}, ray)": clamped_ray_distance(2 * mp.expj(pi / 6)),
    "k_H(0.5e^{i pi/6}, ray)": clamped_ray_distance(mp.mpf("0.5") * mp.expj(pi / 6)),
    "k_D(0, 1/2)": mp.atanh(mp.mpf("0.5")),
    "omega(0.5, upper semicircle)": poisson_disk(mp.mpf("0.5"), 0, pi),
    "omega(0.3+0.4i, upper semicircle)": poisson_disk(mp.mpc("0.3", "0.4"), 0, pi),
    "omega(-0.2+0.5i, arc [1, 2.5])": poisson_disk(mp.mpc("-0.2", "0.5"), 1, mp.mpf("2.5")),
    "omega(2+i, [-1, 3], upper half-plane)": poisson_upper(mp.mpc(2, 1), -1, 3),
}

if __name__ == "__main__":
    for name, value in ORACLES.items():
        print(f"{name:40s} {mp.nstr(value, 18)}")

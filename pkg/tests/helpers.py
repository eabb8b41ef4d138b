"""Independent oracles shared by the tests.

Nothing here calls the code paths under test except where a check is
explicitly about consistency between two package routes.
"""

import math

import numpy as np
from scipy import special

FOUR_PI = 4 * math.pi


def sh_eq4(n, m, theta, phi):
    """Y_nm straight from the factorial definition with scipy's P_n^m.

    ``scipy.special.lpmv`` includes the Condon-Shortley phase.
    """
    if m < 0:
        return (-1) ** m * np.conj(sh_eq4(n, -m, theta, phi))
    norm = math.sqrt((2 * n + 1) / FOUR_PI * math.factorial(n - m) / math.factorial(n + m))
    return norm * special.lpmv(m, n, np.cos(theta)) * np.exp(1j * m * phi)


def random_real_coeffs(order, rng):
    """Coefficients of a random real band-limited function."""
    c = np.zeros((order + 1) ** 2, dtype=complex)
    for n in range(order + 1):
        c[n * (n + 1)] = rng.standard_normal()
        for m in range(1, n + 1):
            a = rng.standard_normal() + 1j * rng.standard_normal()
            c[n * (n + 1) + m] = a
            c[n * (n + 1) - m] = (-1) ** m * np.conj(a)
    return c


def fine_grid(degree):
    """Gauss-Legendre x uniform-azimuth grid built from numpy directly."""
    n_theta = degree // 2 + 1
    n_phi = degree + 1
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(np.arccos(x), phi, indexing="ij")
    w = np.outer(wx, np.full(n_phi, 2 * np.pi / n_phi))
    return tt.ravel(), pp.ravel(), w.ravel()


def oracle_sh_matrix(order, theta, phi):
    cols = []
    for n in range(order + 1):
        for m in range(-n, n + 1):
            cols.append(sh_eq4(n, m, theta, phi))
    return np.stack(cols, axis=1)


def unit_vectors(theta, phi):
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def fibonacci_directions(count, rng):
    """Near-uniform spiral point set with a random global rotation."""
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    phi = np.pi * (1 + 5**0.5) * i
    pts = np.stack([np.sqrt(1 - z * z) * np.cos(phi), np.sqrt(1 - z * z) * np.sin(phi), z], axis=1)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    pts = pts @ q.T
    return np.arccos(np.clip(pts[:, 2], -1, 1)), np.arctan2(pts[:, 1], pts[:, 0])

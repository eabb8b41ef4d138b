"""Complex spherical harmonics, linear indexing and quadrature transforms.

Conventions
-----------
* Directions are ``(theta, phi)`` with ``theta`` the inclination from the
  north pole in ``[0, pi]`` and ``phi`` the azimuth in ``[-pi, pi)``.
* ``Y_nm`` is the orthonormal complex harmonic

  .. math:: Y_{nm} = \\sqrt{\\frac{2n+1}{4\\pi}\\frac{(n-m)!}{(n+m)!}}
            P_n^m(\\cos\\theta) e^{im\\phi}

  with the Condon-Shortley phase carried by ``P_n^m``.
* Coefficients are stored in a flat vector with ``q = n(n+1) + m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeMismatchError, InvalidDegreeError, OrderOverflowError

MAX_ORDER = 10


def _check_order(order):
    if order < 0:
        raise InvalidDegreeError(f"order must be non-negative, got {order}")
    if order > MAX_ORDER:
        raise OrderOverflowError(f"order {order} exceeds the supported cap {MAX_ORDER}")


@dataclass(frozen=True)
class SphericalDirection:
    """A point on the unit sphere, inclination ``theta`` and azimuth ``phi``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi) or not math.isfinite(theta):
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", wrap_azimuth(float(self.phi)))

    def unit_vector(self):
        """Cartesian unit vector ``n(Omega)``."""
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    @classmethod
    def from_vector(cls, vec):
        """Direction of a non-zero 3-vector."""
        vec = np.asarray(vec, dtype=float)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise ValueError("cannot take the direction of a zero vector")
        x, y, z = vec / norm
        return cls(math.atan2(math.hypot(x, y), z), math.atan2(y, x))

    def angle_to(self, other):
        """Great-circle angle to another direction, radians."""
        return angle_between(self.unit_vector(), other.unit_vector())


def wrap_azimuth(phi):
    """Map an azimuth into ``[-pi, pi)``."""
    wrapped = (phi + math.pi) % (2.0 * math.pi) - math.pi
    # float rounding can land exactly on +pi
    return -math.pi if wrapped >= math.pi else wrapped


def angle_between(a, b):
    """Angle between two 3-vectors, stable near 0 and pi."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(math.atan2(np.linalg.norm(np.cross(a, b)), float(np.dot(a, b))))


def sh_index(n, m):
    """Linear index ``q = n(n+1) + m`` of the harmonic ``(n, m)``."""
    if n < 0 or abs(m) > n:
        raise InvalidDegreeError(f"invalid harmonic (n={n}, m={m})")
    return n * (n + 1) + m


def sh_degree_order(q):
    """Inverse of :func:`sh_index`: ``n = floor(sqrt(q))``, ``m = q - n(n+1)``."""
    if q < 0:
        raise InvalidDegreeError(f"linear index must be non-negative, got {q}")
    n = math.isqrt(q)
    return n, q - n * (n + 1)


def num_coeffs(order):
    return (order + 1) ** 2


def degrees_orders(order):
    """Arrays ``n`` and ``m`` for every linear index up to ``order``."""
    n = np.concatenate([np.full(2 * k + 1, k) for k in range(order + 1)])
    m = np.concatenate([np.arange(-k, k + 1) for k in range(order + 1)])
    return n, m


def normalized_legendre(order, x, sin=None):
    """Orthonormalized associated Legendre values for ``m >= 0``.

    Returns an array ``P`` of shape ``(order+1, order+1) + x.shape`` with
    ``P[n, m] = sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!) P_n^m(x)``, Condon-Shortley
    phase included, zero for ``m > n``.  Uses the sectoral seed followed by the
    standard three-term recurrence in ``n``.

    ``sin`` may pass ``sin(theta)`` directly; near the poles ``sqrt(1 - x^2)``
    rounds to zero and would drop every ``m > 0`` term.
    """
    x = np.asarray(x, dtype=float)
    if sin is None:
        s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    else:
        s = np.broadcast_to(np.asarray(sin, dtype=float), x.shape)
    out = np.zeros((order + 1, order + 1) + x.shape)
    pmm = np.full(x.shape, math.sqrt(1.0 / (4.0 * math.pi)))
    for m in range(order + 1):
        if m > 0:
            pmm = -math.sqrt((2 * m + 1) / (2 * m)) * s * pmm
        out[m, m] = pmm
        if m + 1 <= order:
            out[m + 1, m] = math.sqrt(2 * m + 3) * x * pmm
        for n in range(m + 2, order + 1):
            a = math.sqrt((4 * n * n - 1) / (n * n - m * m))
            a_prev = math.sqrt((4 * (n - 1) ** 2 - 1) / ((n - 1) ** 2 - m * m))
            out[n, m] = a * (x * out[n - 1, m] - out[n - 2, m] / a_prev)
    return out


def sh_matrix(order, theta, phi):
    """Complex SH matrix of shape ``(len(theta), (order+1)**2)``."""
    _check_order(order)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    plm = normalized_legendre(order, np.cos(theta), np.sin(theta))
    Y = np.empty((theta.size, num_coeffs(order)), dtype=complex)
    for n in range(order + 1):
        for m in range(n + 1):
            pos = plm[n, m] * np.exp(1j * m * phi)
            Y[:, n * (n + 1) + m] = pos
            if m > 0:
                Y[:, n * (n + 1) - m] = (-1) ** m * np.conj(pos)
    return Y


def eval_sh(n, m, direction):
    """Value of ``Y_nm`` at a single :class:`SphericalDirection`."""
    if n < 0 or abs(m) > n:
        raise InvalidDegreeError(f"invalid harmonic (n={n}, m={m})")
    row = sh_matrix(n, [direction.theta], [direction.phi])[0]
    return complex(row[sh_index(n, m)])


@dataclass(frozen=True)
class ShVector:
    """SH coefficient vector of a function band-limited to ``order``."""

    order: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_order(self.order)
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size != num_coeffs(self.order):
            raise ValueError(
                f"order {self.order} needs {num_coeffs(self.order)} coefficients, got {c.size}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, order):
        return cls(order, np.zeros(num_coeffs(order), dtype=complex))

    @classmethod
    def basis(cls, order, q):
        c = np.zeros(num_coeffs(order), dtype=complex)
        c[q] = 1.0
        return cls(order, c)

    def coeff(self, n, m):
        return complex(self.coeffs[sh_index(n, m)])

    def padded(self, order):
        """Zero-pad (never truncate) to a higher order."""
        if order < self.order:
            raise ValueError(f"cannot pad order {self.order} down to {order}")
        c = np.zeros(num_coeffs(order), dtype=complex)
        c[: self.coeffs.size] = self.coeffs
        return ShVector(order, c)

    def is_real_function(self, atol=1e-10):
        """True if the coefficients obey ``f_{n,-m} = (-1)^m conj(f_{nm})``."""
        return bool(np.max(np.abs(self.coeffs - real_symmetric_mirror(self.coeffs)), initial=0.0) <= atol)

    def __len__(self):
        return self.coeffs.size


def real_symmetric_mirror(coeffs):
    """Return ``g`` with ``g_{n,m} = (-1)^m conj(f_{n,-m})``.

    A vector equals its mirror exactly when it describes a real function.
    """
    coeffs = np.asarray(coeffs)
    order = math.isqrt(coeffs.size) - 1
    n, m = degrees_orders(order)
    mirror = n * (n + 1) - m
    return np.where(m % 2 == 0, 1.0, -1.0) * np.conj(coeffs[mirror])


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Legendre (in cos theta) by uniform-azimuth product grid.

    Integrates band-limited integrands exactly up to total polynomial
    ``degree``; the weights sum to ``4 pi``.
    """

    degree: int
    theta: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def gauss_legendre(cls, degree):
        if degree < 0:
            raise ValueError("grid degree must be non-negative")
        n_theta = degree // 2 + 1
        n_phi = degree + 1
        x, wx = np.polynomial.legendre.leggauss(n_theta)
        phi = -np.pi + 2.0 * np.pi * np.arange(n_phi) / n_phi
        tt, pp = np.meshgrid(np.arccos(x), phi, indexing="ij")
        ww = np.outer(wx, np.full(n_phi, 2.0 * np.pi / n_phi))
        arrays = [a.reshape(-1).copy() for a in (tt, pp, ww)]
        for a in arrays:
            a.setflags(write=False)
        return cls(degree, *arrays)

    @classmethod
    def for_order(cls, order):
        """Default grid for transforms of order ``order`` (degree ``2N+1``)."""
        return cls.gauss_legendre(2 * order + 1)

    @property
    def directions(self):
        return [SphericalDirection(t, p) for t, p in zip(self.theta, self.phi)]

    def unit_vectors(self):
        st = np.sin(self.theta)
        return np.stack([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)], axis=1)

    def integrate(self, values):
        """Quadrature of samples (last axis runs over grid points)."""
        return np.asarray(values) @ self.weights

    def __len__(self):
        return self.weights.size


def forward_sht(samples, order, grid):
    """Coefficients ``f_q = sum_i w_i f(Omega_i) conj(Y_q(Omega_i))``."""
    if grid.degree < 2 * order:
        raise DegreeMismatchError(
            f"grid of degree {grid.degree} cannot transform order {order} (needs >= {2 * order})"
        )
    samples = np.asarray(samples)
    if samples.shape != (len(grid),):
        raise ValueError(f"expected {len(grid)} samples, got shape {samples.shape}")
    Y = sh_matrix(order, grid.theta, grid.phi)
    return ShVector(order, Y.conj().T @ (grid.weights * samples))


def evaluate(f, theta, phi):
    """Synthesize ``sum_q f_q Y_q`` at the given directions."""
    return sh_matrix(f.order, theta, phi) @ f.coeffs


def inverse_sht(f, grid):
    return evaluate(f, grid.theta, grid.phi)


def inner_product(f, g):
    """``g^H f``, i.e. the sphere integral of ``f conj(g)``.

    The shorter vector is zero-padded.
    """
    n = max(f.coeffs.size, g.coeffs.size)
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    a[: f.coeffs.size] = f.coeffs
    b[: g.coeffs.size] = g.coeffs
    return complex(np.vdot(b, a))

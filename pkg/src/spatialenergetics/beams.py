"""Beam patterns: presets, steering, velocity patterns and pattern scalars.

An axisymmetric profile is stored as the plain ``m = 0`` SH coefficients
``c_n`` of the pattern pointing at the north pole, so that
``c(theta) = sum_n c_n sqrt((2n+1)/(4 pi)) P_n(cos theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .coupling import velocity_coupling_matrices
from .errors import DesignError, ValidationError, ZeroPatternError
from .sh_core import (
    ShVector,
    SphericalDirection,
    evaluate,
    inner_product,
    num_coeffs,
    sh_matrix,
)

NORTH = SphericalDirection(0.0, 0.0)


@dataclass(frozen=True)
class AxisymmetricProfile:
    """Rotationally symmetric pattern about +z given by ``N+1`` real coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.coeffs)
        if np.iscomplexobj(raw):
            if np.any(raw.imag != 0):
                raise ValidationError("axisymmetric profile coefficients must be real")
            raw = raw.real
        c = np.array(raw, dtype=float).reshape(-1)
        if c.size == 0:
            raise ValidationError("profile needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValidationError("profile coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self):
        return self.coeffs.size - 1

    def value(self, alpha):
        """Pattern value at angle ``alpha`` from the look direction."""
        alpha = np.asarray(alpha, dtype=float)
        n = np.arange(self.coeffs.size)
        legendre = np.polynomial.legendre.legvander(np.cos(alpha).reshape(-1), self.order)
        out = legendre @ (self.coeffs * np.sqrt((2 * n + 1) / (4 * math.pi)))
        return float(out[0]) if alpha.ndim == 0 else out.reshape(alpha.shape)

    def is_max_unity(self, atol=1e-12):
        return abs(self.value(0.0) - 1.0) <= atol

    def as_shvector(self):
        """Unsteered coefficients (only ``m = 0`` entries populated)."""
        w = np.zeros(num_coeffs(self.order), dtype=complex)
        for n, cn in enumerate(self.coeffs):
            w[n * (n + 1)] = cn
        return ShVector(self.order, w)


def preset_profile(kind, order=None):
    """Max-unity preset profiles.

    ``omni`` is order 0, ``cardioid`` is ``(1 + cos theta)/2`` of order 1 and
    ``hypercardioid`` is the maximum-directivity pattern of any order ``N >= 1``,
    whose Legendre-series weights are proportional to ``2n + 1``.
    """
    if kind == "omni":
        if order not in (None, 0):
            raise DesignError(f"omni is only defined for order 0, got {order}")
        return AxisymmetricProfile([math.sqrt(4 * math.pi)])
    if kind == "cardioid":
        if order not in (None, 1):
            raise DesignError(f"cardioid is only defined for order 1, got {order}")
        return AxisymmetricProfile([math.sqrt(math.pi), math.sqrt(math.pi / 3)])
    if kind == "hypercardioid":
        if order is None:
            order = 1
        if order < 1:
            raise DesignError(f"hypercardioid needs order >= 1, got {order}")
        n = np.arange(order + 1)
        # c_n sqrt((2n+1)/4pi) proportional to (2n+1), scaled to unity on axis
        return AxisymmetricProfile(np.sqrt(4 * math.pi) * np.sqrt(2 * n + 1) / (order + 1) ** 2)
    raise DesignError(f"unknown beam preset {kind!r}")


def steer(profile, direction):
    """Rotate an axisymmetric profile to look at ``direction``.

    ``w_nm = sqrt(4 pi / (2n+1)) c_n conj(Y_nm(direction))``.
    """
    N = profile.order
    Y = sh_matrix(N, [direction.theta], [direction.phi])[0]
    w = np.empty(num_coeffs(N), dtype=complex)
    for n, cn in enumerate(profile.coeffs):
        sl = slice(n * n, (n + 1) ** 2)
        w[sl] = math.sqrt(4 * math.pi / (2 * n + 1)) * cn * np.conj(Y[sl])
    return ShVector(N, w)


def velocity_patterns(w):
    """Coefficients of ``w(Omega) x``, ``w(Omega) y`` and ``w(Omega) z``."""
    return velocity_coupling_matrices(w.order).apply(w)


def directivity_factor(w):
    """``Q = 4 pi / (w^H w)``."""
    energy = inner_product(w, w).real
    if energy == 0.0:
        raise ZeroPatternError("directivity factor of an all-zero pattern")
    return 4 * math.pi / energy


def k_vector(w):
    """Sphere average of ``n(Omega)`` weighted by ``w^2``, as a real 3-vector."""
    wx, wy, wz = velocity_patterns(w)
    return np.array([inner_product(c, w).real for c in (wx, wy, wz)])


def k_magnitude_axisym(profile):
    """``K = c_{N+1}^T c^z_{N+1}`` using only the z velocity profile."""
    unsteered = profile.as_shvector()
    wz = velocity_coupling_matrices(profile.order).az @ unsteered.coeffs
    n = np.arange(profile.order + 2)
    cz = wz[n * (n + 1)].real
    c = np.zeros(profile.order + 2)
    c[:-1] = profile.coeffs
    return float(c @ cz)


@dataclass(frozen=True)
class Beam:
    """A real spatial filter: SH pattern coefficients plus optional provenance.

    Build with :meth:`from_profile` for axisymmetric beams or directly from
    coefficients for arbitrary real patterns.
    """

    w: ShVector
    profile: Optional[AxisymmetricProfile] = None
    steer_dir: Optional[SphericalDirection] = None
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.w.is_real_function(atol=1e-10):
            raise ValidationError("beam coefficients do not describe a real pattern")

    @classmethod
    def from_profile(cls, profile, steer_dir=None, name=None):
        direction = NORTH if steer_dir is None else steer_dir
        return cls(steer(profile, direction), profile, direction, name)

    @classmethod
    def preset(cls, kind, order=None, steer_dir=None):
        return cls.from_profile(preset_profile(kind, order), steer_dir, name=kind)

    @property
    def order(self):
        return self.w.order

    @cached_property
    def wn(self):
        """Velocity pattern matrix ``[w^x, w^y, w^z]`` of shape ``((N+2)^2, 3)``."""
        return np.stack([c.coeffs for c in velocity_patterns(self.w)], axis=1)

    def gain(self, direction):
        """Real pattern value ``w(direction)``."""
        return float(evaluate(self.w, [direction.theta], [direction.phi])[0].real)

    def directivity_factor(self):
        return directivity_factor(self.w)

    def k_vector(self):
        return k_vector(self.w)

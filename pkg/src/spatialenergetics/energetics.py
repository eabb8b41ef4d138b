"""Weighted pressure/velocity extraction and energetic estimators.

Signals follow the B-format convention: ``p`` is the pressure and ``v`` the
velocity signal vector, i.e. minus the unnormalized particle velocity, so that
a plane wave from ``Omega_l`` gives ``v = p n(Omega_l)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyInputError, OrderError, UndefinedDiffusenessError, UndefinedDoaError
from .sh_core import SphericalDirection


@dataclass(frozen=True)
class PhysicalConstants:
    """Speed of sound ``c`` (m/s) and air density ``rho0`` (kg/m^3)."""

    c: float = 343.0
    rho0: float = 1.2041

    def __post_init__(self):
        if not (self.c > 0 and self.rho0 > 0) or not (math.isfinite(self.c) and math.isfinite(self.rho0)):
            raise ValueError("speed of sound and air density must be positive and finite")

    @property
    def z0(self):
        """Characteristic impedance ``c rho0``."""
        return self.c * self.rho0


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class BFormatSample:
    p: complex
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        v = np.array(self.v, dtype=complex).reshape(3)
        v.setflags(write=False)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class SpectralMoments:
    """Frame averages ``S_pp = <|p|^2>``, ``S_vv = <v^H v>``, ``s_pv = <p* v>``."""

    s_pp: float
    s_vv: float
    s_pv: np.ndarray
    frames: int

    def __post_init__(self):
        if self.frames < 1:
            raise EmptyInputError("moments need at least one frame")
        s_pv = np.array(self.s_pv, dtype=complex).reshape(3)
        s_pv.setflags(write=False)
        object.__setattr__(self, "s_pv", s_pv)
        object.__setattr__(self, "s_pp", float(self.s_pp))
        object.__setattr__(self, "s_vv", float(self.s_vv))

    @classmethod
    def combine(cls, parts):
        """Frame-weighted mean of partial averages over disjoint frame sets."""
        parts = list(parts)
        if not parts:
            raise EmptyInputError("nothing to combine")
        total = sum(p.frames for p in parts)
        return cls(
            sum(p.s_pp * p.frames for p in parts) / total,
            sum(p.s_vv * p.frames for p in parts) / total,
            sum(p.s_pv * p.frames for p in parts) / total,
            total,
        )


@dataclass(frozen=True)
class EnergeticEstimate:
    """Active intensity (3-vector), energy density and diffuseness.

    ``doa`` is the direction of ``-intensity``; it is ``None`` when the
    intensity vanishes.
    """

    intensity: np.ndarray
    energy: float
    diffuseness: float
    doa: Optional[SphericalDirection]
    moments: Optional[SpectralMoments] = None

    def to_dict(self):
        out = {
            "intensity": [float(x) for x in self.intensity],
            "energy": float(self.energy),
            "diffuseness": float(self.diffuseness),
            "doa": None if self.doa is None else {"theta": self.doa.theta, "phi": self.doa.phi},
        }
        if self.moments is not None:
            out["frames"] = self.moments.frames
        return out


def weighted_signals(a, beam):
    """Project one order-``N+1`` coefficient frame onto a beam and its velocity patterns."""
    p, v = weighted_signals_batch(np.asarray(a.coeffs)[None, :], beam, a.order)
    return BFormatSample(p[0], v[0])


def weighted_signals_batch(frames, beam, order=None):
    """Vectorized :func:`weighted_signals` over a ``(frames, (N+2)^2)`` array.

    Returns ``p`` of shape ``(M,)`` and ``v`` of shape ``(M, 3)``.
    """
    frames = np.asarray(frames)
    if order is None:
        order = math.isqrt(frames.shape[-1]) - 1
    if order != beam.order + 1 or frames.shape[-1] != (order + 1) ** 2:
        raise OrderError(
            f"input of order {order} cannot be weighted by a beam of order {beam.order} "
            f"(expected order {beam.order + 1})"
        )
    w = beam.w.padded(order).coeffs
    # p_w = w^H a and v_w = [w^x, w^y, w^z]^H a for real patterns
    p = frames @ w.conj()
    v = frames @ beam.wn.conj()
    return p, v


def _estimate(s_pp, s_vv, s_pv, consts, moments=None):
    flow = np.real(s_pv)
    intensity = -flow / (2 * consts.z0)
    total = s_pp + s_vv
    energy = total / (4 * consts.rho0 * consts.c**2)
    doa = None if not np.any(intensity) else doa_from_intensity(intensity)
    if total <= 0.0:
        partial = EnergeticEstimate(intensity, energy, float("nan"), None, moments)
        raise UndefinedDiffusenessError("diffuseness is undefined for a field with zero energy", partial)
    # Cauchy-Schwarz bounds the ratio by 1; clip only rounding
    diffuseness = min(1.0, max(0.0, 1.0 - 2.0 * float(np.linalg.norm(flow)) / total))
    return EnergeticEstimate(intensity, energy, diffuseness, doa, moments)


def instantaneous_energetics(sample, consts=DEFAULT_CONSTANTS):
    """Intensity, energy density and diffuseness of a single frame."""
    p, v = sample.p, sample.v
    return _estimate(float(_power(p)), float(np.sum(_power(v))), np.conj(p) * v, consts)


def _power(z):
    z = np.asarray(z)
    return z.real**2 + z.imag**2


def moments_from_signals(p, v):
    """Averages over arrays ``p (M,)`` and ``v (M, 3)``."""
    p = np.asarray(p)
    v = np.asarray(v)
    if p.size == 0:
        raise EmptyInputError("cannot average zero frames")
    return SpectralMoments(
        float(np.mean(_power(p))),
        float(np.mean(np.sum(_power(v), axis=1))),
        np.mean(np.conj(p)[:, None] * v, axis=0),
        p.size,
    )


def accumulate_moments(frames: Sequence[BFormatSample]):
    """Arithmetic means of ``|p|^2``, ``v^H v`` and ``p* v`` over frames."""
    frames = list(frames)
    if not frames:
        raise EmptyInputError("cannot average zero frames")
    return moments_from_signals(np.array([f.p for f in frames]), np.array([f.v for f in frames]))


def statistical_energetics(m, consts=DEFAULT_CONSTANTS):
    """Expectation-based intensity, energy density and diffuseness."""
    return _estimate(m.s_pp, m.s_vv, m.s_pv, consts, m)


def doa_from_intensity(intensity):
    """Direction of arrival, i.e. the direction of ``-intensity``."""
    i = np.asarray(intensity, dtype=float)
    if not np.any(i):
        raise UndefinedDoaError("DOA is undefined for a zero intensity vector")
    return SphericalDirection.from_vector(-i)

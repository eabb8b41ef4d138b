"""Closed-form weighted energetics for plane-wave, diffuse and mixed fields."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .beams import directivity_factor, k_magnitude_axisym
from .energetics import DEFAULT_CONSTANTS, SpectralMoments
from .errors import UndefinedBiasError
from .sh_core import SphericalDirection, angle_between

# Beam gains below this are treated as an exact null.
NULL_GAIN = 1e-12


@dataclass(frozen=True)
class MixtureParams:
    """One plane wave of PSD ``p_pw`` from ``doa`` plus diffuse PSD ``p_df``."""

    p_pw: float
    p_df: float
    doa: SphericalDirection

    def __post_init__(self):
        if self.p_pw < 0 or self.p_df < 0:
            raise ValueError("powers must be non-negative")
        if self.p_pw == 0 and self.p_df == 0:
            raise ValueError("at least one power component must be non-zero")

    @property
    def ddr(self):
        """Direct-to-diffuse ratio; ``inf`` without a diffuse field."""
        return math.inf if self.p_df == 0 else self.p_pw / self.p_df


@dataclass(frozen=True)
class ReferencePrediction:
    intensity: np.ndarray
    energy: float
    diffuseness: float
    bias: Optional[float] = None
    degenerate: bool = False
    unweighted: Optional["ReferencePrediction"] = None

    @property
    def doa(self):
        if not np.any(self.intensity):
            return None
        return SphericalDirection.from_vector(-self.intensity)


def _plane_gain(beam, doa):
    g = beam.gain(doa)
    return 0.0 if abs(g) <= NULL_GAIN else g


def predict_plane_wave(p_pw, doa, beam, consts=DEFAULT_CONSTANTS):
    """Single plane wave seen through ``beam``.

    Intensity and energy scale by ``w^2(doa)``; diffuseness stays 0.  A plane
    wave in a null of the beam yields all zeros with ``degenerate=True``.
    """
    g2 = _plane_gain(beam, doa) ** 2
    n = doa.unit_vector()
    intensity = -g2 * p_pw / (2 * consts.z0) * n
    energy = g2 * p_pw / (2 * consts.rho0 * consts.c**2)
    degenerate = g2 == 0.0
    return ReferencePrediction(intensity, energy, 0.0, None if degenerate else 0.0, degenerate)


def predict_diffuse(p_df, beam, consts=DEFAULT_CONSTANTS):
    """Isotropic diffuse field of PSD ``p_df`` seen through ``beam``."""
    Q = beam.directivity_factor()
    k = beam.k_vector()
    intensity = -p_df / (8 * math.pi * consts.z0) * k
    energy = p_df / (2 * consts.rho0 * consts.c**2 * Q)
    diffuseness = 1.0 - Q / (4 * math.pi) * float(np.linalg.norm(k))
    return ReferencePrediction(intensity, energy, diffuseness)


def _unweighted_mixture(params, consts):
    n = params.doa.unit_vector()
    intensity = -params.p_pw / (2 * consts.z0) * n
    energy = (params.p_pw + params.p_df) / (2 * consts.rho0 * consts.c**2)
    # 1 / (1 + DDR), written to stay finite for p_df == 0
    diffuseness = params.p_df / (params.p_pw + params.p_df)
    bias = 0.0 if params.p_pw > 0 else None
    return ReferencePrediction(intensity, energy, diffuseness, bias)


def predict_mixture(params, beam, consts=DEFAULT_CONSTANTS):
    """Plane wave plus uncorrelated diffuse field seen through ``beam``.

    ``bias`` is the angle between the predicted DOA and the plane-wave DOA.
    The unweighted mixture result is attached as ``unweighted``.
    """
    unweighted = _unweighted_mixture(params, consts)
    if params.p_df == 0:
        pw = predict_plane_wave(params.p_pw, params.doa, beam, consts)
        return ReferencePrediction(pw.intensity, pw.energy, pw.diffuseness, pw.bias, pw.degenerate, unweighted)
    if params.p_pw == 0:
        df = predict_diffuse(params.p_df, beam, consts)
        return ReferencePrediction(df.intensity, df.energy, df.diffuseness, None, False, unweighted)

    Q = beam.directivity_factor()
    k = beam.k_vector()
    g2 = _plane_gain(beam, params.doa) ** 2
    n = params.doa.unit_vector()
    flow = g2 * params.p_pw * n + params.p_df / (4 * math.pi) * k
    intensity = -flow / (2 * consts.z0)
    energy = (g2 * params.p_pw + params.p_df / Q) / (2 * consts.rho0 * consts.c**2)
    gamma = params.ddr
    diffuseness = 1.0 - float(np.linalg.norm(gamma * g2 * n + k / (4 * math.pi))) / (gamma * g2 + 1.0 / Q)
    bias = angle_between(flow, n) if np.any(flow) else None
    return ReferencePrediction(intensity, energy, diffuseness, bias, False, unweighted)


def exact_mixture_moments(params, beam):
    """Expected PSDs and CSD of the weighted mixture.

    ``S_pp = S_vv = w^2(doa) P_pw + P_df / Q`` and
    ``s_pv = w^2(doa) P_pw n(doa) + P_df k / (4 pi)``.
    """
    g2 = _plane_gain(beam, params.doa) ** 2
    s = g2 * params.p_pw
    s_pv = g2 * params.p_pw * params.doa.unit_vector()
    if params.p_df:
        s += params.p_df / beam.directivity_factor()
        s_pv = s_pv + params.p_df / (4 * math.pi) * beam.k_vector()
    return SpectralMoments(s, s, s_pv.astype(complex), 1)


def _surface_terms(profile):
    Q = directivity_factor(profile.as_shvector())
    K = k_magnitude_axisym(profile)
    return Q, K


def _delta(gamma, alpha, c2, K):
    kk = K / (4 * math.pi)
    return math.sqrt(max(0.0, gamma**2 * c2**2 + kk**2 + 2 * gamma * kk * c2 * math.cos(alpha)))


def diffuseness_surface(gamma, alpha, profile):
    """Diffuseness of the mixture versus DDR ``gamma`` and beam-to-DOA angle ``alpha``."""
    Q, K = _surface_terms(profile)
    c2 = profile.value(alpha) ** 2
    if math.isinf(gamma):
        if c2 <= NULL_GAIN**2:
            return 1.0 - Q * K / (4 * math.pi)
        return 0.0
    return 1.0 - _delta(gamma, alpha, c2, K) / (gamma * c2 + 1.0 / Q)


def min_diffuseness(gamma, profile):
    """On-axis diffuseness ``psi_df,w / (Q gamma + 1)``.

    Only equal to ``diffuseness_surface(gamma, 0, profile)`` for profiles
    normalized to unity on axis; a warning is issued otherwise.
    """
    if not profile.is_max_unity(1e-10):
        warnings.warn("profile is not normalized to unity on axis; on-axis identity does not hold", stacklevel=2)
    Q, K = _surface_terms(profile)
    psi_df = 1.0 - Q * K / (4 * math.pi)
    return psi_df / (Q * gamma + 1.0)


def doa_bias(gamma, alpha, profile):
    """Angle by which the intensity DOA is pulled toward the beam axis, radians.

    ``beta = arcsin(K sin(alpha) / (4 pi Delta))``; past a right angle the
    supplementary branch is returned.
    """
    if math.isinf(gamma):
        return 0.0
    _, K = _surface_terms(profile)
    c2 = profile.value(alpha) ** 2
    delta = _delta(gamma, alpha, c2, K)
    if delta <= 0.0:
        raise UndefinedBiasError("resultant intensity vanishes; bias is undefined")
    kk = K / (4 * math.pi)
    beta = math.asin(min(1.0, max(-1.0, kk * math.sin(alpha) / delta)))
    if gamma * c2 + kk * math.cos(alpha) < 0:
        beta = math.pi - beta
    return beta

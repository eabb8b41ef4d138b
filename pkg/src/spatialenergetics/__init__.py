"""Directionally weighted acoustic intensity, energy density and diffuseness.

The sound field is described by SH coefficients of its plane-wave amplitude
density; a real spatial filter given by its own SH coefficients weights the
field before the energetic quantities are formed.
"""

__version__ = "0.1.0"

from .beams import (  # noqa: E402
    AxisymmetricProfile,
    Beam,
    directivity_factor,
    k_magnitude_axisym,
    k_vector,
    preset_profile,
    steer,
    velocity_patterns,
)
from .coupling import CouplingMatrices, gaunt, product_expand, velocity_coupling_matrices, wigner3j  # noqa: E402
from .energetics import (  # noqa: E402
    BFormatSample,
    EnergeticEstimate,
    PhysicalConstants,
    SpectralMoments,
    accumulate_moments,
    doa_from_intensity,
    instantaneous_energetics,
    statistical_energetics,
    weighted_signals,
)
from .reference import (  # noqa: E402
    MixtureParams,
    ReferencePrediction,
    diffuseness_surface,
    doa_bias,
    predict_diffuse,
    predict_mixture,
    predict_plane_wave,
)
from .scene_sim import FrameSet, PlaneWaveSource, SceneSpec, run_experiment, synthesize  # noqa: E402
from .sh_core import (  # noqa: E402
    QuadratureGrid,
    ShVector,
    SphericalDirection,
    eval_sh,
    forward_sht,
    inner_product,
    sh_index,
)

"""Monte-Carlo synthesis of SH-domain frames for plane-wave/diffuse scenes.

Each frame is one realization of the amplitude-density coefficients
``a_{N+1}``.  A plane wave contributes ``s conj(Y_q(doa))`` with ``s`` circular
complex Gaussian of variance ``psd``.  The isotropic diffuse field has
``E{a_q conj(a_q')} = P_df / (4 pi) delta_qq'``, so it is drawn as i.i.d.
circular Gaussians of that variance on every coefficient.

Randomness is keyed by ``(seed, block)`` with blocks of :data:`BLOCK_FRAMES`
frames, so the frame set does not depend on how blocks are scheduled.
"""

from __future__ import annotations

import json
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .energetics import DEFAULT_CONSTANTS, SpectralMoments, moments_from_signals, statistical_energetics
from .energetics import weighted_signals_batch
from .errors import OrderError, ValidationError
from .sh_core import MAX_ORDER, ShVector, SphericalDirection, num_coeffs, sh_matrix

BLOCK_FRAMES = 4096
GENERATOR = "numpy-Philox4x64-10/SeedSequence(seed,block)/block=4096"

SHF_MAGIC = b"SHF1"


@dataclass(frozen=True)
class PlaneWaveSource:
    doa: SphericalDirection
    psd: float

    def __post_init__(self):
        if not (self.psd >= 0) or not math.isfinite(self.psd):
            raise ValueError("plane-wave PSD must be a finite non-negative number")


@dataclass(frozen=True)
class SceneSpec:
    """Statistical scene: plane waves plus an isotropic diffuse field."""

    order: int
    waves: Tuple[PlaneWaveSource, ...] = ()
    diffuse_psd: float = 0.0
    frames: int = 10_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "waves", tuple(self.waves))
        if not 0 <= self.order <= MAX_ORDER:
            raise ValueError(f"scene order must be within [0, {MAX_ORDER}]")
        if not (self.diffuse_psd >= 0) or not math.isfinite(self.diffuse_psd):
            raise ValueError("diffuse PSD must be a finite non-negative number")
        if self.frames < 1:
            raise ValueError("a scene needs at least one frame")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.diffuse_psd == 0 and not any(w.psd > 0 for w in self.waves):
            raise ValueError("scene carries no power")

    def with_overrides(self, frames=None, seed=None):
        return SceneSpec(
            self.order,
            self.waves,
            self.diffuse_psd,
            self.frames if frames is None else frames,
            self.seed if seed is None else seed,
        )


def _block_rng(seed, block):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _circular(rng, shape, variance):
    z = rng.standard_normal(shape + (2,))
    return math.sqrt(variance / 2.0) * (z[..., 0] + 1j * z[..., 1])


def _block_sizes(frames):
    full, rest = divmod(frames, BLOCK_FRAMES)
    return [BLOCK_FRAMES] * full + ([rest] if rest else [])


def synthesize_block(spec, block):
    """Frames of block ``block`` as a ``(B, (order+1)^2)`` complex array."""
    sizes = _block_sizes(spec.frames)
    size = sizes[block]
    rng = _block_rng(spec.seed, block)
    Q = num_coeffs(spec.order)
    # draws happen even for zero powers so streams stay aligned across scenes
    out = _circular(rng, (size, Q), spec.diffuse_psd / (4 * math.pi))
    if spec.waves:
        steering = sh_matrix(
            spec.order, [w.doa.theta for w in spec.waves], [w.doa.phi for w in spec.waves]
        ).conj()
        for wave, y in zip(spec.waves, steering):
            s = _circular(rng, (size,), wave.psd)
            out += s[:, None] * y[None, :]
    return out


def iter_blocks(spec, workers=1):
    """Yield frame blocks in order, optionally synthesized on a thread pool."""
    n_blocks = len(_block_sizes(spec.frames))
    if workers <= 1:
        for b in range(n_blocks):
            yield synthesize_block(spec, b)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda b: synthesize_block(spec, b), range(n_blocks))


@dataclass(frozen=True)
class FrameSet:
    """Synthesized frames; ``coeffs`` has shape ``(frames, (order+1)^2)``."""

    order: int
    coeffs: np.ndarray = field(repr=False)
    scene: Optional[SceneSpec] = None
    generator: str = GENERATOR

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2 or c.shape[1] != num_coeffs(self.order):
            raise ValueError(f"frames must have shape (M, {num_coeffs(self.order)}), got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __len__(self):
        return self.coeffs.shape[0]

    def __getitem__(self, i):
        return ShVector(self.order, self.coeffs[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def frames(self):
        return list(self)

    def header(self):
        return {
            "order": self.order,
            "frames": len(self),
            "seed": None if self.scene is None else self.scene.seed,
            "generator": self.generator,
        }

    def to_json(self):
        data = np.stack([self.coeffs.real, self.coeffs.imag], axis=-1).tolist()
        return json.dumps({**self.header(), "data": data})

    def to_shf(self):
        """Binary form: magic, u32 header length, JSON header, little-endian f64 [re, im] data."""
        head = json.dumps(self.header()).encode()
        data = np.stack([self.coeffs.real, self.coeffs.imag], axis=-1).astype("<f8")
        return SHF_MAGIC + struct.pack("<I", len(head)) + head + data.tobytes()

    @classmethod
    def from_shf(cls, blob):
        if blob[:4] != SHF_MAGIC:
            raise ValidationError("not an .shf frame file")
        (hlen,) = struct.unpack("<I", blob[4:8])
        try:
            head = json.loads(blob[8 : 8 + hlen])
            order, frames = int(head["order"]), int(head["frames"])
        except (ValueError, KeyError, TypeError) as exc:
            raise ValidationError(f"bad .shf header: {exc}") from exc
        data = np.frombuffer(blob[8 + hlen :], dtype="<f8")
        if data.size != frames * num_coeffs(order) * 2:
            raise ValidationError("frame data length does not match the header")
        data = data.reshape(frames, num_coeffs(order), 2)
        return cls(order, data[..., 0] + 1j * data[..., 1], None, head.get("generator", GENERATOR))

    @classmethod
    def from_json(cls, text):
        """Read either a full FrameSet document or a bare list of frames."""
        try:
            doc = json.loads(text)
            data = doc["data"] if isinstance(doc, dict) else doc
            arr = np.asarray(data, dtype=float)
            if arr.ndim != 3 or arr.shape[2] != 2:
                raise ValueError("frames must be arrays of [re, im] pairs")
        except (ValueError, KeyError, TypeError) as exc:
            raise ValidationError(f"malformed frame file: {exc}") from exc
        order = math.isqrt(arr.shape[1]) - 1
        if num_coeffs(order) != arr.shape[1]:
            raise ValidationError(f"frame length {arr.shape[1]} is not a square number")
        if isinstance(doc, dict) and doc.get("order", order) != order:
            raise ValidationError("declared order does not match the frame length")
        generator = doc.get("generator", GENERATOR) if isinstance(doc, dict) else "external"
        return cls(order, arr[..., 0] + 1j * arr[..., 1], None, generator)


def synthesize(spec, workers=1):
    """Draw all frames of ``spec``; identical for every ``workers`` value."""
    return FrameSet(spec.order, np.concatenate(list(iter_blocks(spec, workers)), axis=0), spec)


def frameset_moments(frames, beam):
    """Moments of any (possibly external) frame set weighted by ``beam``."""
    p, v = weighted_signals_batch(frames.coeffs, beam, frames.order)
    return moments_from_signals(p, v)


def run_experiment(spec, beam, consts=DEFAULT_CONSTANTS, workers=1):
    """Synthesize, weight, average and estimate, streaming one block at a time."""
    if spec.order != beam.order + 1:
        raise OrderError(f"scene order {spec.order} needs a beam of order {spec.order - 1}, got {beam.order}")
    parts = []
    for block in iter_blocks(spec, workers):
        p, v = weighted_signals_batch(block, beam, spec.order)
        parts.append(moments_from_signals(p, v))
    return statistical_energetics(SpectralMoments.combine(parts), consts)

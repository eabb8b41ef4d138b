"""Pydantic models for the JSON inputs accepted by the CLI.

All models reject unknown fields.  ``load_*`` helpers turn them into the
library's domain objects and re-raise pydantic failures as
:class:`~spatialenergetics.errors.ValidationError`.
"""

from __future__ import annotations

import json
from typing import List, Literal, Optional, Union

import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .beams import AxisymmetricProfile, Beam, preset_profile
from .energetics import PhysicalConstants
from .errors import ValidationError
from .scene_sim import PlaneWaveSource, SceneSpec
from .sh_core import SphericalDirection


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DirectionModel(_Strict):
    theta: float = Field(ge=0.0, le=3.141592653589793)
    phi: float = 0.0

    def to_direction(self):
        return SphericalDirection(self.theta, self.phi)


class BeamModel(_Strict):
    """``{kind, order, steer}`` for presets or ``{coeffs, steer}`` for custom profiles.

    Custom coefficients are plain numbers or ``[re, im]`` pairs; any non-zero
    imaginary part fails the reality check.
    """

    kind: Optional[Literal["omni", "cardioid", "hypercardioid"]] = None
    order: Optional[int] = Field(default=None, ge=0)
    coeffs: Optional[List[Union[float, List[float]]]] = None
    steer: Optional[DirectionModel] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.kind is None) == (self.coeffs is None):
            raise ValueError("give exactly one of 'kind' or 'coeffs'")
        if self.coeffs is not None and self.order is not None and self.order != len(self.coeffs) - 1:
            raise ValueError("'order' disagrees with the number of coefficients")
        return self

    def to_beam(self):
        steer_dir = None if self.steer is None else self.steer.to_direction()
        if self.kind is not None:
            return Beam.from_profile(preset_profile(self.kind, self.order), steer_dir, name=self.kind)
        values = []
        for c in self.coeffs:
            if isinstance(c, list):
                if len(c) != 2:
                    raise ValidationError("complex coefficients must be [re, im] pairs")
                values.append(complex(c[0], c[1]))
            else:
                values.append(complex(c))
        return Beam.from_profile(AxisymmetricProfile(values), steer_dir, name="custom")


class WaveModel(_Strict):
    doa: DirectionModel
    psd: float = Field(ge=0.0)


class SceneModel(_Strict):
    order: Optional[int] = Field(default=None, ge=0)
    waves: List[WaveModel] = []
    diffuse_psd: float = Field(default=0.0, ge=0.0)
    frames: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0)

    def to_scene(self, default_order=None):
        order = self.order if self.order is not None else default_order
        if order is None:
            raise ValidationError("scene order missing and no beam to infer it from")
        waves = [PlaneWaveSource(w.doa.to_direction(), w.psd) for w in self.waves]
        return SceneSpec(order, tuple(waves), self.diffuse_psd, self.frames, self.seed)


class ConstantsModel(_Strict):
    c: float = Field(default=343.0, gt=0.0)
    rho0: float = Field(default=1.2041, gt=0.0)

    def to_constants(self):
        return PhysicalConstants(self.c, self.rho0)


class SweepModel(_Strict):
    """DDR values (``"inf"`` allowed) and beam-to-DOA angles in degrees."""

    gamma: List[float] = Field(min_length=1)
    alpha_deg: List[float] = Field(min_length=1)

    @model_validator(mode="after")
    def _non_negative(self):
        if any(g < 0 for g in self.gamma):
            raise ValueError("gamma values must be non-negative")
        return self


def _parse(model, data):
    try:
        return model.model_validate(data)
    except pydantic.ValidationError as exc:
        raise ValidationError(f"{model.__name__}: {exc}") from exc


def parse_json_text(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what} is not valid JSON: {exc}") from exc


def load_beam(data):
    model = _parse(BeamModel, data)
    try:
        return model.to_beam()
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from exc


def load_scene(data, default_order=None):
    model = _parse(SceneModel, data)
    try:
        return model.to_scene(default_order)
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from exc


def load_constants(data):
    return _parse(ConstantsModel, data).to_constants()


def load_sweep(data):
    return _parse(SweepModel, data)

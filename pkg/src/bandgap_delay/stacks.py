"""Layered dielectric structures and the operating points they are probed at.

All value objects are frozen dataclasses: safe to share across threads,
compared field-by-field, hashable where useful.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .units import omega_from_wavelength

# Perturbed thicknesses are floored at this fraction of nominal so a wild
# Gaussian draw can never produce a non-positive layer.
THICKNESS_FLOOR_FRACTION = 0.01


class Polarization(enum.Enum):
    P = "p"  # TM: electric field in the plane of incidence
    S = "s"  # TE: electric field perpendicular to it

    @classmethod
    def parse(cls, value: "Polarization | str") -> "Polarization":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValidationError(f"polarization must be 'p' or 's', got {value!r}") from None


def _as_index(value, what: str) -> complex:
    n = complex(value)
    if not (math.isfinite(n.real) and math.isfinite(n.imag)):
        raise ValidationError(f"{what} must be finite, got {value!r}")
    if n.real <= 0.0:
        raise ValidationError(f"{what} must have positive real part, got {value!r}")
    if n.imag < 0.0:
        raise ValidationError(f"{what} must have non-negative imaginary part (gain media unsupported), got {value!r}")
    return n


@dataclass(frozen=True)
class Layer:
    """Homogeneous slab: complex refractive index and thickness in nm."""

    refractive_index: complex
    thickness: float

    def __post_init__(self):
        object.__setattr__(self, "refractive_index", _as_index(self.refractive_index, "refractive_index"))
        d = float(self.thickness)
        if not math.isfinite(d) or d < 0.0:
            raise ValidationError(f"thickness must be finite and >= 0, got {self.thickness!r}")
        object.__setattr__(self, "thickness", d)


@dataclass(frozen=True)
class LayerStack:
    """An ordered stack of layers between two semi-infinite ambient media.

    The empty stack is legal: it is the air-reference configuration, whose
    nominal traversal length is carried in ``reference_length`` (nm).
    """

    layers: tuple[Layer, ...] = ()
    incident_medium: complex = 1.0
    exit_medium: complex = 1.0
    label: str = ""
    reference_length: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "incident_medium", _as_index(self.incident_medium, "incident_medium"))
        object.__setattr__(self, "exit_medium", _as_index(self.exit_medium, "exit_medium"))
        ref = float(self.reference_length)
        if not math.isfinite(ref) or ref < 0.0:
            raise ValidationError(f"reference_length must be finite and >= 0, got {self.reference_length!r}")
        object.__setattr__(self, "reference_length", ref)

    @property
    def total_thickness(self) -> float:
        return float(sum(layer.thickness for layer in self.layers))

    @property
    def traversal_length(self) -> float:
        """Physical length the wave crosses: layer total, or the stored
        reference length for the empty (air-reference) stack."""
        return self.total_thickness if self.layers else self.reference_length

    def index_array(self) -> np.ndarray:
        return np.array([layer.refractive_index for layer in self.layers], dtype=np.complex128)

    def thickness_array(self) -> np.ndarray:
        return np.array([layer.thickness for layer in self.layers], dtype=np.float64)

    def with_scaled_indices(self, factor: float) -> "LayerStack":
        """Every layer index multiplied by ``factor``; ambient media untouched."""
        scaled = tuple(replace(layer, refractive_index=layer.refractive_index * factor) for layer in self.layers)
        return replace(self, layers=scaled)

    def reversed(self) -> "LayerStack":
        return replace(
            self,
            layers=tuple(reversed(self.layers)),
            incident_medium=self.exit_medium,
            exit_medium=self.incident_medium,
        )


@dataclass(frozen=True)
class OperatingPoint:
    """(vacuum wavelength, angle of incidence, polarization) probe point."""

    vacuum_wavelength: float
    angle_of_incidence: float = 0.0
    polarization: Polarization = Polarization.P

    def __post_init__(self):
        lam = float(self.vacuum_wavelength)
        if not math.isfinite(lam) or lam <= 0.0:
            raise ValidationError(f"vacuum_wavelength must be finite and > 0, got {self.vacuum_wavelength!r}")
        object.__setattr__(self, "vacuum_wavelength", lam)
        theta = float(self.angle_of_incidence)
        if not math.isfinite(theta) or not (0.0 <= theta < math.pi / 2):
            raise ValidationError(f"angle_of_incidence must lie in [0, pi/2), got {self.angle_of_incidence!r}")
        object.__setattr__(self, "angle_of_incidence", theta)
        object.__setattr__(self, "polarization", Polarization.parse(self.polarization))

    @property
    def omega(self) -> float:
        """Angular frequency in rad/fs."""
        return omega_from_wavelength(self.vacuum_wavelength)

    @property
    def k0(self) -> float:
        """Vacuum wavenumber omega/c in rad/nm."""
        return 2.0 * math.pi / self.vacuum_wavelength


def build_quarter_wave_stack(
    design_wavelength: float,
    n_high: float,
    n_low: float,
    layer_count: int,
    first_layer: str = "high",
) -> LayerStack:
    """Alternating quarter-wave stack in air: layer j gets thickness
    ``design_wavelength / (4 n_j)`` so every layer has optical thickness
    design_wavelength/4."""
    if not (isinstance(layer_count, (int, np.integer)) and layer_count >= 1):
        raise ValidationError(f"layer_count must be an integer >= 1, got {layer_count!r}")
    if not (math.isfinite(design_wavelength) and design_wavelength > 0):
        raise ValidationError(f"design_wavelength must be > 0, got {design_wavelength!r}")
    for name, n in (("n_high", n_high), ("n_low", n_low)):
        if not (math.isfinite(n) and n > 0):
            raise ValidationError(f"{name} must be > 0, got {n!r}")
    first = str(first_layer).strip().lower()
    if first not in ("high", "low"):
        raise ValidationError(f"first_layer must be 'high' or 'low', got {first_layer!r}")

    pair = (n_high, n_low) if first == "high" else (n_low, n_high)
    layers = tuple(
        Layer(refractive_index=pair[j % 2], thickness=design_wavelength / (4.0 * pair[j % 2]))
        for j in range(layer_count)
    )
    label = f"qw{design_wavelength:g}nm x{layer_count} {first}-first"
    return LayerStack(layers=layers, label=label)


def perturb_thicknesses(stack: LayerStack, relative_sigma: float, seed: int) -> LayerStack:
    """Multiply every layer thickness by an independent N(1, sigma) factor.

    Deterministic for a fixed seed; indices and ambient media unchanged.
    Factors are floored at 1% of nominal so thicknesses stay positive.
    """
    if not (0.0 <= relative_sigma < 0.5):
        raise ValidationError(f"relative_sigma must lie in [0, 0.5), got {relative_sigma!r}")
    if relative_sigma == 0.0:
        return stack
    rng = np.random.default_rng(seed)
    factors = rng.normal(loc=1.0, scale=relative_sigma, size=len(stack.layers))
    factors = np.maximum(factors, THICKNESS_FLOOR_FRACTION)
    layers = tuple(
        replace(layer, thickness=layer.thickness * f) for layer, f in zip(stack.layers, factors)
    )
    return replace(stack, layers=layers)


def air_reference(stack: LayerStack) -> LayerStack:
    """The equal-length air path the stack is compared against: no layers,
    same ambient media, nominal traversal length preserved."""
    length = stack.traversal_length
    return LayerStack(
        layers=(),
        incident_medium=stack.incident_medium,
        exit_medium=stack.exit_medium,
        label=f"air reference ({length:g} nm)",
        reference_length=length,
    )


# ---------------------------------------------------------------------------
# JSON stack descriptions.
#
# Explicit form:
#   {"incident_medium": 1.0, "exit_medium": 1.0,
#    "layers": [{"n": 2.22, "d_nm": 77.93}, ...]}
# Shorthand form:
#   {"quarter_wave": {"lambda0_nm": 692, "n_high": 2.22, "n_low": 1.41,
#                     "count": 11, "first": "high"}}
# Complex indices are encoded as [re, im]; plain numbers mean lossless.
# ---------------------------------------------------------------------------

def _encode_index(n: complex):
    return n.real if n.imag == 0.0 else [n.real, n.imag]


def _decode_index(value, what: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ValidationError(f"{what} must be a number or [re, im] pair, got {value!r}")


def stack_to_dict(stack: LayerStack) -> dict:
    out = {
        "incident_medium": _encode_index(stack.incident_medium),
        "exit_medium": _encode_index(stack.exit_medium),
        "layers": [
            {"n": _encode_index(layer.refractive_index), "d_nm": layer.thickness}
            for layer in stack.layers
        ],
    }
    if stack.label:
        out["label"] = stack.label
    if stack.reference_length:
        out["reference_length_nm"] = stack.reference_length
    return out


def stack_from_dict(data: dict) -> LayerStack:
    if not isinstance(data, dict):
        raise ValidationError(f"stack description must be a JSON object, got {type(data).__name__}")
    if "quarter_wave" in data:
        qw = data["quarter_wave"]
        try:
            return build_quarter_wave_stack(
                design_wavelength=float(qw["lambda0_nm"]),
                n_high=float(qw["n_high"]),
                n_low=float(qw["n_low"]),
                layer_count=int(qw["count"]),
                first_layer=qw.get("first", "high"),
            )
        except KeyError as exc:
            raise ValidationError(f"quarter_wave shorthand missing key {exc}") from None
    if "layers" not in data:
        raise ValidationError("stack description needs either 'layers' or 'quarter_wave'")
    layers = tuple(
        Layer(refractive_index=_decode_index(entry["n"], "layer n"), thickness=float(entry["d_nm"]))
        for entry in data["layers"]
    )
    return LayerStack(
        layers=layers,
        incident_medium=_decode_index(data.get("incident_medium", 1.0), "incident_medium"),
        exit_medium=_decode_index(data.get("exit_medium", 1.0), "exit_medium"),
        label=str(data.get("label", "")),
        reference_length=float(data.get("reference_length_nm", 0.0)),
    )


def save_stack(stack: LayerStack, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(stack_to_dict(stack), fh, indent=2)
        fh.write("\n")


def load_stack(path) -> LayerStack:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return stack_from_dict(data)

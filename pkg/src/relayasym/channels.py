"""Fading-channel gain models.

Each model describes the distribution of a per-hop channel power gain:
density, complex-order moments, the pole lattice of the moment function, and
random sampling.  The supported families (Nakagami-m, Weibull, Rician, Hoyt)
all have moments that decay fast enough in the left half-plane for the
residue machinery in :mod:`relayasym.mellin` to apply; heavier-tailed models
such as log-normal are rejected outright.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ModelValidationError, PoleAtArgumentError

NAKAGAMI = "nakagami"
WEIBULL = "weibull"
RICIAN = "rician"
HOYT = "hoyt"

SUPPORTED_FAMILIES = (NAKAGAMI, WEIBULL, RICIAN, HOYT)

#: Two pole locations closer than this are treated as coincident.
POLE_MERGE_TOL = 1e-9

#: Hoyt axial ratios below this push the 2F1 argument too close to 1.
HOYT_Q_MIN = 1e-3


@dataclass(frozen=True)
class FadingModel:
    """A fading family with shape and scale parameters.

    ``shape`` is m for Nakagami/Weibull, the K factor for Rician and the
    axial ratio q for Hoyt.  ``scale`` is the theta parameter of each
    density: the mean gain is m*theta (Nakagami), theta*Gamma(1+1/m)
    (Weibull) and theta (Rician, Hoyt).
    """

    variant: str
    shape: float
    scale: float = 1.0

    @classmethod
    def nakagami(cls, m: float, theta: float = 1.0) -> "FadingModel":
        return cls(NAKAGAMI, m, theta)

    @classmethod
    def weibull(cls, m: float, theta: float = 1.0) -> "FadingModel":
        return cls(WEIBULL, m, theta)

    @classmethod
    def rician(cls, k_factor: float, theta: float = 1.0) -> "FadingModel":
        return cls(RICIAN, k_factor, theta)

    @classmethod
    def hoyt(cls, q: float, theta: float = 1.0) -> "FadingModel":
        return cls(HOYT, q, theta)

    @property
    def omega(self) -> float:
        """Exponent parameter of the unified Nakagami/Weibull density."""
        if self.variant == NAKAGAMI:
            return 1.0
        if self.variant == WEIBULL:
            return self.shape
        raise ValueError(f"omega undefined for {self.variant}")

    @property
    def nu(self) -> float:
        """Normalization of the unified Nakagami/Weibull density."""
        if self.variant == NAKAGAMI:
            return math.gamma(self.shape)
        if self.variant == WEIBULL:
            return 1.0
        raise ValueError(f"nu undefined for {self.variant}")


@dataclass(frozen=True)
class HopConfig:
    """One hop of the relay chain: fading model plus noise-scaling factor."""

    model: FadingModel
    rho: float = 1.0


@dataclass(frozen=True)
class PoleSpec:
    """A pole location with integer order; the currency of the residue engine."""

    location: complex
    order: int


def validate_model(model: FadingModel) -> None:
    """Check family and parameter ranges; raise ModelValidationError if bad."""
    if model.variant not in SUPPORTED_FAMILIES:
        raise ModelValidationError(
            f"unsupported fading family {model.variant!r}; "
            f"supported: {', '.join(SUPPORTED_FAMILIES)}"
        )
    shape, scale = model.shape, model.scale
    if not (math.isfinite(scale) and scale > 0):
        raise ModelValidationError(f"scale must be positive and finite, got {scale}")
    if not math.isfinite(shape):
        raise ModelValidationError(f"shape must be finite, got {shape}")
    if model.variant in (NAKAGAMI, WEIBULL):
        if shape <= 0:
            raise ModelValidationError(f"{model.variant} shape m={shape} out of range (m > 0)")
    elif model.variant == RICIAN:
        if shape < 0:
            raise ModelValidationError(f"rician K={shape} out of range (K >= 0)")
    else:  # hoyt
        if not (0 < shape <= 1):
            raise ModelValidationError(f"hoyt q={shape} out of range (0 < q <= 1)")
        if shape < HOYT_Q_MIN:
            raise ModelValidationError(
                f"hoyt q={shape} below {HOYT_Q_MIN}: 2F1 argument too close to 1"
            )


def _rightmost_pole(model: FadingModel) -> float:
    if model.variant in (NAKAGAMI, WEIBULL):
        return -model.shape
    return -1.0


def _pole_spacing(model: FadingModel) -> float:
    return model.shape if model.variant == WEIBULL else 1.0


def _lattice_distance(model: FadingModel, s: complex) -> float:
    """Distance from s to the nearest pole of the model's moment function."""
    r0 = _rightmost_pole(model)
    step = _pole_spacing(model)
    j = max(0.0, round((r0 - s.real) / step))
    return abs(s - (r0 - step * j))


def pdf(model: FadingModel, x: float) -> float:
    """Channel gain density at x >= 0 (zero for x < 0).

    Evaluated in log space where the density contains I0 factors, so Rician
    and Hoyt tails never overflow.
    """
    validate_model(model)
    x = float(x)
    if x < 0.0:
        return 0.0
    shape, theta = model.shape, model.scale
    if model.variant in (NAKAGAMI, WEIBULL):
        omega, nu = model.omega, model.nu
        if x == 0.0:
            if shape > 1.0:
                return 0.0
            if shape == 1.0:
                return omega / (theta * nu)
            return math.inf
        log_p = (
            math.log(omega)
            - shape * math.log(theta)
            - math.log(nu)
            + (shape - 1.0) * math.log(x)
            - (x / theta) ** omega
        )
        return math.exp(log_p)
    if model.variant == RICIAN:
        k = shape
        log_pref = math.log((k + 1.0) / theta) - k
        arg = math.sqrt(4.0 * k * (k + 1.0) * x / theta)
        return math.exp(log_pref - (k + 1.0) * x / theta + specfun.log_bessel_i0(arg))
    # hoyt
    q = shape
    q2 = q * q
    log_pref = math.log((1.0 + q2) / (2.0 * q * theta))
    decay = (1.0 + q2) ** 2 * x / (4.0 * q2 * theta)
    arg = (1.0 - q2 * q2) * x / (4.0 * q2 * theta)
    return math.exp(log_pref - decay + specfun.log_bessel_i0(arg))


def log_moment(model: FadingModel, s: complex) -> complex:
    """Principal-branch log of E[X^s]; the building block of moment products."""
    validate_model(model)
    s = complex(s)
    if _lattice_distance(model, s) < POLE_MERGE_TOL:
        raise PoleAtArgumentError(
            f"moment of {model.variant} evaluated within {POLE_MERGE_TOL} of a pole at s={s}"
        )
    shape, theta = model.shape, model.scale
    if model.variant == NAKAGAMI:
        return s * math.log(theta) + specfun.log_gamma(s + shape) - specfun.log_gamma(shape)
    if model.variant == WEIBULL:
        return s * math.log(theta) + specfun.log_gamma((s + shape) / shape)
    if model.variant == RICIAN:
        k = shape
        return (
            -k
            + s * math.log(theta / (k + 1.0))
            + specfun.log_gamma(s + 1.0)
            + cmath.log(specfun.kummer_1f1(s + 1.0, 1.0, k))
        )
    q = shape
    q2 = q * q
    z = ((1.0 - q2) / (1.0 + q2)) ** 2
    return (
        (2.0 * s + 1.0) * math.log(2.0 * q / (1.0 + q2))
        + s * math.log(theta)
        + specfun.log_gamma(s + 1.0)
        + cmath.log(specfun.gauss_2f1((s + 1.0) / 2.0, (s + 2.0) / 2.0, 1.0, z))
    )


def moment(model: FadingModel, s: complex) -> complex:
    """E[X^s] for complex s away from the pole lattice.

    The defining formulas continue meromorphically, so any non-pole point of
    the continuation is a valid argument, not just Re(s) above the rightmost
    pole.
    """
    return cmath.exp(log_moment(model, s))


def mellin_poles(model: FadingModel, re_min: float) -> list[PoleSpec]:
    """All poles of s -> E[X^s] with Re(s) >= re_min, rightmost first.

    Each entry has order 1: gamma poles are simple and the hypergeometric
    factors are entire in s.  Order aggregation across hops happens in the
    mellin module.
    """
    validate_model(model)
    r0 = _rightmost_pole(model)
    step = _pole_spacing(model)
    out: list[PoleSpec] = []
    loc = r0
    while loc >= re_min:
        out.append(PoleSpec(complex(loc), 1))
        loc -= step
    return out


def sample(model: FadingModel, rng, size: int | None = None):
    """Draw channel gains with density pdf(model, .).

    ``rng`` is either a numpy Generator or a montecarlo.RandomStream.
    Scalar draw when size is None, ndarray otherwise.
    """
    validate_model(model)
    gen = getattr(rng, "generator", rng)
    n = 1 if size is None else int(size)
    shape, theta = model.shape, model.scale
    if model.variant == NAKAGAMI:
        x = gen.gamma(shape, scale=theta, size=size)
        draws = n
    elif model.variant == WEIBULL:
        u = gen.random(size=size)
        x = theta * (-np.log1p(-u)) ** (1.0 / shape)
        draws = n
    elif model.variant == RICIAN:
        k = shape
        z1 = gen.standard_normal(size=size) + math.sqrt(2.0 * k)
        z2 = gen.standard_normal(size=size)
        x = theta / (2.0 * (k + 1.0)) * (z1 * z1 + z2 * z2)
        draws = 2 * n
    else:  # hoyt
        q2 = model.shape ** 2
        s1 = theta / (1.0 + q2)
        s2 = theta * q2 / (1.0 + q2)
        z1 = gen.standard_normal(size=size)
        z2 = gen.standard_normal(size=size)
        x = s1 * z1 * z1 + s2 * z2 * z2
        draws = 2 * n
    advance = getattr(rng, "_advance", None)
    if advance is not None:
        advance(draws)
    return x

"""Channel gain functions and random propagation-effect samplers.

Power gain between two nodes at distance r with propagation effect z is
either z / r^(2b) (unbounded, singular at r=0) or z / (1 + r^(2b)) (bounded).
The effect Z composes quasi-static multipath and shadowing:

    path loss only          Z = 1
    Nakagami-m fading       Z = alpha^2,  alpha Nakagami-m  =>  Z ~ Gamma(m, 1/m)
    log-normal shadowing    Z = exp(2 sigma_s G),  G standard normal
    both                    Z = alpha^2 exp(2 sigma_s G), independent factors
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pointprocess import Rng

__all__ = ["GainModel", "FadingModel", "gain", "sample_fading"]

_GAIN_KINDS = ("unbounded", "bounded")
_FADING_KINDS = ("none", "nakagami", "lognormal", "nakagami_lognormal")


@dataclass(frozen=True)
class GainModel:
    """kind in {unbounded, bounded}; b is the amplitude loss exponent."""

    kind: str = "unbounded"
    b: float = 2.0

    def __post_init__(self) -> None:
        if self.kind not in _GAIN_KINDS:
            raise ValueError(f"gain kind must be one of {_GAIN_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise ValueError(f"amplitude loss exponent b must be > 0, got {self.b}")


@dataclass(frozen=True)
class FadingModel:
    """kind in {none, nakagami, lognormal, nakagami_lognormal}.

    m is the Nakagami parameter (ignored unless the kind includes nakagami);
    sigma_s the shadowing strength (ignored unless the kind includes lognormal).
    """

    kind: str = "none"
    m: float = 1.0
    sigma_s: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _FADING_KINDS:
            raise ValueError(f"fading kind must be one of {_FADING_KINDS}, got {self.kind!r}")
        if "nakagami" in self.kind and not (math.isfinite(self.m) and self.m > 0):
            raise ValueError(f"Nakagami m must be > 0, got {self.m}")
        if "lognormal" in self.kind and not (math.isfinite(self.sigma_s) and self.sigma_s >= 0):
            raise ValueError(f"shadowing sigma_s must be >= 0, got {self.sigma_s}")


def gain(model: GainModel, r, z=1.0):
    """Power gain at distance r with propagation effect z.  Accepts arrays.

    The unbounded model is singular at r=0 and refuses it loudly rather than
    returning infinity; the bounded model removes the singularity.
    """
    r = np.asarray(r, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("distances must be finite and >= 0")
    if np.any(z <= 0) or not np.all(np.isfinite(z)):
        raise ValueError("propagation effect z must be finite and > 0")
    if model.kind == "unbounded":
        if np.any(r == 0):
            raise ValueError("unbounded gain is singular at r=0; use the bounded model for collocated nodes")
        out = z / r ** (2.0 * model.b)
    else:
        out = z / (1.0 + r ** (2.0 * model.b))
    return out if out.ndim else float(out)


def sample_fading(model: FadingModel, rng: Rng, size=None):
    """Draw Z for the configured fading model; scalar for size=None.

    Nakagami power draws use numpy's Gamma sampler (Marsaglia-Tsang rejection,
    valid for all m > 0 including m < 1 via boosting).
    """
    if size is None:
        return float(sample_fading(model, rng, size=1)[0])
    g = rng.generator()
    if model.kind == "none":
        return np.ones(size)
    z = None
    if "nakagami" in model.kind:
        z = g.gamma(shape=model.m, scale=1.0 / model.m, size=size)
    if "lognormal" in model.kind:
        shadow = np.exp(2.0 * model.sigma_s * g.standard_normal(size))
        z = shadow if z is None else z * shadow
    return z

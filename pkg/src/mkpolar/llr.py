"""LLR arithmetic: real-valued reference and Q-bit sign-magnitude model.

Two layers live here. :class:`Llr` and the scalar functions (``sat_add``,
``minsum2``, ``minsum3``) operate on one value at a time and are what the
reference decoder is written in. :class:`RealArith` and :class:`QuantConfig`
expose the same primitives over numpy arrays for the batched decoder.

Quantized LLRs are carried as signed integers ``(1 - 2*sign) * mag``. In that
form a sign-magnitude ``-0`` cannot be represented, which is exactly the
normalization rule the datapath follows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

# Stand-in for +infinity (shortened positions) in the real model.
REAL_SATURATION = 1.0e6


@dataclass(frozen=True)
class QuantConfig:
    """Sign-magnitude quantizer with ``q_bits`` total bits and an input gain."""

    q_bits: int = 5
    scale: float = 1.0

    def __post_init__(self):
        if self.q_bits < 2:
            raise ValueError(f"q_bits must be >= 2, got {self.q_bits}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError(f"scale must be a positive finite number, got {self.scale}")

    name = "quantized"
    dtype = np.int16

    @property
    def max_mag(self) -> int:
        return 2 ** (self.q_bits - 1) - 1

    @property
    def saturated(self) -> int:
        return self.max_mag

    # array primitives

    def channel(self, values) -> np.ndarray:
        """Quantize real channel LLRs (any shape)."""
        v = np.asarray(values, dtype=np.float64)
        if not np.all(np.isfinite(v)):
            raise ValueError("cannot quantize non-finite LLRs")
        mag = np.minimum(np.floor(np.abs(v) * self.scale + 0.5), self.max_mag)
        return np.where(v < 0, -mag, mag).astype(self.dtype)

    def add(self, a, b):
        m = self.max_mag
        return np.clip(a.astype(np.int32) + b, -m, m).astype(self.dtype)

    def cneg(self, a, bits):
        return np.where(bits.astype(bool), -a, a).astype(self.dtype)

    def minsum2(self, a, b):
        mag = np.minimum(np.abs(a), np.abs(b))
        return np.where((a < 0) ^ (b < 0), -mag, mag).astype(self.dtype)

    def minsum3(self, a, b, c):
        mag = np.minimum(np.minimum(np.abs(a), np.abs(b)), np.abs(c))
        neg = (a < 0) ^ (b < 0) ^ (c < 0)
        return np.where(neg, -mag, mag).astype(self.dtype)


class RealArith:
    """Double-precision min-sum arithmetic with ``-0.0`` folded to ``+0.0``."""

    name = "real"
    dtype = np.float64
    saturated = REAL_SATURATION

    def __repr__(self):
        return "RealArith()"

    def __eq__(self, other):
        return isinstance(other, RealArith)

    def __hash__(self):
        return hash(RealArith)

    def channel(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=np.float64)
        return v + 0.0

    def add(self, a, b):
        return a + b + 0.0

    def cneg(self, a, bits):
        return np.where(bits.astype(bool), -a, a) + 0.0

    def minsum2(self, a, b):
        mag = np.minimum(np.abs(a), np.abs(b))
        return np.where((a < 0) ^ (b < 0), -mag, mag) + 0.0

    def minsum3(self, a, b, c):
        mag = np.minimum(np.minimum(np.abs(a), np.abs(b)), np.abs(c))
        neg = (a < 0) ^ (b < 0) ^ (c < 0)
        return np.where(neg, -mag, mag) + 0.0


REAL = RealArith()

Arithmetic = Union[RealArith, QuantConfig]


def resolve_model(model: Optional[Arithmetic]) -> Arithmetic:
    if model is None or model == "real":
        return REAL
    if isinstance(model, (RealArith, QuantConfig)):
        return model
    raise TypeError(f"unknown arithmetic model {model!r}")


@dataclass(frozen=True)
class Llr:
    """A single LLR.

    ``cfg is None`` means the real model and ``value`` is a float. Otherwise
    ``value`` is the signed integer ``(1 - 2*sign) * mag`` of a Q-bit
    sign-magnitude word.
    """

    value: Union[float, int]
    cfg: Optional[QuantConfig] = None

    def __post_init__(self):
        if self.cfg is None:
            object.__setattr__(self, "value", float(self.value) + 0.0)
        else:
            v = int(self.value)
            if abs(v) > self.cfg.max_mag:
                raise ValueError(
                    f"magnitude {abs(v)} exceeds {self.cfg.max_mag} for Q={self.cfg.q_bits}"
                )
            object.__setattr__(self, "value", v)

    @classmethod
    def from_sign_mag(cls, sign: int, mag: int, cfg: QuantConfig) -> "Llr":
        return cls(-mag if sign else mag, cfg)

    @property
    def is_quantized(self) -> bool:
        return self.cfg is not None

    @property
    def sign(self) -> int:
        return 1 if self.value < 0 else 0

    @property
    def mag(self):
        return abs(self.value)

    def __int__(self):
        return int(self.value)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return f"{self.value:+d}" if self.cfg is not None else f"{self.value:+g}"


def quantize(value: float, cfg: QuantConfig) -> Llr:
    """Round half away from zero, then saturate at ``2**(Q-1) - 1``."""
    if not math.isfinite(value):
        raise ValueError(f"cannot quantize non-finite value {value}")
    mag = min(math.floor(abs(value) * cfg.scale + 0.5), cfg.max_mag)
    return Llr.from_sign_mag(1 if value < 0 else 0, mag, cfg)


def _same_model(*llrs: Llr) -> Optional[QuantConfig]:
    cfg = llrs[0].cfg
    for x in llrs[1:]:
        if x.cfg != cfg:
            raise ValueError("LLR arithmetic model mismatch")
    return cfg


def sat_add(a: Llr, b: Llr) -> Llr:
    cfg = _same_model(a, b)
    if cfg is None:
        return Llr(a.value + b.value)
    s = a.value + b.value
    return Llr(max(-cfg.max_mag, min(cfg.max_mag, s)), cfg)


def cneg(a: Llr, bit: int) -> Llr:
    """``(1 - 2*bit) * a``."""
    return Llr(-a.value if bit else a.value, a.cfg)


def minsum2(a: Llr, b: Llr) -> Llr:
    cfg = _same_model(a, b)
    mag = min(a.mag, b.mag)
    return Llr(-mag if a.sign ^ b.sign else mag, cfg)


def minsum3(a: Llr, b: Llr, c: Llr) -> Llr:
    cfg = _same_model(a, b, c)
    mag = min(a.mag, b.mag, c.mag)
    return Llr(-mag if a.sign ^ b.sign ^ c.sign else mag, cfg)


def hard_decision(a: Llr) -> int:
    """0 for ``a >= 0`` (including zero), 1 otherwise."""
    return a.sign

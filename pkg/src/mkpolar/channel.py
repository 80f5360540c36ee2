"""BPSK over AWGN, channel LLRs, and puncturing/shortening baselines.

Randomness: every stream is a ``numpy.random.Generator`` on the PCG64 bit
generator, seeded from a ``numpy.random.SeedSequence`` built from integer
entropy words (for example ``[seed, snr_index, chunk_index]``). Gaussian
samples come from ``Generator.standard_normal`` (numpy's ziggurat sampler, an
algorithm numpy keeps stable across platforms for a given bit generator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .kernels import KernelSeq, generator, mother_length
from .llr import REAL_SATURATION


def make_rng(*words: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(w) for w in words])))


def noise_variance(ebn0_db: float, rate: float) -> float:
    """sigma^2 = 1 / (2 R 10^(EbN0/10)) for unit-energy BPSK."""
    if not math.isfinite(ebn0_db):
        raise ValueError(f"Eb/N0 must be finite, got {ebn0_db}")
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    return 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))


@dataclass(frozen=True)
class ChannelConfig:
    ebn0_db: float
    rate: float
    seed: int = 0

    def __post_init__(self):
        noise_variance(self.ebn0_db, self.rate)

    @property
    def sigma2(self) -> float:
        return noise_variance(self.ebn0_db, self.rate)


def transmit(x, cfg: ChannelConfig, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """BPSK-modulate bits (0 -> +1), add noise, return LLRs ``2y/sigma^2``.

    Without an explicit ``rng`` the stream is derived from ``cfg.seed`` alone,
    so repeated calls with the same config give identical output.
    """
    if rng is None:
        rng = make_rng(cfg.seed)
    x = np.asarray(x, dtype=np.uint8)
    sigma2 = cfg.sigma2
    y = 1.0 - 2.0 * x + math.sqrt(sigma2) * rng.standard_normal(x.shape)
    return 2.0 * y / sigma2


@dataclass(frozen=True)
class RateMatchSpec:
    """Which mother-code coded positions are not transmitted."""

    mode: str
    n_bits: int
    mother_n: int
    dropped: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.mode not in ("none", "puncture", "shorten"):
            raise ValueError(f"unknown rate-matching mode {self.mode!r}")
        if self.mode == "none" and self.dropped:
            raise ValueError("mode 'none' cannot drop positions")
        if len(self.dropped) != self.mother_n - self.n_bits:
            raise ValueError("number of dropped positions must equal mother_n - n")

    @property
    def kept(self) -> np.ndarray:
        mask = np.ones(self.mother_n, dtype=bool)
        mask[list(self.dropped)] = False
        return np.nonzero(mask)[0]

    def select(self, x) -> np.ndarray:
        """Coded bits that go on the air (shape ``(..., n_bits)``)."""
        return np.asarray(x)[..., self.kept]

    def expand(self, llrs) -> np.ndarray:
        """Receiver view over the mother code: punctured -> 0, shortened -> +saturation."""
        llrs = np.asarray(llrs, dtype=np.float64)
        out = np.zeros(llrs.shape[:-1] + (self.mother_n,), dtype=np.float64)
        out[..., self.kept] = llrs
        if self.mode == "shorten":
            out[..., list(self.dropped)] = REAL_SATURATION
        return out


def _rate_match_spec(mode: str, n_bits: int) -> RateMatchSpec:
    mother = mother_length(n_bits)
    if n_bits <= 0 or mother == n_bits:
        raise ValueError(f"rate matching needs a non-power-of-two length, got {n_bits}")
    extra = mother - n_bits
    if mode == "puncture":
        dropped = tuple(range(extra))
    else:
        dropped = tuple(range(n_bits, mother))
    return RateMatchSpec(mode, n_bits, mother, dropped)


def shortening_frozen(rm: RateMatchSpec, seq: KernelSeq) -> list[int]:
    """Inputs that must be frozen for the shortened coded bits to be identically zero."""
    g = generator(seq)
    rows = np.nonzero(g[:, list(rm.dropped)].any(axis=1))[0]
    return sorted(int(i) for i in rows)


def _make_rate_matched(mode, n_bits, k_bits, design_snr_db, frames, seed, profile):
    from .construction import DEFAULT_DESIGN_SNR_DB, build_code, estimate_reliabilities

    rm = _rate_match_spec(mode, n_bits)
    if not 0 < k_bits < n_bits:
        raise ValueError(f"k must satisfy 0 < k < n, got k={k_bits}, n={n_bits}")
    seq = KernelSeq((2,) * (rm.mother_n.bit_length() - 1))
    snr = DEFAULT_DESIGN_SNR_DB if design_snr_db is None else design_snr_db
    if profile is None:
        profile = estimate_reliabilities(
            seq, snr, frames=frames, seed=seed, rate=k_bits / n_bits, rate_match=rm
        )
    forced = shortening_frozen(rm, seq) if mode == "shorten" else []
    if mode == "shorten" and len(forced) != len(rm.dropped):
        raise ValueError("shortening pattern does not map to an equal number of inputs")
    spec = build_code(seq, k_bits, profile, forced_frozen=forced, design_snr_db=snr)
    return spec, rm


def make_punctured(n_bits, k_bits, profile=None, design_snr_db=None, frames=100_000, seed=0):
    """Punctured baseline: drop the first ``N' - N`` coded bits of a 2^n mother code.

    Without ``profile`` the reliabilities are re-estimated on the punctured channel.
    """
    return _make_rate_matched("puncture", n_bits, k_bits, design_snr_db, frames, seed, profile)


def make_shortened(n_bits, k_bits, profile=None, design_snr_db=None, frames=100_000, seed=0):
    """Shortened baseline: force the last ``N' - N`` coded bits of the mother code to 0."""
    return _make_rate_matched("shorten", n_bits, k_bits, design_snr_db, frames, seed, profile)

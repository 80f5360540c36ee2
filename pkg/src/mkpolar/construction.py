"""Code construction: frozen-set selection and kernel-order search.

Bit-channel reliabilities are estimated by genie-aided Monte Carlo: the
all-zero codeword is sent over BPSK/AWGN, the SC decoder runs with every
earlier decision replaced by the true bit, and each leaf's decision is scored.
The same mechanism handles binary, ternary and mixed stages.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .channel import RateMatchSpec, make_rng, noise_variance
from .decoder import SCDecoder
from .kernels import KernelSeq, count_kernel_orders, kernel_orders

DEFAULT_DESIGN_SNR_DB = 2.0
DEFAULT_FRAMES = 100_000
MAX_KERNEL_ORDERS = 256
_CHUNK = 2000

# Kernel orders used for the preset block lengths (one outer ternary kernel,
# except N=72 which uses the order from the puncturing/shortening comparison).
PRESET_KERNELS = {
    6: KernelSeq((3, 2)),
    8: KernelSeq((2, 2, 2)),
    12: KernelSeq((3, 2, 2)),
    24: KernelSeq((3, 2, 2, 2)),
    48: KernelSeq((3, 2, 2, 2, 2)),
    64: KernelSeq((2,) * 6),
    72: KernelSeq((3, 2, 2, 2, 3)),
    96: KernelSeq((3, 2, 2, 2, 2, 2)),
    192: KernelSeq((3, 2, 2, 2, 2, 2, 2)),
}


@dataclass(frozen=True)
class CodeSpec:
    """A polar code PC(N, K) over a kernel sequence.

    ``k_bits == n_bits`` (no frozen bits) is accepted for self-tests.
    """

    n_bits: int
    k_bits: int
    seq: KernelSeq
    frozen: tuple[int, ...]
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB
    info: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.seq.n_bits != self.n_bits:
            raise ValueError(
                f"kernel order {self.seq} has length {self.seq.n_bits}, not {self.n_bits}"
            )
        if not 0 < self.k_bits <= self.n_bits:
            raise ValueError(f"k must satisfy 0 < k <= n, got k={self.k_bits}, n={self.n_bits}")
        frozen = tuple(int(i) for i in self.frozen)
        if len(set(frozen)) != len(frozen):
            raise ValueError("frozen set contains duplicate indices")
        if any(not 0 <= i < self.n_bits for i in frozen):
            raise ValueError("frozen index out of range")
        if len(frozen) != self.n_bits - self.k_bits:
            raise ValueError(
                f"frozen set has {len(frozen)} entries, expected {self.n_bits - self.k_bits}"
            )
        frozen = tuple(sorted(frozen))
        object.__setattr__(self, "frozen", frozen)
        fs = set(frozen)
        object.__setattr__(self, "info", tuple(i for i in range(self.n_bits) if i not in fs))

    @property
    def rate(self) -> float:
        return self.k_bits / self.n_bits

    @property
    def info_indices(self) -> np.ndarray:
        return np.array(self.info, dtype=np.int64)

    def indicator(self) -> np.ndarray:
        """Frozen-bit indicator ``a``: 1 on information positions, 0 on frozen ones."""
        a = np.zeros(self.n_bits, dtype=np.uint8)
        a[list(self.info)] = 1
        return a

    @classmethod
    def all_info(cls, seq: KernelSeq) -> "CodeSpec":
        return cls(seq.n_bits, seq.n_bits, seq, ())

    def to_dict(self) -> dict:
        return {
            "n": self.n_bits,
            "k": self.k_bits,
            "kernels": str(self.seq),
            "frozen": list(self.frozen),
            "design_snr_db": self.design_snr_db,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "CodeSpec":
        missing = {"n", "k", "kernels", "frozen"} - set(d)
        if missing:
            raise ValueError(f"code spec is missing fields: {sorted(missing)}")
        info = d.get("info")
        spec = cls(
            int(d["n"]),
            int(d["k"]),
            KernelSeq.parse(str(d["kernels"])),
            tuple(d["frozen"]),
            float(d.get("design_snr_db", DEFAULT_DESIGN_SNR_DB)),
        )
        if info is not None and sorted(int(i) for i in info) != list(spec.info):
            raise ValueError("information set is inconsistent with the frozen set")
        return spec

    @classmethod
    def from_json(cls, text: str) -> "CodeSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ReliabilityProfile:
    error_prob: np.ndarray
    frames_run: int

    def __post_init__(self):
        if self.frames_run < 1:
            raise ValueError("a reliability profile needs at least one frame")


def estimate_reliabilities(
    seq: KernelSeq,
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB,
    frames: int = DEFAULT_FRAMES,
    seed: int = 0,
    rate: float = 0.5,
    rate_match: Optional[RateMatchSpec] = None,
) -> ReliabilityProfile:
    """Genie-aided first-error probability of every bit channel.

    ``rate`` sets the Eb/N0 to noise-variance mapping. With ``rate_match`` the
    code is the mother code and the receiver sees the punctured or shortened
    channel. A leaf LLR of exactly zero counts as half an error (a coin flip).
    Frames run in fixed chunks of 2000, each on its own stream
    ``(seed, chunk)``, so results do not depend on how chunks are scheduled.
    """
    if design_snr_db is None or math.isnan(design_snr_db):
        raise ValueError("design SNR must be a number")
    if frames < 1:
        raise ValueError(f"frames must be >= 1, got {frames}")
    n = seq.n_bits
    if rate_match is not None and rate_match.mother_n != n:
        raise ValueError("rate-matching spec does not fit the kernel sequence")
    n_tx = n if rate_match is None else rate_match.n_bits
    sigma = math.sqrt(noise_variance(design_snr_db, rate))
    dec = SCDecoder(CodeSpec.all_info(seq))
    truth = np.zeros(n, dtype=np.uint8)
    errors = np.zeros(n, dtype=np.float64)
    done = 0
    chunk = 0
    while done < frames:
        b = min(_CHUNK, frames - done)
        rng = make_rng(seed, chunk)
        y = 1.0 + sigma * rng.standard_normal((b, n_tx))
        llrs = 2.0 * y / sigma**2
        if rate_match is not None:
            llrs = rate_match.expand(llrs)
        leaves = dec.genie_leaf_llrs(llrs, truth)
        errors += (leaves < 0).sum(axis=0) + 0.5 * (leaves == 0).sum(axis=0)
        done += b
        chunk += 1
    return ReliabilityProfile(errors / frames, frames)


def build_code(
    seq: KernelSeq,
    k_bits: int,
    profile: ReliabilityProfile,
    forced_frozen: Iterable[int] = (),
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB,
) -> CodeSpec:
    """Put the ``k_bits`` most reliable channels in the information set.

    Equal error probabilities are ordered by index, lower index first.
    ``forced_frozen`` positions are never chosen.
    """
    n = seq.n_bits
    if not 0 < k_bits < n:
        raise ValueError(f"k must satisfy 0 < k < n, got k={k_bits}, n={n}")
    p = np.asarray(profile.error_prob, dtype=np.float64)
    if p.shape != (n,):
        raise ValueError(f"profile has {p.size} entries, code has {n}")
    forced = set(int(i) for i in forced_frozen)
    candidates = [i for i in sorted(range(n), key=lambda i: (p[i], i)) if i not in forced]
    if len(candidates) < k_bits:
        raise ValueError(f"only {len(candidates)} usable positions for k={k_bits}")
    info = set(candidates[:k_bits])
    frozen = tuple(i for i in range(n) if i not in info)
    return CodeSpec(n, k_bits, seq, frozen, design_snr_db)


def construct(
    seq: KernelSeq,
    k_bits: int,
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB,
    frames: int = DEFAULT_FRAMES,
    seed: int = 0,
) -> CodeSpec:
    """Estimate reliabilities at the code's own rate and build the code."""
    profile = estimate_reliabilities(
        seq, design_snr_db, frames=frames, seed=seed, rate=k_bits / seq.n_bits
    )
    return build_code(seq, k_bits, profile, design_snr_db=design_snr_db)


def search_kernel_orders(
    n_bits: int,
    k_bits: int,
    design_snr_db: float = DEFAULT_DESIGN_SNR_DB,
    frames: int = 10_000,
    seed: int = 0,
) -> list[tuple[KernelSeq, float]]:
    """Rank every distinct kernel ordering of length ``n_bits`` by simulated FER.

    Each ordering gets its own construction and a FER run of ``frames`` frames
    at the design SNR. Ties keep lexicographic order.
    """
    from .sim import measure

    if count_kernel_orders(n_bits) > MAX_KERNEL_ORDERS:
        raise ValueError(
            f"{count_kernel_orders(n_bits)} kernel orders for N={n_bits}; "
            f"the search is limited to {MAX_KERNEL_ORDERS}"
        )
    ranked = []
    for seq in kernel_orders(n_bits):
        spec = construct(seq, k_bits, design_snr_db, frames=frames, seed=seed)
        row = measure(spec, design_snr_db, max_frames=frames, max_frame_errors=None, seed=seed)
        ranked.append((seq, row.fer))
    ranked.sort(key=lambda item: item[1])
    return ranked

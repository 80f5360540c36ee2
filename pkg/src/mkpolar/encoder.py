"""Multi-kernel polar encoder, x = uG over GF(2).

Encoding applies one kernel per tensor axis of ``u`` reshaped to the kernel
dimensions, so it never materializes ``G``. Everything accepts a leading batch
axis: ``u`` of shape ``(frames, N)`` encodes all frames at once.

Sub-block convention: for the outer kernel of dimension ``d`` the input ``u`` is
split into ``d`` consecutive blocks of size ``N/d``. Coded position ``i`` of a
node of size ``n`` pairs with ``i + n/2`` (binary) or ``i + n/3``, ``i + 2n/3``
(ternary). Because T2 = [[1,1],[1,0]], the binary combine
``[beta_l ^ beta_r, beta_r]`` receives the *second* input block as ``beta_l``
and the first as ``beta_r``; the ternary combine takes blocks in natural order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .kernels import KERNELS, KernelSeq, generator

if TYPE_CHECKING:
    from .construction import CodeSpec


@dataclass
class Frame:
    u: np.ndarray
    x: np.ndarray
    channel_llrs: Optional[np.ndarray] = None
    u_hat: Optional[np.ndarray] = None


def encode_u(u, seq: KernelSeq) -> np.ndarray:
    """Encode full input vectors ``u`` (shape ``(..., N)``) with the kernel sequence."""
    u = np.asarray(u, dtype=np.uint8)
    n = seq.n_bits
    if u.shape[-1] != n:
        raise ValueError(f"expected {n} input bits, got {u.shape[-1]}")
    lead = u.shape[:-1]
    x = u.reshape(lead + seq.dims).astype(np.int32)
    base = len(lead)
    for axis, d in enumerate(seq.dims):
        # contract axis with kernel rows; result lands as last axis
        x = np.tensordot(x, KERNELS[d].astype(np.int32), axes=([base + axis], [0]))
        x = np.moveaxis(x, -1, base + axis) & 1
    return x.reshape(lead + (n,)).astype(np.uint8)


def encode_dense(u, seq: KernelSeq) -> np.ndarray:
    """Oracle: multiply by the dense generator matrix."""
    g = generator(seq).astype(np.int64)
    return ((np.asarray(u, dtype=np.int64) @ g) & 1).astype(np.uint8)


def scatter_info(spec: "CodeSpec", info_bits) -> np.ndarray:
    """Place message bits at the information positions (ascending), zeros elsewhere."""
    info_bits = np.asarray(info_bits, dtype=np.uint8)
    if info_bits.shape[-1] != spec.k_bits:
        raise ValueError(f"expected {spec.k_bits} info bits, got {info_bits.shape[-1]}")
    u = np.zeros(info_bits.shape[:-1] + (spec.n_bits,), dtype=np.uint8)
    u[..., spec.info_indices] = info_bits
    return u


def encode(spec: "CodeSpec", info_bits) -> Frame:
    u = scatter_info(spec, info_bits)
    return Frame(u=u, x=encode_u(u, spec.seq))


def combine_binary(beta_l, beta_r) -> np.ndarray:
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    beta_r = np.asarray(beta_r, dtype=np.uint8)
    if beta_l.shape != beta_r.shape:
        raise ValueError("combine_binary: operand length mismatch")
    return np.concatenate([beta_l ^ beta_r, beta_r], axis=-1)


def combine_ternary(beta_l, beta_c, beta_r) -> np.ndarray:
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    beta_c = np.asarray(beta_c, dtype=np.uint8)
    beta_r = np.asarray(beta_r, dtype=np.uint8)
    if not (beta_l.shape == beta_c.shape == beta_r.shape):
        raise ValueError("combine_ternary: operand length mismatch")
    lc = beta_l ^ beta_c
    return np.concatenate([lc, beta_l ^ beta_r, lc ^ beta_r], axis=-1)


def pack_bits(bits) -> str:
    """Hex string of a bit vector, little-endian (bit 0 is the LSB of byte 0)."""
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes().hex()


def unpack_bits(text: str, n_bits: int) -> np.ndarray:
    raw = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n_bits]

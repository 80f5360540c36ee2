"""Batched successive-cancellation decoder for mixed T2/T3 kernel sequences.

LLR arrays carry frames on the leading axis and node positions on the last
axis, so one tree traversal decodes a whole batch. Arithmetic is delegated to
an arithmetic model (:data:`~mkpolar.llr.REAL` or a
:class:`~mkpolar.llr.QuantConfig`).

Traversal order inside a binary node: the child holding the second input
sub-block is decoded first (it sees the check-node LLRs), then the first
sub-block. This is what T2 = [[1,1],[1,0]] requires for the left-first
f / g / combine schedule. Ternary children are decoded in natural order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .kernels import KernelSeq
from .llr import REAL, Arithmetic, resolve_model

if TYPE_CHECKING:
    from .construction import CodeSpec


@dataclass(frozen=True)
class StageLayout:
    seq: KernelSeq

    @property
    def sizes(self) -> list[int]:
        return self.seq.node_sizes()

    def children(self, level: int) -> int:
        return self.seq.dims[level]

    def leaf_order(self) -> list[int]:
        """Input indices in the order the decoder decides them."""
        order = []

        def walk(level, start):
            if level == len(self.seq.dims):
                order.append(start)
                return
            d = self.seq.dims[level]
            sub = self.sizes[level + 1]
            blocks = (1, 0) if d == 2 else (0, 1, 2)
            for b in blocks:
                walk(level + 1, start + b * sub)

        walk(0, 0)
        return order


def _split(alpha, parts: int):
    n = alpha.shape[-1]
    if n % parts:
        raise ValueError(f"LLR vector length {n} is not divisible by {parts}")
    t = n // parts
    return [alpha[..., i * t:(i + 1) * t] for i in range(parts)]


def f_binary(alpha, model: Arithmetic = REAL):
    a0, a1 = _split(np.asarray(alpha), 2)
    return model.minsum2(a0, a1)


def g_binary(alpha, beta_l, model: Arithmetic = REAL):
    alpha = np.asarray(alpha)
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    if alpha.shape[-1] != 2 * beta_l.shape[-1]:
        raise ValueError("g_binary: alpha must be twice as long as beta_l")
    a0, a1 = _split(alpha, 2)
    return model.add(model.cneg(a0, beta_l), a1)


def f_ternary(alpha, model: Arithmetic = REAL):
    a0, a1, a2 = _split(np.asarray(alpha), 3)
    return model.minsum3(a0, a1, a2)


def g1_ternary(alpha, beta_l, model: Arithmetic = REAL):
    alpha = np.asarray(alpha)
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    if alpha.shape[-1] != 3 * beta_l.shape[-1]:
        raise ValueError("g1_ternary: alpha must be three times as long as beta_l")
    a0, a1, a2 = _split(alpha, 3)
    return model.add(model.cneg(a0, beta_l), model.minsum2(a1, a2))


def g2_ternary(alpha, beta_l, beta_c, model: Arithmetic = REAL):
    alpha = np.asarray(alpha)
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    beta_c = np.asarray(beta_c, dtype=np.uint8)
    if alpha.shape[-1] != 3 * beta_l.shape[-1] or beta_l.shape != beta_c.shape:
        raise ValueError("g2_ternary: inconsistent operand sizes")
    _, a1, a2 = _split(alpha, 3)
    return model.add(model.cneg(a1, beta_l), model.cneg(a2, beta_l ^ beta_c))


def leaf_decide(alpha, is_info):
    """Hard decision of a leaf: 0 when frozen, else 0 iff ``alpha >= 0``."""
    return ((np.asarray(alpha) < 0) & np.asarray(is_info, dtype=bool)).astype(np.uint8)


def decide_pair(lambda0, lambda1, a_even, a_odd, model: Arithmetic = REAL):
    """Decision logic of a size-2 node without an explicit g stage.

    ``a_even`` / ``a_odd`` flag the first / second decided leaf as information.
    The second leaf takes the sign of ``lambda1`` when ``|lambda1| >= |lambda0|``
    and ``s(lambda0) ^ u_even`` otherwise.
    """
    l0 = np.asarray(lambda0)
    l1 = np.asarray(lambda1)
    u_even = leaf_decide(model.minsum2(l0, l1), a_even)
    s0 = (l0 < 0).astype(np.uint8)
    s1 = (l1 < 0).astype(np.uint8)
    odd = np.where(np.abs(l1) >= np.abs(l0), s1, s0 ^ u_even)
    u_odd = (odd & np.asarray(a_odd, dtype=bool)).astype(np.uint8)
    return u_even, u_odd


def format_llrs(values) -> str:
    values = np.asarray(values).ravel()
    if np.issubdtype(values.dtype, np.integer):
        return " ".join(f"{int(v):+d}" for v in values)
    return " ".join(f"{float(v) + 0.0:+.17g}" for v in values)


class SCDecoder:
    """Successive-cancellation decoder bound to one code and arithmetic model.

    ``decode`` is reentrant: all intermediate buffers are local to the call.
    """

    def __init__(self, spec: "CodeSpec", model: Optional[Arithmetic] = None):
        self.spec = spec
        self.seq = spec.seq
        self.model = resolve_model(model)
        self.info_mask = spec.indicator().astype(bool)
        self.sizes = self.seq.node_sizes()

    def decode(self, channel_llrs, trace: Optional[list] = None):
        """Decode a frame (shape ``(N,)``) or a batch (shape ``(B, N)``).

        Channel LLRs are real-valued; a quantized model quantizes them first.
        Returns ``(u_hat, x_hat)`` with the same leading shape as the input.
        If ``trace`` is a list, one line per node visit is appended for the
        first frame of the batch.
        """
        u_hat, x_hat, _ = self._run(channel_llrs, trace=trace)
        return u_hat, x_hat

    def genie_leaf_llrs(self, channel_llrs, u_true) -> np.ndarray:
        """Leaf LLRs when every earlier decision is replaced by the true bit."""
        _, _, leaves = self._run(channel_llrs, genie=u_true)
        return leaves

    def _run(self, channel_llrs, genie=None, trace=None):
        llrs = np.asarray(channel_llrs)
        single = llrs.ndim == 1
        if single:
            llrs = llrs[None, :]
        n = self.spec.n_bits
        if llrs.shape[-1] != n:
            raise ValueError(f"expected {n} channel LLRs, got {llrs.shape[-1]}")
        alpha = self.model.channel(llrs)
        batch = alpha.shape[0]
        u_hat = np.zeros((batch, n), dtype=np.uint8)
        leaves = None
        if genie is not None:
            genie = np.broadcast_to(np.asarray(genie, dtype=np.uint8), (batch, n))
            leaves = np.zeros((batch, n), dtype=alpha.dtype)
        state = _Run(self, u_hat, genie, leaves, trace)
        x_hat = state.node(0, alpha, 0)
        if single:
            u_hat, x_hat = u_hat[0], x_hat[0]
            if leaves is not None:
                leaves = leaves[0]
        return u_hat, x_hat, leaves


class _Run:
    """Per-call traversal state (the decoder scratch)."""

    def __init__(self, dec: SCDecoder, u_hat, genie, leaves, trace):
        self.dims = dec.seq.dims
        self.sizes = dec.sizes
        self.model = dec.model
        self.info = dec.info_mask
        self.u_hat = u_hat
        self.genie = genie
        self.leaves = leaves
        self.trace = trace

    def _log(self, level, start, fn, values):
        if self.trace is not None:
            node = start // self.sizes[level] if level < len(self.sizes) else start
            self.trace.append(f"{level} {node} {fn} {format_llrs(values[0])}")

    def leaf(self, level, alpha, idx):
        self._log(level, idx, "leaf", alpha)
        if self.genie is not None:
            self.leaves[:, idx] = alpha[:, 0]
            bit = self.genie[:, idx]
        else:
            bit = leaf_decide(alpha[:, 0], self.info[idx])
        self.u_hat[:, idx] = bit
        return bit[:, None]

    def node(self, level, alpha, start):
        if level == len(self.dims):
            return self.leaf(level, alpha, start)
        m = self.model
        if self.dims[level] == 2:
            if level == len(self.dims) - 1 and self.genie is None:
                return self.pair(level, alpha, start)
            half = alpha.shape[-1] // 2
            a0, a1 = alpha[:, :half], alpha[:, half:]
            al = m.minsum2(a0, a1)
            self._log(level, start, "f2", al)
            bl = self.node(level + 1, al, start + half)
            ar = m.add(m.cneg(a0, bl), a1)
            self._log(level, start, "g2", ar)
            br = self.node(level + 1, ar, start)
            return np.concatenate([bl ^ br, br], axis=1)
        t = alpha.shape[-1] // 3
        a0, a1, a2 = alpha[:, :t], alpha[:, t:2 * t], alpha[:, 2 * t:]
        al = m.minsum3(a0, a1, a2)
        self._log(level, start, "f3", al)
        bl = self.node(level + 1, al, start)
        ac = m.add(m.cneg(a0, bl), m.minsum2(a1, a2))
        self._log(level, start, "g1", ac)
        bc = self.node(level + 1, ac, start + t)
        ar = m.add(m.cneg(a1, bl), m.cneg(a2, bl ^ bc))
        self._log(level, start, "g2t", ar)
        br = self.node(level + 1, ar, start + 2 * t)
        lc = bl ^ bc
        return np.concatenate([lc, bl ^ br, lc ^ br], axis=1)

    def pair(self, level, alpha, start):
        self._log(level, start, "pair", alpha)
        l0, l1 = alpha[:, 0], alpha[:, 1]
        ue, uo = decide_pair(l0, l1, self.info[start + 1], self.info[start], self.model)
        self.u_hat[:, start + 1] = ue
        self.u_hat[:, start] = uo
        return np.stack([ue ^ uo, uo], axis=1)


def decode(spec: "CodeSpec", channel_llrs, model: Optional[Arithmetic] = None, trace=None):
    """Decode one frame or a batch; see :meth:`SCDecoder.decode`."""
    return SCDecoder(spec, model).decode(channel_llrs, trace=trace)

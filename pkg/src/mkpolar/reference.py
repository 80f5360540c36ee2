"""Naive SC decoder for cross-checking :mod:`mkpolar.decoder`.

One frame at a time, one scalar :class:`~mkpolar.llr.Llr` at a time, explicit
recursion, no buffer reuse. It shares only the scalar LLR primitives with the
rest of the package.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .decoder import format_llrs
from .llr import Llr, QuantConfig, cneg, hard_decision, minsum2, minsum3, quantize, sat_add


def _to_llrs(values, cfg: Optional[QuantConfig]) -> list[Llr]:
    if cfg is None:
        return [Llr(float(v)) for v in values]
    return [quantize(float(v), cfg) for v in values]


def _dump(llrs: list[Llr], cfg) -> str:
    if cfg is None:
        return format_llrs(np.array([x.value for x in llrs], dtype=np.float64))
    return format_llrs(np.array([x.value for x in llrs], dtype=np.int64))


def reference_decode(spec, channel_llrs, cfg: Optional[QuantConfig] = None, trace=None):
    """Return ``(u_hat, x_hat)`` as lists of ints for a single frame."""
    dims = spec.seq.dims
    sizes = spec.seq.node_sizes()
    a = [int(v) for v in spec.indicator()]
    n = spec.n_bits
    if len(channel_llrs) != n:
        raise ValueError(f"expected {n} channel LLRs, got {len(channel_llrs)}")
    u_hat = [0] * n

    def log(level, start, fn, llrs):
        if trace is not None:
            node = start // sizes[level] if level < len(sizes) else start
            trace.append(f"{level} {node} {fn} {_dump(llrs, cfg)}")

    def decide(alpha: Llr, idx: int) -> int:
        return hard_decision(alpha) if a[idx] else 0

    def visit(level, alpha, start):
        size = len(alpha)
        if level == len(dims):
            log(level, start, "leaf", alpha)
            u_hat[start] = decide(alpha[0], start)
            return [u_hat[start]]
        if dims[level] == 2 and level == len(dims) - 1:
            log(level, start, "pair", alpha)
            lam0, lam1 = alpha
            ue = decide(minsum2(lam0, lam1), start + 1)
            if not a[start]:
                uo = 0
            elif lam1.mag >= lam0.mag:
                uo = hard_decision(lam1)
            else:
                uo = hard_decision(lam0) ^ ue
            u_hat[start + 1], u_hat[start] = ue, uo
            return [ue ^ uo, uo]
        if dims[level] == 2:
            h = size // 2
            al = [minsum2(alpha[i], alpha[i + h]) for i in range(h)]
            log(level, start, "f2", al)
            bl = visit(level + 1, al, start + h)
            ar = [sat_add(cneg(alpha[i], bl[i]), alpha[i + h]) for i in range(h)]
            log(level, start, "g2", ar)
            br = visit(level + 1, ar, start)
            return [bl[i] ^ br[i] for i in range(h)] + br
        t = size // 3
        al = [minsum3(alpha[i], alpha[i + t], alpha[i + 2 * t]) for i in range(t)]
        log(level, start, "f3", al)
        bl = visit(level + 1, al, start)
        ac = [
            sat_add(cneg(alpha[i], bl[i]), minsum2(alpha[i + t], alpha[i + 2 * t]))
            for i in range(t)
        ]
        log(level, start, "g1", ac)
        bc = visit(level + 1, ac, start + t)
        ar = [
            sat_add(cneg(alpha[i + t], bl[i]), cneg(alpha[i + 2 * t], bl[i] ^ bc[i]))
            for i in range(t)
        ]
        log(level, start, "g2t", ar)
        br = visit(level + 1, ar, start + 2 * t)
        return (
            [bl[i] ^ bc[i] for i in range(t)]
            + [bl[i] ^ br[i] for i in range(t)]
            + [bl[i] ^ bc[i] ^ br[i] for i in range(t)]
        )

    x_hat = visit(0, _to_llrs(channel_llrs, cfg), 0)
    return u_hat, x_hat

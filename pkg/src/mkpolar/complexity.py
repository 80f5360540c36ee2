"""Complexity accounting for combinational MK decoders.

Two kinds of numbers come out of here: the LLR-computation metric used to
compare MK codes against rate-matched power-of-two mother codes, and block
counts (comparators, adders/subtractors) of the combinational architecture,
counted structurally node by node. Closed-form approximations are kept alongside
as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import KernelSeq, enumerate_block_lengths, factorize, mother_length


@dataclass(frozen=True)
class ComplexityReport:
    n_bits: int
    stages: int
    llr_metric_mk: int
    llr_metric_mother: int
    gain_percent: float
    comparators_f: int
    comparators_dec: int
    adders_subtractors: int
    register_bits: int

    @property
    def total_blocks(self) -> int:
        return self.comparators_f + self.comparators_dec + self.adders_subtractors


def llr_metric(seq: KernelSeq) -> tuple[int, int, float]:
    """``(N*s, N'*log2(N'), gain %)`` with ``N'`` the next power of two."""
    n = seq.n_bits
    mk = n * seq.stages
    mother_n = mother_length(n)
    mother = mother_n * (mother_n.bit_length() - 1)
    return mk, mother, 100.0 * (mother - mk) / mother


def register_bits(n_bits: int, q_bits: int) -> int:
    """Input LLRs (N*Q) plus decoded codeword (N) plus frozen pattern (N)."""
    if n_bits < 1 or q_bits < 1:
        raise ValueError("n and q must be >= 1")
    return n_bits * (q_bits + 2)


def _structural_counts(seq: KernelSeq, min3_comparators: int):
    dims = seq.dims
    sizes = seq.node_sizes()
    n = seq.n_bits
    comp_f = comp_dec = adders = 0
    last = len(dims) - 1
    for level, d in enumerate(dims):
        size = sizes[level]
        nodes = n // size
        if d == 2 and level == last:
            # decision logic: one magnitude comparator per size-2 node
            comp_dec += nodes
        elif d == 2:
            # f: size/2 comparators; g (precomputed +/-): size/2 adds + size/2 subtracts
            comp_f += nodes * (size // 2)
            adders += nodes * size
        else:
            t = size // 3
            # f^t: one 3-input minimum per output; g1 embeds one 2-input minimum
            comp_f += nodes * t * (min3_comparators + 1)
            # g1 and g2 each precompute two variants per output
            adders += nodes * 4 * t
    return comp_f, comp_dec, adders


def gate_counts(seq: KernelSeq, q_bits: int = 5, min3_comparators: int = 1) -> ComplexityReport:
    """Comparator and adder/subtractor counts of the combinational decoder.

    ``min3_comparators`` is the cost of one 3-input minimum in comparator units.
    The default 1 treats it as a single block; 2 builds it from two 2-input
    comparators, which makes a ternary node of size n cost n comparators.
    """
    if min3_comparators not in (1, 2):
        raise ValueError("min3_comparators must be 1 or 2")
    mk, mother, gain = llr_metric(seq)
    comp_f, comp_dec, adders = _structural_counts(seq, min3_comparators)
    return ComplexityReport(
        n_bits=seq.n_bits,
        stages=seq.stages,
        llr_metric_mk=mk,
        llr_metric_mother=mother,
        gain_percent=gain,
        comparators_f=comp_f,
        comparators_dec=comp_dec,
        adders_subtractors=adders,
        register_bits=register_bits(seq.n_bits, q_bits),
    )


# Closed-form approximations (cross-checks only).


def binary_total_closed_form(n_bits: int) -> float:
    return n_bits * (1.5 * math.log2(n_bits) - 1)


def mk_comparators_closed_form(n_bits: int) -> float:
    return n_bits * (math.log2(n_bits) - 4.17)


def mk_adders_closed_form(n_bits: int) -> float:
    return n_bits * (math.log2(n_bits) - 1.25)


def mk_total_closed_form(n_bits: int) -> float:
    return n_bits * (2 * math.log2(n_bits) - 4.92)


def gain_table(max_terms: int) -> list[tuple[int, int, float]]:
    """``(N, stages, gain %)`` for every mixed-kernel length with ``M <= max_terms``.

    Powers of two (no gain by definition) and pure-ternary lengths are left out.
    """
    rows = []
    for big_m, n in enumerate_block_lengths(max_terms, include_pure_ternary=False):
        if n & (n - 1) == 0:
            continue
        # the metric depends only on N and the number of kernels
        seq = _some_order(n)
        _, _, gain = llr_metric(seq)
        rows.append((n, seq.stages, gain))
    return sorted(rows)


def _some_order(n_bits: int) -> KernelSeq:
    n, m = factorize(n_bits)
    return KernelSeq((3,) * m + (2,) * n)

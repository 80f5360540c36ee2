import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mkpolar.kernels import (
    T2,
    T3,
    Kernel,
    KernelSeq,
    count_kernel_orders,
    enumerate_block_lengths,
    factorize,
    generator,
    gf2_inverse,
    gf2_matmul,
    kernel_orders,
    kronecker,
)
from oracles import kron_bruteforce


def test_kernel_matrices():
    assert Kernel(2).matrix.tolist() == [[1, 1], [1, 0]]
    assert Kernel(3).matrix.tolist() == [[1, 1, 1], [1, 0, 1], [0, 1, 1]]
    with pytest.raises(ValueError):
        Kernel(4)


@pytest.mark.parametrize("k", [T2, T3])
def test_kernels_invertible(k):
    inv = gf2_inverse(k)
    assert np.array_equal(gf2_matmul(k, inv), np.eye(len(k), dtype=np.uint8))


def test_kron_t2_t2():
    assert kronecker(T2, T2).tolist() == [
        [1, 1, 1, 1],
        [1, 0, 1, 0],
        [1, 1, 0, 0],
        [1, 0, 0, 0],
    ]


def test_kron_identity():
    assert np.array_equal(kronecker(np.ones((1, 1)), T3), T3)


def test_kron_t2_t3_row0():
    assert kronecker(T2, T3)[0].tolist() == [1, 1, 1, 1, 1, 1]


binmat = arrays(np.uint8, st.tuples(st.integers(1, 3), st.integers(1, 3)),
                elements=st.integers(0, 1))


@given(binmat, binmat)
def test_kron_matches_index_definition(a, b):
    assert np.array_equal(kronecker(a, b), kron_bruteforce(a.tolist(), b.tolist()))


@given(binmat, binmat, binmat)
def test_kron_associative(a, b, c):
    assert np.array_equal(kronecker(kronecker(a, b), c), kronecker(a, kronecker(b, c)))


def test_generator_single_and_order():
    assert np.array_equal(generator(KernelSeq((2,))), T2)
    g23 = generator(KernelSeq((2, 3)))
    assert g23.shape == (6, 6)
    assert g23[0].tolist() == [1] * 6
    assert not np.array_equal(g23, generator(KernelSeq((3, 2))))


@settings(max_examples=30)
@given(st.lists(st.sampled_from([2, 3]), min_size=1, max_size=5))
def test_generator_invertible_and_sized(dims):
    seq = KernelSeq(tuple(dims))
    g = generator(seq)
    assert g.shape == (seq.n_bits, seq.n_bits)
    assert np.array_equal(gf2_matmul(g, gf2_inverse(g)), np.eye(seq.n_bits, dtype=np.uint8))


def test_generator_size_guard():
    with pytest.raises(ValueError):
        generator(KernelSeq((2,) * 13))


def test_kernelseq_parse_and_format():
    seq = KernelSeq.parse("3,2,2,2,2")
    assert seq.dims == (3, 2, 2, 2, 2)
    assert str(seq) == "3,2,2,2,2"
    assert KernelSeq.parse("{3,2,2,2,2}") == seq
    assert seq.n_bits == 48 and seq.stages == 5
    assert seq.node_sizes() == [48, 16, 8, 4, 2, 1]
    for bad in ["", "4,2", "a,b"]:
        with pytest.raises(ValueError):
            KernelSeq.parse(bad)


def test_factorize():
    assert factorize(48) == (4, 1)
    assert factorize(72) == (3, 2)
    for bad in (1, 7, 10, 0):
        with pytest.raises(ValueError):
            factorize(bad)


def test_kernel_orders():
    assert [str(s) for s in kernel_orders(6)] == ["2,3", "3,2"]
    assert [str(s) for s in kernel_orders(8)] == ["2,2,2"]
    assert len(kernel_orders(12)) == count_kernel_orders(12) == 3
    assert len(kernel_orders(72)) == 10


def _by_m(entries):
    out = {}
    for m, n in entries:
        out.setdefault(m, []).append(n)
    return out


def test_enumerate_examples():
    table = _by_m(enumerate_block_lengths(5))
    assert table[1] == [2, 3]
    assert table[2] == [4, 6, 9]
    assert table[5] == [32, 48, 72, 108, 162, 243]


@pytest.mark.parametrize("max_terms", [1, 4, 10])
def test_enumerate_counts(max_terms):
    full = _by_m(enumerate_block_lengths(max_terms))
    trimmed = _by_m(enumerate_block_lengths(max_terms, include_pure_ternary=False))
    for m in range(1, max_terms + 1):
        assert len(full[m]) == m + 1
        assert len(trimmed[m]) == m
        assert 3**m not in trimmed[m]
    with pytest.raises(ValueError):
        enumerate_block_lengths(0)

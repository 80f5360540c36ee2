import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mkpolar.construction import CodeSpec, PRESET_KERNELS, construct
from mkpolar.decoder import (
    SCDecoder,
    StageLayout,
    decide_pair,
    decode,
    f_binary,
    f_ternary,
    g1_ternary,
    g2_ternary,
    g_binary,
    leaf_decide,
)
from mkpolar.encoder import encode_u
from mkpolar.kernels import KernelSeq
from mkpolar.llr import REAL, QuantConfig
from mkpolar.reference import reference_decode
from mkpolar.sim import measure

Q5 = QuantConfig(5, 1.0)


def small_seqs(max_n=12):
    out = []
    for s in range(1, 5):
        for dims in itertools.product((2, 3), repeat=s):
            if np.prod(dims) <= max_n:
                out.append(KernelSeq(dims))
    return out


def random_spec(seq, rng):
    n = seq.n_bits
    k = int(rng.integers(1, n + 1))
    frozen = tuple(sorted(rng.choice(n, size=n - k, replace=False).tolist()))
    return CodeSpec(n, k, seq, frozen)


def test_f_binary_examples():
    assert f_binary(np.array([3.0, -2.0])).tolist() == [-2.0]
    assert f_binary(np.array([4, 1, -5, 7]), Q5).tolist() == [-4, 1]


def test_g_binary_examples():
    assert g_binary(np.array([3.0, -2.0]), [0]).tolist() == [1.0]
    assert g_binary(np.array([3.0, -2.0]), [1]).tolist() == [-5.0]
    assert g_binary(np.array([15, 15]), [0], Q5).tolist() == [15]
    with pytest.raises(ValueError):
        g_binary(np.array([1.0, 2.0]), [0, 1])


def test_ternary_functions():
    assert f_ternary(np.array([1, -3, 2]), Q5).tolist() == [-1]
    assert g1_ternary(np.array([4, 5, 5]), [1], Q5).tolist() == [1]
    assert g1_ternary(np.array([4, 5, 5]), [0], Q5).tolist() == [9]
    assert g2_ternary(np.array([0, 3, -2]), [1], [0], Q5).tolist() == [-1]
    assert g2_ternary(np.array([0, 3, -2]), [0], [0], Q5).tolist() == [1]
    with pytest.raises(ValueError):
        f_ternary(np.array([1.0, 2.0]))


def test_leaf_decide():
    assert leaf_decide(np.array([-1.0, -1.0, 0.0, 2.0]), [1, 0, 1, 1]).tolist() == [1, 0, 0, 0]


@pytest.mark.parametrize(
    "l0,l1,ae,ao,expected",
    [
        (1.0, -3.0, 1, 1, (1, 1)),
        (-3.0, 1.0, 1, 1, (1, 0)),
        (-3.0, 1.0, 0, 1, (0, 1)),
        (2.0, 2.0, 1, 1, (0, 0)),
        (-2.0, 5.0, 1, 0, (1, 0)),
    ],
)
def test_decide_pair_examples(l0, l1, ae, ao, expected):
    ue, uo = decide_pair(np.array([l0]), np.array([l1]), ae, ao)
    assert (int(ue[0]), int(uo[0])) == expected


@given(st.integers(-15, 15), st.integers(-15, 15), st.booleans(), st.booleans())
def test_decide_pair_matches_f_then_g(l0, l1, ae, ao):
    alpha = np.array([l0, l1])
    ue, uo = decide_pair(alpha[:1], alpha[1:], ae, ao, Q5)
    ue_ref = leaf_decide(f_binary(alpha, Q5), ae)
    assert ue[0] == ue_ref[0]
    g = g_binary(alpha, ue_ref, Q5)
    if g[0] != 0:
        assert uo[0] == leaf_decide(g, ao)[0]


def test_decode_n2_example():
    spec = CodeSpec.all_info(KernelSeq((2,)))
    u, x = decode(spec, np.array([1.0, -3.0]))
    assert u.tolist() == [1, 1]
    assert x.tolist() == [0, 1]


def test_leaf_order():
    assert StageLayout(KernelSeq((2,))).leaf_order() == [1, 0]
    assert StageLayout(KernelSeq((3,))).leaf_order() == [0, 1, 2]
    assert StageLayout(KernelSeq((2, 3))).leaf_order() == [3, 4, 5, 0, 1, 2]
    assert StageLayout(KernelSeq((3, 2))).leaf_order() == [1, 0, 3, 2, 5, 4]


@pytest.mark.parametrize("seq", small_seqs(), ids=str)
def test_noiseless_exhaustive(seq):
    n = seq.n_bits
    spec = CodeSpec.all_info(seq)
    u = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)
    x = encode_u(u, seq)
    for model, mag in ((REAL, 1.0), (Q5, 3.0)):
        u_hat, x_hat = SCDecoder(spec, model).decode((1.0 - 2.0 * x) * mag)
        assert np.array_equal(u_hat, u)
        assert np.array_equal(x_hat, x)


@pytest.mark.parametrize("seq", small_seqs(), ids=str)
def test_genie_leaves_follow_true_bits(seq):
    n = seq.n_bits
    dec = SCDecoder(CodeSpec.all_info(seq))
    for u in itertools.product((0, 1), repeat=n):
        u = np.array(u, dtype=np.uint8)
        leaves = dec.genie_leaf_llrs(1.0 - 2.0 * encode_u(u, seq), u)
        assert np.array_equal((leaves < 0).astype(np.uint8), u)


@pytest.mark.parametrize("n", [6, 8, 12, 24, 48, 72])
@pytest.mark.parametrize("model", [None, Q5], ids=["real", "q5"])
def test_matches_reference_with_trace(n, model):
    rng = np.random.default_rng(n)
    seq = PRESET_KERNELS[n]
    for _ in range(20):
        spec = random_spec(seq, rng)
        llrs = rng.normal(1.0, 2.0, n) * rng.choice([1.0, 4.0])
        tr_fast, tr_ref = [], []
        u, x = SCDecoder(spec, model).decode(llrs, trace=tr_fast)
        u_ref, x_ref = reference_decode(spec, llrs, model, trace=tr_ref)
        assert u.tolist() == u_ref
        assert x.tolist() == x_ref
        assert tr_fast == tr_ref


def test_batch_equals_single_frames():
    rng = np.random.default_rng(7)
    spec = random_spec(KernelSeq((3, 2, 2)), rng)
    llrs = rng.normal(0.5, 2.0, size=(50, 12))
    dec = SCDecoder(spec, Q5)
    u_b, x_b = dec.decode(llrs)
    for i in range(50):
        u, x = dec.decode(llrs[i])
        assert np.array_equal(u, u_b[i]) and np.array_equal(x, x_b[i])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3]), min_size=1, max_size=4), st.integers(0, 2**32 - 1))
def test_reencode_consistency_and_frozen_zero(dims, seed):
    rng = np.random.default_rng(seed)
    seq = KernelSeq(tuple(dims))
    spec = random_spec(seq, rng)
    u, x = decode(spec, rng.normal(0.0, 3.0, seq.n_bits))
    assert np.array_equal(encode_u(u, seq), x)
    assert not u[list(spec.frozen)].any()


def test_trace_format():
    spec = CodeSpec.all_info(KernelSeq((3, 2)))
    trace = []
    decode(spec, np.array([1, -2, 3, -4, 5, 6], dtype=float), model=Q5, trace=trace)
    assert trace[0] == "0 0 f3 +1 +2"
    assert trace[1] == "1 0 pair +1 +2"
    assert [t.split()[2] for t in trace] == ["f3", "pair", "g1", "pair", "g2t", "pair"]


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        decode(CodeSpec.all_info(KernelSeq((2, 2))), np.zeros(3))


def test_quantized_close_to_real_pc48():
    spec = construct(PRESET_KERNELS[48], 24, 2.0, frames=20_000)
    real = measure(spec, 4.0, max_frames=20_000, max_frame_errors=None, seed=5)
    quant = measure(spec, 4.0, max_frames=20_000, max_frame_errors=None, seed=5, model=Q5)
    assert real.frame_errors > 20
    assert 0.5 <= quant.fer / real.fer <= 2.0

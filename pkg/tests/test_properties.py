"""Kernel invariants checked over randomized instances."""

import numpy as np
import pytest

from lvc import (
    CompressionConfig,
    Mode,
    QueryEmbedding,
    SentenceQuery,
    VideoFeatures,
    avg_pool_compress,
    compress,
    derive_window_length,
    mean_pool_query,
    window_weights,
)

SIZES = [(8, 1, 8, 2), (8, 4, 8, 4), (16, 2, 16, 4), (64, 4, 8, 16),
         (64, 1, 64, 64), (32, 2, 8, 8)]


def instance(seed, frames, tokens, dim):
    rng = np.random.default_rng(seed)
    v = VideoFeatures.from_array(
        rng.standard_normal((frames * tokens, dim)).astype(np.float32), tokens)
    q = QueryEmbedding.from_array(
        rng.standard_normal((4, dim)).astype(np.float32))
    return v, q


def test_weights_are_simplex_points():
    rng = np.random.default_rng(100)
    for _ in range(200):
        w = int(rng.integers(1, 9))
        dim = int(rng.integers(1, 17))
        q_bar = SentenceQuery(
            dim, (rng.standard_normal(dim) * 3).astype(np.float32))
        window = (rng.standard_normal((w, dim)) * 3).astype(np.float32)
        weights = window_weights(q_bar, window, dim)
        assert abs(float(weights.sum()) - 1.0) <= 1e-6
        assert (weights >= 0).all() and (weights <= 1).all()


@pytest.mark.parametrize("frames,tokens,dim,target", SIZES)
def test_within_window_permutation_invariance(frames, tokens, dim, target):
    v, q = instance((frames, tokens, 1), frames, tokens, dim)
    cfg = CompressionConfig(target)
    base = compress(v, q, cfg).data

    rng = np.random.default_rng(7)
    w = derive_window_length(frames, target)
    shuffled = v.data.reshape(-1, w, dim).copy()
    for i in range(shuffled.shape[0]):
        shuffled[i] = shuffled[i][rng.permutation(w)]
    v2 = VideoFeatures.from_array(shuffled.reshape(-1, dim), tokens)
    assert np.abs(compress(v2, q, cfg).data - base).max() <= 1e-6


@pytest.mark.parametrize("frames,tokens,dim,target", SIZES)
def test_convex_envelope(frames, tokens, dim, target):
    v, q = instance((frames, tokens, 2), frames, tokens, dim)
    out = compress(v, q, CompressionConfig(target)).data
    w = derive_window_length(frames, target)
    wins = v.data.reshape(-1, w, dim)
    assert (out >= wins.min(axis=1) - 1e-6).all()
    assert (out <= wins.max(axis=1) + 1e-6).all()


@pytest.mark.parametrize("frames,tokens,dim,target", SIZES)
def test_zero_query_equals_average_pool(frames, tokens, dim, target):
    v, _ = instance((frames, tokens, 3), frames, tokens, dim)
    q = QueryEmbedding.from_array(np.zeros((3, dim), np.float32))
    attn = compress(v, q, CompressionConfig(target)).data
    avg = avg_pool_compress(
        v, CompressionConfig(target, mode=Mode.AVERAGE_POOL)).data
    assert np.abs(attn - avg).max() <= 1e-6


@pytest.mark.parametrize("frames,tokens,dim", [(8, 2, 4), (16, 1, 8)])
def test_identity_when_target_equals_frames(frames, tokens, dim):
    v, q = instance((frames, tokens, 4), frames, tokens, dim)
    out = compress(v, q, CompressionConfig(frames)).data
    assert np.array_equal(out, v.data)


def test_multihead_single_head_degeneracy():
    for seed, (frames, tokens, dim, target) in enumerate(SIZES):
        v, q = instance((seed, 5), frames, tokens, dim)
        mh = compress(v, q, CompressionConfig(
            target, heads=1, mode=Mode.QUERY_ATTENTION_MULTI_HEAD)).data
        sh = compress(v, q, CompressionConfig(target)).data
        assert np.abs(mh - sh).max() <= 1e-6


def test_concentration_under_query_scaling():
    rng = np.random.default_rng(200)
    dim, w = 8, 4
    checked = 0
    while checked < 20:
        window = rng.standard_normal((w, dim)).astype(np.float32)
        qrow = rng.standard_normal(dim).astype(np.float32)
        q_bar = mean_pool_query(QueryEmbedding.from_array(qrow))
        logits = np.sort(
            (window.astype(np.float64) @ q_bar.data.astype(np.float64))
            / np.sqrt(dim))
        if logits[-1] - logits[-2] < 0.1:  # need a clear unique maximum
            continue
        checked += 1
        scaled = SentenceQuery(dim, (q_bar.data * 1e3).astype(np.float32))
        weights = window_weights(scaled, window, dim)
        top = int(np.argmax(weights))
        assert float(weights[top]) >= 1 - 1e-6
        v = VideoFeatures.from_array(window, 1)
        q_big = QueryEmbedding.from_array((qrow * 1e3).astype(np.float32))
        out = compress(v, q_big, CompressionConfig(1)).data[0]
        assert np.abs(out - window[top]).max() <= 1e-3


def test_determinism_across_thread_counts():
    v, q = instance(300, 64, 4, 32)
    cfg = CompressionConfig(16)
    outs = [compress(v, q, cfg, threads=n).data.tobytes() for n in (1, 2, 7)]
    assert outs[0] == outs[1] == outs[2]
    avg_cfg = CompressionConfig(16, mode=Mode.AVERAGE_POOL)
    avgs = [avg_pool_compress(v, avg_cfg, threads=n).data.tobytes()
            for n in (1, 3)]
    assert avgs[0] == avgs[1]


def test_threads_env_is_honored(monkeypatch):
    v, q = instance(301, 16, 2, 8)
    cfg = CompressionConfig(4)
    base = compress(v, q, cfg).data.tobytes()
    monkeypatch.setenv("LVC_THREADS", "4")
    assert compress(v, q, cfg).data.tobytes() == base

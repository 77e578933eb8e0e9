"""Windowed query-attention compression kernel.

Dense frame-token features (M frames x t tokens x d dims, stored as an
(M*t) x d row-major float32 matrix) are sliced into runs of w consecutive
token rows; each run is collapsed to a single output row by a softmax
attention pool scored against the sentence-level query vector. The output
is shaped exactly like M' = M/w real frames of t tokens each.

Numerical contract: float32 storage, float64 accumulation, fixed
ascending-index summation inside each window. Windows are independent, so
results are bit-identical regardless of how work is split across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyQuery,
    HeadsDontDivide,
    IndivisibleFrames,
    InvalidConfig,
    NonFiniteInput,
)

THREADS_ENV = "LVC_THREADS"


def _checked_f32(data, rows, cols, what):
    arr = np.asarray(data)
    if arr.shape != (rows, cols):
        raise DimensionMismatch(
            f"{what}: expected shape {(rows, cols)}, got {arr.shape}")
    if arr.dtype != np.float32:
        arr = arr.astype(np.float32)
    if not np.isfinite(arr).all():
        raise NonFiniteInput(f"{what}: contains NaN or Inf")
    return np.ascontiguousarray(arr)


@dataclass
class VideoFeatures:
    """Sampled frame features: (frames * tokens_per_frame) rows x dim cols."""

    frames: int
    tokens_per_frame: int
    dim: int
    data: np.ndarray

    def __post_init__(self):
        if self.frames < 1 or self.tokens_per_frame < 1 or self.dim < 1:
            raise InvalidConfig("frames, tokens_per_frame and dim must be >= 1")
        self.data = _checked_f32(
            self.data, self.frames * self.tokens_per_frame, self.dim,
            "features")

    @classmethod
    def from_array(cls, data, tokens_per_frame: int) -> "VideoFeatures":
        arr = np.asarray(data)
        if arr.ndim == 3:
            if tokens_per_frame != arr.shape[1]:
                raise DimensionMismatch(
                    f"tokens_per_frame {tokens_per_frame} does not match "
                    f"3-D feature axis {arr.shape[1]}")
            arr = arr.reshape(arr.shape[0] * arr.shape[1], arr.shape[2])
        if arr.ndim != 2:
            raise DimensionMismatch(
                f"features must be 2-D or 3-D, got {arr.ndim}-D")
        if tokens_per_frame < 1 or arr.shape[0] % tokens_per_frame != 0:
            raise DimensionMismatch(
                f"{arr.shape[0]} feature rows not divisible by "
                f"tokens_per_frame {tokens_per_frame}")
        return cls(arr.shape[0] // tokens_per_frame, tokens_per_frame,
                   arr.shape[1], arr)


@dataclass
class QueryEmbedding:
    """Per-token query features: length rows x dim cols."""

    length: int
    dim: int
    data: np.ndarray

    def __post_init__(self):
        if self.length < 1:
            raise EmptyQuery("query embedding has no tokens")
        self.data = _checked_f32(self.data, self.length, self.dim, "query")

    @classmethod
    def from_array(cls, data) -> "QueryEmbedding":
        arr = np.asarray(data)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionMismatch(f"query must be 1-D or 2-D, got {arr.ndim}-D")
        if arr.shape[0] == 0:
            raise EmptyQuery("query embedding has no tokens")
        return cls(arr.shape[0], arr.shape[1], arr)


@dataclass
class SentenceQuery:
    """Token-mean of a query embedding; one d-dimensional vector."""

    dim: int
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.shape != (self.dim,):
            raise DimensionMismatch(
                f"sentence query: expected shape ({self.dim},), got {arr.shape}")
        if arr.dtype != np.float32:
            arr = arr.astype(np.float32)
        if not np.isfinite(arr).all():
            raise NonFiniteInput("sentence query contains NaN or Inf")
        self.data = arr


class Mode(str, Enum):
    QUERY_ATTENTION = "query-attn"
    QUERY_ATTENTION_MULTI_HEAD = "query-attn-mh"
    AVERAGE_POOL = "avg-pool"


ATTENTION_MODES = (Mode.QUERY_ATTENTION, Mode.QUERY_ATTENTION_MULTI_HEAD)


@dataclass
class CompressionConfig:
    """Target pseudo-frame count plus attention-head count and mode."""

    target_frames: int
    heads: int = 1
    mode: Mode = Mode.QUERY_ATTENTION

    def __post_init__(self):
        self.mode = Mode(self.mode)
        if self.target_frames < 1:
            raise InvalidConfig("target_frames must be >= 1")
        if self.heads < 1:
            raise InvalidConfig("heads must be >= 1")
        if self.mode != Mode.QUERY_ATTENTION_MULTI_HEAD and self.heads != 1:
            raise InvalidConfig(
                f"heads must be 1 in mode {self.mode.value!r}, got {self.heads}")


@dataclass
class WindowWeights:
    """Softmax weights for one window: heads rows x window-length cols."""

    window_index: int
    per_head: np.ndarray


@dataclass
class PseudoFrames:
    """Compressed output shaped like frames real frames of tokens each."""

    frames: int
    tokens_per_frame: int
    dim: int
    data: np.ndarray

    def __post_init__(self):
        self.data = _checked_f32(
            self.data, self.frames * self.tokens_per_frame, self.dim,
            "pseudo frames")


def mean_pool_query(q: QueryEmbedding) -> SentenceQuery:
    """Token-mean of the query embedding (64-bit accumulation)."""
    acc = np.add.reduce(q.data.astype(np.float64), axis=0)
    return SentenceQuery(q.dim, (acc / q.length).astype(np.float32))


def derive_window_length(frames: int, target_frames: int) -> int:
    """Window length w = frames / target_frames; division must be exact."""
    if frames < 1 or target_frames < 1:
        raise InvalidConfig("frame counts must be >= 1")
    if frames % target_frames != 0:
        raise IndivisibleFrames(
            f"target_frames {target_frames} does not divide frames {frames}")
    return frames // target_frames


def slice_windows(v: VideoFeatures, w: int) -> np.ndarray:
    """Tile the feature rows into consecutive windows of w rows each.

    Returns a (num_windows, w, dim) view; window i holds rows
    [i*w, (i+1)*w) in their original order.
    """
    if w < 1 or (v.frames * v.tokens_per_frame) % w != 0:
        raise IndivisibleFrames(
            f"window length {w} does not tile {v.frames * v.tokens_per_frame} rows")
    return v.data.reshape(-1, w, v.dim)


def window_weights(q_bar: SentenceQuery, window: np.ndarray,
                   head_dim: int) -> np.ndarray:
    """Softmax attention weights of one window against the sentence query.

    head_dim is the dimension inside the sqrt scaling: the full feature
    dim for single-head use, dim/heads for a per-head slice.
    """
    win = np.asarray(window, dtype=np.float64)
    if win.ndim != 2:
        raise DimensionMismatch(f"window must be 2-D, got {win.ndim}-D")
    q = np.asarray(q_bar.data, dtype=np.float64)
    if q.shape[0] != win.shape[1]:
        raise DimensionMismatch(
            f"query dim {q.shape[0]} != window dim {win.shape[1]}")
    if not np.isfinite(win).all() or not np.isfinite(q).all():
        raise NonFiniteInput("window weights: non-finite input")
    logits = (win * q).sum(axis=1) / math.sqrt(head_dim)
    logits -= logits.max()
    e = np.exp(logits)
    return (e / e.sum()).astype(np.float32)


def compress_window(weights: np.ndarray, window: np.ndarray) -> np.ndarray:
    """Weighted sum of the window rows, sequential in ascending row index."""
    win = np.asarray(window, dtype=np.float64)
    wts = np.asarray(weights, dtype=np.float64)
    if win.ndim != 2 or wts.ndim != 1 or wts.shape[0] != win.shape[0]:
        raise DimensionMismatch(
            f"weights {wts.shape} do not match window {win.shape}")
    acc = np.zeros(win.shape[1], dtype=np.float64)
    for k in range(win.shape[0]):
        acc += wts[k] * win[k]
    return acc.astype(np.float32)


def _resolve_threads(threads):
    if threads is not None:
        return max(1, int(threads))
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pool_windows(windows: np.ndarray, q_bar64: np.ndarray, heads: int):
    """Attention-pool a block of windows. float64 throughout, float64 out."""
    nw, w, d = windows.shape
    dh = d // heads
    win = windows.reshape(nw, w, heads, dh).astype(np.float64)
    q = q_bar64.reshape(heads, dh)
    logits = (win * q).sum(axis=3) / math.sqrt(dh)  # (nw, w, heads)
    logits -= logits.max(axis=1, keepdims=True)
    e = np.exp(logits)
    wts = e / e.sum(axis=1, keepdims=True)
    out = np.zeros((nw, heads, dh), dtype=np.float64)
    for k in range(w):
        out += wts[:, k, :, None] * win[:, k, :, :]
    return out.reshape(nw, d)


def _run_chunked(windows, fn, threads):
    nw = windows.shape[0]
    threads = min(threads, nw)
    if threads <= 1:
        return fn(windows)
    bounds = [nw * i // threads for i in range(threads + 1)]
    chunks = [windows[bounds[i]:bounds[i + 1]] for i in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts, axis=0)


def _attention_compress(v, q, cfg, heads, threads):
    if v.dim % heads != 0:
        raise HeadsDontDivide(f"{heads} heads do not divide dim {v.dim}")
    if q.dim != v.dim:
        raise DimensionMismatch(f"query dim {q.dim} != feature dim {v.dim}")
    w = derive_window_length(v.frames, cfg.target_frames)
    windows = slice_windows(v, w)
    q_bar64 = mean_pool_query(q).data.astype(np.float64)
    out = _run_chunked(
        windows, lambda blk: _pool_windows(blk, q_bar64, heads),
        _resolve_threads(threads))
    return PseudoFrames(cfg.target_frames, v.tokens_per_frame, v.dim,
                        out.astype(np.float32))


def compress(v: VideoFeatures, q: QueryEmbedding, cfg: CompressionConfig,
             threads: int | None = None) -> PseudoFrames:
    """Full query-attention compression pipeline.

    Dispatches to the multi-head variant when the config asks for it.
    Deterministic: identical inputs give bit-identical output for any
    thread count.
    """
    if cfg.mode not in ATTENTION_MODES:
        raise InvalidConfig(
            f"compress requires an attention mode, got {cfg.mode.value!r}")
    if cfg.mode == Mode.QUERY_ATTENTION_MULTI_HEAD:
        return compress_multihead(v, q, cfg, threads)
    return _attention_compress(v, q, cfg, heads=1, threads=threads)


def compress_multihead(v: VideoFeatures, q: QueryEmbedding,
                       cfg: CompressionConfig,
                       threads: int | None = None) -> PseudoFrames:
    """Multi-head variant: contiguous dim slices, per-head softmax,
    per-head sqrt(dim/heads) scaling, head outputs concatenated."""
    return _attention_compress(v, q, cfg, heads=cfg.heads, threads=threads)


def avg_pool_compress(v: VideoFeatures, cfg: CompressionConfig,
                      threads: int | None = None) -> PseudoFrames:
    """Query-free ablation: each output row is the mean of its window."""
    w = derive_window_length(v.frames, cfg.target_frames)
    windows = slice_windows(v, w)

    def pool(blk):
        win = blk.astype(np.float64)
        acc = np.zeros((win.shape[0], win.shape[2]), dtype=np.float64)
        for k in range(w):
            acc += win[:, k, :]
        return acc / w

    out = _run_chunked(windows, pool, _resolve_threads(threads))
    return PseudoFrames(cfg.target_frames, v.tokens_per_frame, v.dim,
                        out.astype(np.float32))

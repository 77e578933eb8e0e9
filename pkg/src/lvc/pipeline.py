"""Orchestration: frame sampling, compression jobs, synthetic retrieval
evaluation and the throughput benchmark."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from . import core, npyio, reports
from .core import CompressionConfig, Mode, QueryEmbedding, VideoFeatures
from .errors import InsufficientFrames, InvalidConfig, MissingQuery


@dataclass
class SamplingPlan:
    total_frames: int
    frames: int
    indices: list


def sample_frame_indices(total_frames: int, frames: int) -> SamplingPlan:
    """Uniform center sampling: index_j = floor((j + 0.5) * total / M)."""
    if frames < 1:
        raise InvalidConfig("frames must be >= 1")
    if total_frames < frames:
        raise InsufficientFrames(
            f"cannot sample {frames} frames from {total_frames}")
    indices = [(2 * j + 1) * total_frames // (2 * frames)
               for j in range(frames)]
    return SamplingPlan(total_frames, frames, indices)


def run_compression_job(features_path, query_path, *, tokens_per_frame: int,
                        pseudo_frames: int, heads: int = 1,
                        mode: str = "query-attn", out_path,
                        sidecar_path=None, threads=None) -> dict:
    """Load features (+ query), compress, write NPY + sidecar, return summary."""
    mode = Mode(mode)
    features = VideoFeatures.from_array(
        npyio.load_f32(features_path), tokens_per_frame)
    cfg = CompressionConfig(pseudo_frames, heads=heads, mode=mode)

    start = time.perf_counter()
    if mode == Mode.AVERAGE_POOL:
        result = core.avg_pool_compress(features, cfg, threads=threads)
        query_rows = 0
    else:
        if query_path is None:
            raise MissingQuery(f"mode {mode.value!r} requires a query file")
        query = QueryEmbedding.from_array(npyio.load_f32(query_path))
        result = core.compress(features, query, cfg, threads=threads)
        query_rows = query.length
    wall = time.perf_counter() - start

    if sidecar_path is None:
        sidecar_path = str(out_path) + ".json"
    npyio.write_npy(out_path, result.data)
    reports.write_report(sidecar_path, {
        "frames": result.frames,
        "tokens_per_frame": result.tokens_per_frame,
        "dim": result.dim,
    })
    return {
        "features_path": str(features_path),
        "query_path": None if query_path is None else str(query_path),
        "query_rows": query_rows,
        "input_shape": [features.frames * features.tokens_per_frame,
                        features.dim],
        "output_shape": [result.frames * result.tokens_per_frame, result.dim],
        "frames": features.frames,
        "pseudo_frames": result.frames,
        "tokens_per_frame": tokens_per_frame,
        "dim": features.dim,
        "window": features.frames // result.frames,
        "mode": mode.value,
        "heads": heads,
        "wall_time_s": wall,
        "out_path": str(out_path),
        "sidecar_path": str(sidecar_path),
    }


def _cosine(a, b):
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b)) / (na * nb)


def run_synthetic_retrieval_eval(*, trials: int, frames: int = 64,
                                 tokens_per_frame: int = 1, dim: int = 64,
                                 pseudo_frames: int = 4,
                                 noise_sigma: float = 0.0,
                                 seed: int = 0) -> dict:
    """Planted-signal retrieval surrogate comparing query attention against
    average pooling.

    Each trial plants one query-aligned row per window inside unit-norm
    noise rows; a trial is a win when the attention-pooled row is closer
    (cosine) to the target than the average-pooled row for a strict
    majority of windows. Ties are not wins.
    """
    if trials < 1:
        raise InvalidConfig("trials must be >= 1")
    w = core.derive_window_length(frames, pseudo_frames)
    num_windows = pseudo_frames * tokens_per_frame
    cfg_attn = CompressionConfig(pseudo_frames)
    cfg_avg = CompressionConfig(pseudo_frames, mode=Mode.AVERAGE_POOL)
    rng = np.random.default_rng(seed)

    wins = 0
    cos_attn_sum = 0.0
    cos_avg_sum = 0.0
    for _ in range(trials):
        target = rng.standard_normal(dim)
        target /= np.linalg.norm(target)
        rows = rng.standard_normal((num_windows, w, dim))
        rows /= np.linalg.norm(rows, axis=2, keepdims=True)
        planted = rng.integers(0, w, size=num_windows)
        for i in range(num_windows):
            row = target + noise_sigma * rng.standard_normal(dim)
            rows[i, planted[i]] = row / np.linalg.norm(row)
        features = VideoFeatures.from_array(
            rows.reshape(num_windows * w, dim).astype(np.float32),
            tokens_per_frame)
        query = QueryEmbedding.from_array(target.astype(np.float32))

        out_attn = core.compress(features, query, cfg_attn).data
        out_avg = core.avg_pool_compress(features, cfg_avg).data
        window_wins = 0
        for i in range(num_windows):
            ca = _cosine(out_attn[i], target)
            cm = _cosine(out_avg[i], target)
            cos_attn_sum += ca
            cos_avg_sum += cm
            if ca > cm:
                window_wins += 1
        if window_wins * 2 > num_windows:
            wins += 1

    total_rows = trials * num_windows
    return {
        "trials": trials,
        "wins": wins,
        "win_rate": wins / trials,
        "mean_cosine_attn": cos_attn_sum / total_rows,
        "mean_cosine_avg": cos_avg_sum / total_rows,
        "seed": seed,
        "config": {
            "frames": frames,
            "tokens_per_frame": tokens_per_frame,
            "dim": dim,
            "pseudo_frames": pseudo_frames,
            "window": w,
            "noise_sigma": noise_sigma,
        },
    }


def parse_size(text: str):
    """Parse a canonical MxTxD size string, e.g. 64x256x4096."""
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise InvalidConfig(f"size must be MxTxD, got {text!r}")
    try:
        m, t, d = (int(p) for p in parts)
    except ValueError as e:
        raise InvalidConfig(f"size must be MxTxD integers, got {text!r}") from e
    if m < 1 or t < 1 or d < 1:
        raise InvalidConfig(f"size components must be >= 1, got {text!r}")
    return m, t, d


def run_throughput_bench(*, sizes, repetitions: int = 5, seed: int = 0,
                         pseudo_frames: int = 16, query_rows: int = 8,
                         threads=None) -> dict:
    """Time the compression kernel (I/O excluded) over random instances.

    One warm-up run per size is excluded from the statistics.
    """
    if not sizes:
        raise InvalidConfig("sizes must be non-empty")
    if repetitions < 1:
        raise InvalidConfig("repetitions must be >= 1")
    entries = []
    for size in sizes:
        m, t, d = parse_size(size) if isinstance(size, str) else size
        rng = np.random.default_rng([seed, m, t, d])
        features = VideoFeatures.from_array(
            rng.standard_normal((m * t, d)).astype(np.float32), t)
        query = QueryEmbedding.from_array(
            rng.standard_normal((query_rows, d)).astype(np.float32))
        cfg = CompressionConfig(pseudo_frames)

        core.compress(features, query, cfg, threads=threads)  # warm-up
        times = []
        for _ in range(repetitions):
            start = time.perf_counter()
            core.compress(features, query, cfg, threads=threads)
            times.append(time.perf_counter() - start)
        times.sort()
        median = statistics.median(times)
        p95 = times[max(0, -(-95 * len(times) // 100) - 1)]
        entries.append({
            "size": f"{m}x{t}x{d}",
            "frames": m,
            "tokens_per_frame": t,
            "dim": d,
            "rows": m * t,
            "median_s": median,
            "p95_s": p95,
            "rows_per_s": (m * t) / median,
        })
    return {
        "sizes": entries,
        "repetitions": repetitions,
        "seed": seed,
        "pseudo_frames": pseudo_frames,
    }

"""Loop-only reference implementation used for parity testing.

Everything here is scalar Python arithmetic in float64 with no numpy
shortcuts, so it serves as an independent ground truth for the
vectorized kernel.
"""

from __future__ import annotations

import math

from .core import (
    ATTENTION_MODES,
    CompressionConfig,
    Mode,
    PseudoFrames,
    QueryEmbedding,
    VideoFeatures,
)
from .errors import DimensionMismatch, HeadsDontDivide, InvalidConfig


def oracle_compress(v: VideoFeatures, q: QueryEmbedding,
                    cfg: CompressionConfig) -> PseudoFrames:
    if cfg.mode not in ATTENTION_MODES:
        raise InvalidConfig(
            f"oracle_compress requires an attention mode, got {cfg.mode.value!r}")
    if q.dim != v.dim:
        raise DimensionMismatch(f"query dim {q.dim} != feature dim {v.dim}")
    heads = cfg.heads if cfg.mode == Mode.QUERY_ATTENTION_MULTI_HEAD else 1
    d = v.dim
    if d % heads != 0:
        raise HeadsDontDivide(f"{heads} heads do not divide dim {d}")
    dh = d // heads
    if v.frames % cfg.target_frames != 0:
        raise InvalidConfig(
            f"target_frames {cfg.target_frames} does not divide {v.frames}")
    w = v.frames // cfg.target_frames

    q_rows = q.data.tolist()
    q_bar = [0.0] * d
    for row in q_rows:
        for j in range(d):
            q_bar[j] += row[j]
    for j in range(d):
        q_bar[j] /= q.length

    rows = v.data.tolist()
    num_windows = (v.frames * v.tokens_per_frame) // w
    out_rows = []
    for i in range(num_windows):
        window = rows[i * w:(i + 1) * w]
        out = [0.0] * d
        for h in range(heads):
            lo = h * dh
            logits = []
            for k in range(w):
                s = 0.0
                for j in range(lo, lo + dh):
                    s += q_bar[j] * window[k][j]
                logits.append(s / math.sqrt(dh))
            top = max(logits)
            exps = [math.exp(x - top) for x in logits]
            z = sum(exps)
            for k in range(w):
                weight = exps[k] / z
                for j in range(lo, lo + dh):
                    out[j] += weight * window[k][j]
        out_rows.append(out)
    return PseudoFrames(cfg.target_frames, v.tokens_per_frame, d, out_rows)

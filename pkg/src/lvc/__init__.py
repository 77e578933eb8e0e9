"""Query-attention video feature compression."""

__version__ = "0.1.0"

from .core import (  # noqa: E402,F401
    CompressionConfig,
    Mode,
    PseudoFrames,
    QueryEmbedding,
    SentenceQuery,
    VideoFeatures,
    WindowWeights,
    avg_pool_compress,
    compress,
    compress_multihead,
    compress_window,
    derive_window_length,
    mean_pool_query,
    slice_windows,
    window_weights,
)
from .oracle import oracle_compress  # noqa: E402,F401

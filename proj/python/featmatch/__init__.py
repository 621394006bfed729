"""Feature matching between two datasets' feature lists.

Fuses a token-set Jaccard similarity with an embedding-space cosine
similarity and returns thresholded, ranked correspondences. The heavy
lifting lives in the compiled `_featmatch` extension.
"""

from ._featmatch import (
    FeatmatchError,
    baseline_embed,
    cosine,
    fuse,
    jaccard,
    match,
    normalize,
    sanitize,
    stem,
    __version__,
)

__all__ = [
    "FeatmatchError",
    "baseline_embed",
    "cosine",
    "fuse",
    "jaccard",
    "match",
    "normalize",
    "sanitize",
    "stem",
    "__version__",
]

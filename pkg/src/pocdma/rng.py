"""Counter-based random bits.

Every output is a pure function of ``(seed, row, column)`` so instances can
be generated in any order, in parallel, and still come out bit-identical.
The mixer is the SplitMix64 finalizer.
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def mix64(z):
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def keyed_words(seed, rows: int, cols: int) -> np.ndarray:
    """``rows x cols`` uint64 words, entry (r, c) depending only on (seed, r, c)."""
    key = mix64(np.uint64(_check_seed(seed)) ^ _GOLDEN)
    r = np.arange(rows, dtype=np.uint64)[:, None]
    c = np.arange(cols, dtype=np.uint64)[None, :]
    with np.errstate(over="ignore"):
        counter = (r << np.uint64(32)) | c
        return mix64(mix64(counter + _GOLDEN) ^ key)


def sign_matrix(seed, rows: int, cols: int) -> np.ndarray:
    """Uniform +-1 entries (int8) from the top bit of each keyed word."""
    top = (keyed_words(seed, rows, cols) >> np.uint64(63)).astype(np.int8)
    return (2 * top - 1).astype(np.int8)


def derive_seed(seed, index: int) -> int:
    """Child seed for stream ``index``; distinct indices give unrelated streams."""
    with np.errstate(over="ignore"):
        z = np.uint64(_check_seed(seed)) + np.uint64(index + 1) * _GOLDEN
    return int(mix64(mix64(z)))

"""Finite pseudo-orthogonal CDMA link over AWGN with per-user matched filters.

Signatures are scaled by 1/sqrt(N) so every user has unit energy per bit and
the matched-filter noise for each user has variance ``noise_sigma**2``.
Detection uses the integer-scaled statistic ``sqrt(N) * <s_k, r>`` so that
noiseless decisions are exact; ``sign(0)`` resolves to +1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .oracle import SpreadingInstance, admissible_mask, default_threads
from .rng import derive_seed

MAX_CODEBOOK_USERS = 20
BLOCK_FRAMES = 4096


@dataclass(frozen=True)
class LinkConfig:
    instance: SpreadingInstance
    k_prime: int
    noise_sigma: float
    frames: int
    seed: int

    def __post_init__(self):
        if self.frames < 1:
            raise DomainError(f"frames must be >= 1, got {self.frames}")
        if not (self.noise_sigma >= 0.0 and math.isfinite(self.noise_sigma)):
            raise DomainError(f"noise_sigma must be finite and >= 0, got {self.noise_sigma}")
        if not 1 <= self.k_prime <= self.instance.k_users:
            raise DomainError(f"k_prime must lie in [1, {self.instance.k_users}]")


@dataclass(frozen=True)
class BerStats:
    constrained_errors: int
    constrained_bits: int
    unconstrained_errors: int
    unconstrained_bits: int
    ber_constrained: float
    ber_unconstrained: float
    per_user_errors: tuple[int, ...]
    frames: int

    def per_user_ber(self) -> np.ndarray:
        return np.asarray(self.per_user_errors, dtype=float) / self.frames


def build_codebook(instance: SpreadingInstance, k_prime: int) -> np.ndarray:
    """All admissible codewords as rows of an int8 array, in lexicographic order
    (``b_1`` most significant, -1 before +1)."""
    k = instance.k_users
    if k > MAX_CODEBOOK_USERS:
        raise CapacityError(f"codebook enumeration is limited to K <= {MAX_CODEBOOK_USERS}, got {k}")
    if not 1 <= k_prime <= k:
        raise DomainError(f"k_prime must lie in [1, {k}], got {k_prime}")
    idx = np.arange(1 << k, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(k - 1, -1, -1)) & 1
    words = 2 * bits - 1
    book = words[admissible_mask(instance.gram, k_prime, words)].astype(np.int8)
    if book.shape[0] == 0:
        raise DomainError("no admissible codeword: cannot signal on this instance")
    return book


def _block(chips, codebook, sigma, n, seed):
    rng = np.random.default_rng(seed)
    k, n_chips = chips.shape
    if codebook is None:
        b = 2 * rng.integers(0, 2, size=(n, k)) - 1
    else:
        b = codebook[rng.integers(0, codebook.shape[0], size=n)].astype(np.int64)
    s = chips.astype(np.int64)
    # sqrt(N) times the received chip vector; exact integers when sigma == 0
    received = (b @ s).astype(float)
    if sigma > 0.0:
        received += sigma * math.sqrt(n_chips) * rng.standard_normal((n, n_chips))
    stat = received @ s.T.astype(float)
    decided = np.where(stat >= 0.0, 1, -1)
    return np.count_nonzero(decided != b, axis=0)


def transmit_detect(
    config: LinkConfig,
    codebook: np.ndarray | None = None,
    signaling: str = "codebook",
    threads: int | None = None,
) -> BerStats:
    """Simulate ``config.frames`` channel uses and count bit errors by group.

    ``signaling="codebook"`` draws each frame uniformly from the admissible
    codebook; ``"uniform"`` draws unconstrained random bits (the control case
    with an interference floor).  Frames are simulated in fixed blocks of
    ``BLOCK_FRAMES`` with one derived generator per block, so the result is
    independent of ``threads``.
    """
    inst = config.instance
    if signaling == "codebook":
        book = build_codebook(inst, config.k_prime) if codebook is None else np.asarray(codebook)
    elif signaling == "uniform":
        book = None
    else:
        raise DomainError(f"unknown signaling {signaling!r}")

    sizes = [BLOCK_FRAMES] * (config.frames // BLOCK_FRAMES)
    if config.frames % BLOCK_FRAMES:
        sizes.append(config.frames % BLOCK_FRAMES)

    def run(j):
        return _block(inst.chips, book, config.noise_sigma, sizes[j], derive_seed(config.seed, j))

    threads = threads or default_threads()
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(j) for j in range(len(sizes))]
    per_user = np.sum(parts, axis=0)

    kp, k = config.k_prime, inst.k_users
    ce, ue = int(per_user[:kp].sum()), int(per_user[kp:].sum())
    cb, ub = kp * config.frames, (k - kp) * config.frames
    return BerStats(
        constrained_errors=ce,
        constrained_bits=cb,
        unconstrained_errors=ue,
        unconstrained_bits=ub,
        ber_constrained=ce / cb,
        ber_unconstrained=ue / ub if ub else 0.0,
        per_user_errors=tuple(int(x) for x in per_user),
        frames=config.frames,
    )


def snr_db(sigma: float) -> float:
    """Per-bit SNR at the matched-filter output, ``10 log10(1/sigma^2)``."""
    return math.inf if sigma == 0.0 else -20.0 * math.log10(sigma)


@dataclass(frozen=True)
class BerSweepRow:
    sigma: float
    snr_db: float
    ber_constrained: float
    ber_unconstrained: float
    frames: int


def ber_sweep(instance, k_prime, sigmas, frames, seed, signaling="codebook", threads=None) -> list[BerSweepRow]:
    """BER against noise level; each sigma gets its own derived seed."""
    book = build_codebook(instance, k_prime) if signaling == "codebook" else None
    rows = []
    for i, sigma in enumerate(sigmas):
        cfg = LinkConfig(instance, k_prime, float(sigma), frames, derive_seed(seed, i))
        st = transmit_detect(cfg, codebook=book, signaling=signaling, threads=threads)
        rows.append(BerSweepRow(float(sigma), snr_db(float(sigma)), st.ber_constrained, st.ber_unconstrained, frames))
    return rows

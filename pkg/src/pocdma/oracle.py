"""Exact admissible-codeword counting on finite random spreading instances.

A codeword ``b`` in {-1, +1}^K is admissible for the first ``k_prime`` users
when each of them sees a matched-filter output with the same sign as its own
bit.  All tests are done on the integer Gram matrix ``G = S S^T`` so exact
ties (which do occur with +-1 chips) are decided without rounding; a tie
counts as a violation.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np

from .errors import CapacityError, DomainError
from .rng import derive_seed, sign_matrix

log = logging.getLogger(__name__)

MAX_ENUM_USERS = 30
_NAIVE_CHUNK = 1 << 16


@dataclass(eq=False)
class SpreadingInstance:
    chips: np.ndarray  # K x N, int8 in {-1, +1}
    gram: np.ndarray  # K x K, int64, sum_mu s_k^mu s_i^mu
    seed: int

    @property
    def k_users(self) -> int:
        return self.chips.shape[0]

    @property
    def n_chips(self) -> int:
        return self.chips.shape[1]

    @property
    def crosscorr(self) -> np.ndarray:
        return self.gram / self.n_chips


@dataclass(frozen=True)
class CodewordCountStats:
    k_users: int
    n_chips: int
    k_prime: int
    counts: tuple[int, ...]
    h_emp_bits: float
    h_emp_stderr: float
    cv: float
    instances: int
    anomalies: int = 0


def gen_spreading(k_users: int, n_chips: int, seed: int) -> SpreadingInstance:
    """Random binary spreading instance; chip (k, mu) depends only on (seed, k, mu)."""
    if k_users < 1 or n_chips < 1:
        raise DomainError(f"need k_users >= 1 and n_chips >= 1, got {k_users}, {n_chips}")
    chips = sign_matrix(seed, k_users, n_chips)
    wide = chips.astype(np.int64)
    return SpreadingInstance(chips=chips, gram=wide @ wide.T, seed=int(seed))


def instance_from_chips(chips, seed: int = 0) -> SpreadingInstance:
    chips = np.asarray(chips)
    if chips.ndim != 2 or not np.all(np.abs(chips) == 1):
        raise DomainError("chips must be a 2-D array of +-1 entries")
    chips = chips.astype(np.int8)
    wide = chips.astype(np.int64)
    return SpreadingInstance(chips=chips, gram=wide @ wide.T, seed=int(seed))


def _check_k_prime(instance, k_prime):
    if not 1 <= k_prime <= instance.k_users:
        raise DomainError(f"k_prime must lie in [1, {instance.k_users}], got {k_prime}")


def _as_signs(b, k_users):
    b = np.asarray(b)
    if b.shape != (k_users,) or not np.all(np.abs(b) == 1):
        raise DomainError(f"b must be a length-{k_users} vector of +-1 entries")
    return b.astype(np.int64)


def is_po_codeword(instance: SpreadingInstance, b, k_prime: int) -> bool:
    """True iff ``b_k * (G b)_k > 0`` for every protected user ``k < k_prime``."""
    _check_k_prime(instance, k_prime)
    b = _as_signs(b, instance.k_users)
    scores = b[:k_prime] * (instance.gram[:k_prime] @ b)
    return bool(np.all(scores > 0))


def admissible_mask(gram: np.ndarray, k_prime: int, codewords: np.ndarray) -> np.ndarray:
    """Vectorized admissibility of the rows of ``codewords``."""
    fields = codewords @ gram[:k_prime].T
    return np.all(codewords[:, :k_prime] * fields > 0, axis=1)


def index_to_codewords(idx: np.ndarray, k_users: int) -> np.ndarray:
    """Bit ``k`` of each index maps to ``b_k`` (0 -> -1, 1 -> +1)."""
    bits = (np.asarray(idx, dtype=np.int64)[:, None] >> np.arange(k_users)) & 1
    return (2 * bits - 1).astype(np.int64)


@numba.njit(cache=True, nogil=True)
def _gray_count(gram, k_prime):
    k = gram.shape[0]
    # b and -b are admissible together, so walk the half-space with the last
    # bit pinned to +1 and double the count.
    free = k - 1
    b = -np.ones(k, dtype=np.int64)
    b[k - 1] = 1
    field = np.zeros(k, dtype=np.int64)
    for r in range(k):
        for c in range(k):
            field[r] += gram[r, c] * b[c]
    count = 0
    total = np.int64(1) << free
    for i in range(total):
        ok = True
        for j in range(k_prime):
            if b[j] * field[j] <= 0:
                ok = False
                break
        if ok:
            count += 1
        if i + 1 == total:
            break
        # index of the bit flipped between Gray codes i and i+1
        flip = 0
        m = i + 1
        while (m & 1) == 0:
            m >>= 1
            flip += 1
        b[flip] = -b[flip]
        step = 2 * b[flip]
        for r in range(k):
            field[r] += step * gram[r, flip]
    return 2 * count


def check_enumerable(k_users: int) -> None:
    if k_users > MAX_ENUM_USERS:
        raise CapacityError(
            f"exhaustive enumeration is limited to K <= {MAX_ENUM_USERS} (got K={k_users}); "
            "larger systems need a sampling estimator"
        )


def _guard(instance):
    check_enumerable(instance.k_users)


def count_codewords_naive(instance: SpreadingInstance, k_prime: int) -> int:
    """Recount by testing every codeword against the full Gram product."""
    _check_k_prime(instance, k_prime)
    _guard(instance)
    k = instance.k_users
    total = 0
    for start in range(0, 1 << k, _NAIVE_CHUNK):
        idx = np.arange(start, min(start + _NAIVE_CHUNK, 1 << k))
        total += int(np.count_nonzero(admissible_mask(instance.gram, k_prime, index_to_codewords(idx, k))))
    return total


def count_codewords(instance: SpreadingInstance, k_prime: int) -> int:
    """Exact number of admissible codewords.

    Walks codewords in Gray-code order so each step flips one bit and the K
    integer matched-filter fields update in O(K).
    """
    _check_k_prime(instance, k_prime)
    _guard(instance)
    if instance.k_users == 1:
        return 2
    return int(_gray_count(np.ascontiguousarray(instance.gram, dtype=np.int64), k_prime))


def k_prime_for(gamma: float, k_users: int) -> int:
    """Finite-size protected-user count, ``round(gamma*K)`` clamped to [1, K]."""
    return min(k_users, max(1, int(round(gamma * k_users))))


def default_threads() -> int:
    env = os.environ.get("POCDMA_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def empirical_entropy(
    k_users: int,
    n_chips: int,
    k_prime: int,
    instances: int,
    seed: int,
    threads: int | None = None,
) -> CodewordCountStats:
    """Per-user log-count statistics over independent random instances.

    Instance ``i`` uses ``derive_seed(seed, i)``, so results do not depend on
    ``threads``.  ``cv`` is the across-instance coefficient of variation of
    ``log2(count)/K``, a finite-size view of self-averaging.
    """
    if instances < 1:
        raise DomainError(f"instances must be >= 1, got {instances}")
    check_enumerable(k_users)
    if not 1 <= k_prime <= k_users:
        raise DomainError(f"k_prime must lie in [1, {k_users}], got {k_prime}")

    def one(i):
        inst = gen_spreading(k_users, n_chips, derive_seed(seed, i))
        return count_codewords(inst, k_prime)

    threads = threads or default_threads()
    if threads > 1 and instances > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(one, range(instances)))
    else:
        counts = [one(i) for i in range(instances)]

    good = [c for c in counts if c > 0]
    anomalies = len(counts) - len(good)
    if anomalies:
        log.warning("%d instance(s) had no admissible codeword and were excluded", anomalies)
    if not good:
        raise DomainError("no instance had an admissible codeword")
    per_user = np.log2(np.asarray(good, dtype=float)) / k_users
    mean = float(per_user.mean())
    sd = float(per_user.std(ddof=1)) if per_user.size > 1 else 0.0
    return CodewordCountStats(
        k_users=k_users,
        n_chips=n_chips,
        k_prime=k_prime,
        counts=tuple(int(c) for c in counts),
        h_emp_bits=mean,
        h_emp_stderr=sd / math.sqrt(per_user.size),
        cv=sd / mean if mean > 0 else math.inf,
        instances=instances,
        anomalies=anomalies,
    )


@dataclass(frozen=True)
class GoldenCount:
    seed: int
    k_users: int
    n_chips: int
    k_prime: int
    count: int


def read_golden(path) -> list[GoldenCount]:
    """Parse ``seed,K,N,k_prime,count`` lines; blank and ``#`` lines are skipped."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [int(x) for x in line.split(",")]
        if len(fields) != 5:
            raise ValueError(f"malformed golden-count line: {line!r}")
        out.append(GoldenCount(*fields))
    return out


def write_golden(path, records) -> None:
    lines = [f"{r.seed},{r.k_users},{r.n_chips},{r.k_prime},{r.count}" for r in records]
    Path(path).write_text("\n".join(lines) + "\n")

"""
Exact enrichment statistics.

Hypergeometric probabilities are evaluated in log space from a log-factorial
table, so genome-scale universes never overflow.
"""

import threading
from collections.abc import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from core.models.enrichment import ContingencyTable
from utils.exceptions import DomainError


class LogFactorialTable:
    """Grow-on-demand table of ln(n!)."""

    def __init__(self, initial_size: int = 1024):
        self._lock = threading.Lock()
        self._table = gammaln(np.arange(initial_size + 1, dtype=np.float64) + 1.0)

    def __getitem__(self, n: int) -> float:
        if n >= len(self._table):
            self._grow(n)
        return float(self._table[n])

    def _grow(self, n: int) -> None:
        with self._lock:
            if n < len(self._table):
                return
            size = max(n + 1, 2 * len(self._table))
            self._table = gammaln(np.arange(size, dtype=np.float64) + 1.0)

    def log_comb(self, n: int, k: int) -> float:
        return self[n] - self[k] - self[n - k]


_LOG_FACTORIALS = LogFactorialTable()


def _require_count(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")


def _log_pmf(k: int, N: int, K: int, n: int) -> float:
    lf = _LOG_FACTORIALS
    return lf.log_comb(K, k) + lf.log_comb(N - K, n - k) - lf.log_comb(N, n)


def hypergeometric_pmf(k: int, N: int, K: int, n: int) -> float:
    """
    P(X = k) for X ~ Hypergeometric(population N, successes K, draws n).

    Raises:
        DomainError: If any argument lies outside the support
    """
    for name, value in (("k", k), ("N", N), ("K", K), ("n", n)):
        _require_count(name, value)

    if N < 0 or not 0 <= K <= N or not 0 <= n <= N:
        raise DomainError(f"invalid hypergeometric parameters N={N}, K={K}, n={n}")
    if not max(0, n + K - N) <= k <= min(n, K):
        raise DomainError(f"k={k} outside support [{max(0, n + K - N)}, {min(n, K)}]")

    return min(1.0, float(np.exp(_log_pmf(k, N, K, n))))


def fisher_exact_greater(table: ContingencyTable) -> float:
    """One-sided Fisher test: P(at least ``a`` annotated genes among the selected)."""
    N = table.total
    K = table.annotated
    n = table.selected
    lower, upper = max(0, n + K - N), min(n, K)

    if table.a <= lower:
        return 1.0

    log_terms = [_log_pmf(k, N, K, n) for k in range(table.a, upper + 1)]
    return min(1.0, float(np.exp(logsumexp(log_terms))))


def bh_adjust(p_values: Sequence[float]) -> list[float]:
    """
    Benjamini-Hochberg step-up adjustment, returned in input order.

    Raises:
        DomainError: If any value is outside [0, 1]
    """
    p = np.asarray(p_values, dtype=np.float64)
    if p.size == 0:
        return []
    if np.any(np.isnan(p)) or np.any((p < 0.0) | (p > 1.0)):
        raise DomainError("p-values must lie in [0, 1]")

    m = p.size
    order = np.argsort(p, kind="mergesort")
    ranks = np.arange(1, m + 1, dtype=np.float64)
    scaled = p[order] * m / ranks
    stepped = np.minimum.accumulate(scaled[::-1])[::-1]

    adjusted = np.empty(m, dtype=np.float64)
    # p * m / m can round below p
    adjusted[order] = np.minimum(np.maximum(stepped, p[order]), 1.0)
    return [float(v) for v in adjusted]

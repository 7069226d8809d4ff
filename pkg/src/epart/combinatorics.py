"""Closed formulas and recurrences for E(X,P): counts, ranks, and numbers of
minimal idempotent generating sets.

Everything is exact integer arithmetic.  ``math.comb(a, b)`` is 0 for b > a,
which is the binomial convention used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .core import Partition, profile

comb = math.comb


def rho_n(n: int) -> int:
    """Rank (= idempotent rank) of the singular part plus identity of T_n."""
    return 2 if n == 2 else comb(n, 2)


def F_n(n: int) -> int:
    return 2 ** comb(n, 2)


@lru_cache(maxsize=None)
def w_n(n: int) -> int:
    """Number of strongly connected tournaments on n labelled vertices."""
    if n == 0:
        return 1
    return F_n(n) - sum(comb(n, s) * w_n(s) * F_n(n - s) for s in range(1, n))


def sigma_n(n: int) -> int:
    return 1 if n == 2 else w_n(n)


def F_nk(n: int, k: int) -> int:
    c = comb(n, 2)
    if k < 0 or k > c:
        return 0
    return comb(c, k) * 2 ** (c - k)


@lru_cache(maxsize=None)
def w_nk(n: int, k: int) -> int:
    """Strongly connected digraphs on n labelled vertices where every pair is
    joined by at least one arc and exactly k pairs are joined both ways."""
    if n == 0:
        return 1 if k == 0 else 0
    if k < 0 or k > comb(n, 2):
        return 0
    total = F_nk(n, k)
    for s in range(1, n):
        inner = sum(w_nk(s, l) * F_nk(n - s, k - l) for l in range(k + 1))
        total -= comb(n, s) * inner
    return total


def sigma_uniform(m: int, n: int) -> int:
    """Number of minimal idempotent generating sets of E(X,P) for m blocks of size n."""
    if m == 0:
        return 1
    if m == 1:
        return sigma_n(n)
    if n == 1:
        return sigma_n(m)
    base = 2 ** math.factorial(n) - 2
    return sigma_n(n) ** m * sum(w_nk(m, k) * base**k for k in range(comb(m, 2) + 1))


def rho_uniform(m: int, n: int) -> int:
    if (m, n) == (2, 1):
        return 2
    return m * rho_n(n) + math.factorial(n) * comb(m, 2)


def stirling2(j: int, i: int) -> int:
    """Stirling number of the second kind S(j, i)."""
    if j < 0 or i < 0:
        return 0
    row = [1] + [0] * i
    for _ in range(j):
        row = [0] + [k * row[k] + row[k - 1] for k in range(1, i + 1)]
    return row[i]


def surj_count(j: int, i: int) -> int:
    """|Surj(j, i)|, the number of surjections [j] -> [i]."""
    return stirling2(j, i) * math.factorial(i)


def inj_count(i: int, j: int) -> int:
    """|Inj(i, j)|, the number of injections [i] -> [j]."""
    return math.perm(j, i) if i <= j else 0


# ---------------------------------------------------------------------------
# Idempotent count
# ---------------------------------------------------------------------------


def idempotent_count(p: Partition) -> int:
    return _idempotent_count(p.block_sizes)


@lru_cache(maxsize=None)
def _idempotent_count(sizes: tuple[int, ...]) -> int:
    # sizes is sorted, so sub-multisets stay sorted and memo keys stay canonical.
    if not sizes:
        return 1
    first, rest = sizes[0], sizes[1:]
    total = 0
    for mask in range(1 << len(rest)):
        inside = (first,) + tuple(s for b, s in enumerate(rest) if mask >> b & 1)
        outside = tuple(s for b, s in enumerate(rest) if not mask >> b & 1)
        n_A = sum(inside)
        collapse = sum(
            comb(na, l) * l ** (n_A - l)
            for na in inside
            for l in range(1, na + 1)
        )
        total += _idempotent_count(outside) * collapse
    return total


# ---------------------------------------------------------------------------
# Rank and idempotent rank
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankResult:
    rank: int
    idrank: int
    rho: int
    special_mu1_eq_2: bool


def rank_formula(p: Partition) -> int:
    """The non-uniform rank expression, evaluated for any partition."""
    prof = profile(p)
    n = p.n
    total = 0
    for i in range(1, n + 1):
        mu, nu = prof.mu_of(i), prof.nu_of(i)
        total += mu * rho_n(i) + math.factorial(i) * comb(mu, 2) + mu * nu
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            total += prof.mu_of(i) * prof.mu_of(j) * math.perm(j, i)
    return total


def rank_and_idrank(p: Partition) -> RankResult:
    if p.is_uniform:
        size = p.block_sizes[0] if p.m else 1
        rho = rho_uniform(p.m, size)
        return RankResult(rank=rho, idrank=rho, rho=rho, special_mu1_eq_2=False)
    rho = rank_formula(p)
    special = profile(p).mu_of(1) == 2
    return RankResult(rank=rho, idrank=rho + 1 if special else rho, rho=rho, special_mu1_eq_2=special)


# ---------------------------------------------------------------------------
# Minimal idempotent generating sets
# ---------------------------------------------------------------------------


def migs_count(p: Partition) -> int:
    """Number of minimal idempotent generating sets of E(X,P).

    Every block of size ``j`` independently picks, for each smaller occurring
    size ``i``, one of the ``mu_i`` blocks of that size and a surjection onto
    it, so each ordered size pair ``i < j`` contributes
    ``(mu_i * S(j,i) * i!) ** mu_j``.
    """
    if p.is_uniform:
        return sigma_uniform(p.m, p.block_sizes[0] if p.m else 1)
    prof = profile(p)
    sizes = sorted(set(p.block_sizes))
    total = math.prod(sigma_uniform(prof.mu_of(i), i) for i in sizes)
    for a, i in enumerate(sizes):
        for j in sizes[a + 1:]:
            total *= (prof.mu_of(i) * surj_count(j, i)) ** prof.mu_of(j)
    return total


def migs_count_product_form(p: Partition) -> int:
    """The count with a single factor ``mu_i * mu_j * S(j,i) * i!`` per size pair.

    Equal to ``migs_count`` when each size occurring above another occurs
    only once.  It is not the number of minimal sets in general: blocks
    (2,2,1) have 2 (confirmed by exhaustive search) where this gives 4.
    """
    if p.is_uniform:
        return sigma_uniform(p.m, p.block_sizes[0] if p.m else 1)
    prof = profile(p)
    sizes = sorted(set(p.block_sizes))
    total = math.prod(sigma_uniform(prof.mu_of(i), i) for i in sizes)
    for a, i in enumerate(sizes):
        for j in sizes[a + 1:]:
            total *= prof.mu_of(i) * prof.mu_of(j) * surj_count(j, i)
    return total

"""The Alon-Furedi bound function m(a_1, ..., a_n; N).

m is the minimum of y_1 * ... * y_n over integer vectors with 1 <= y_i <= a_i
and y_1 + ... + y_n = N, and 1 when N < n.  All products are exact Python
integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class MBoundQuery:
    a: tuple[int, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if not self.a:
            raise ValueError("need at least one a_i")
        if min(self.a) < 1:
            raise ValueError("every a_i must be at least 1")
        if not 1 <= self.N <= sum(self.a):
            raise ValueError(f"N={self.N} outside [1, {sum(self.a)}]")

    @property
    def n(self) -> int:
        return len(self.a)


def _query(q, N=None) -> MBoundQuery:
    if isinstance(q, MBoundQuery):
        return q
    return MBoundQuery(tuple(q), N)


def m_bound_bruteforce(q, N=None) -> int:
    """Exhaustive recursion over all admissible vectors (oracle scale)."""
    q = _query(q, N)
    a, n = q.a, q.n
    if q.N < n:
        return 1
    best = None

    def rec(i, remaining, prod):
        nonlocal best
        if i == n:
            if remaining == 0 and (best is None or prod < best):
                best = prod
            return
        for y in range(1, a[i] + 1):
            if y > remaining:
                break
            rec(i + 1, remaining - y, prod * y)

    rec(0, q.N, 1)
    return best


def m_bound_with_witness(q, N=None) -> tuple[int, tuple[int, ...] | None]:
    """DP over (index, remaining sum).  The witness is the lexicographically
    smallest minimizer, or None in the N < n branch."""
    q = _query(q, N)
    a, n, total = q.a, q.n, q.N
    if total < n:
        return 1, None
    # suffix bounds: positions i.. need between (n - i) and sum(a[i:])
    hi = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        hi[i] = hi[i + 1] + a[i]
    inf = None
    best = [[inf] * (total + 1) for _ in range(n + 1)]
    best[n][0] = 1
    for i in range(n - 1, -1, -1):
        lo_rest = n - i - 1
        for s in range(n - i, min(total, hi[i]) + 1):
            cur = inf
            for y in range(1, min(a[i], s - lo_rest) + 1):
                rest = best[i + 1][s - y]
                if rest is not None:
                    val = y * rest
                    if cur is None or val < cur:
                        cur = val
            best[i][s] = cur
    value = best[0][total]
    witness, s = [], total
    for i in range(n):
        for y in range(1, a[i] + 1):
            rest = best[i + 1][s - y] if s - y >= 0 else None
            if rest is not None and y * rest == best[i][s]:
                witness.append(y)
                s -= y
                break
    return value, tuple(witness)


def m_bound(q, N=None) -> int:
    return m_bound_with_witness(q, N)[0]


def m_bound_clamped(a: Sequence[int], N: int) -> tuple[int, bool]:
    """Value of m for bounds whose second argument may drop below 1.

    Returns ``(value, vacuous)``; when ``N < 1`` the bound degenerates to 1.
    """
    if N < 1:
        return 1, True
    return m_bound(a, N), False


def pigeonhole_threshold(q, N=None) -> bool:
    """Whether m >= 2; equivalent to N > n."""
    return m_bound(q, N) >= 2

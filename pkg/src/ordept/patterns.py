"""Likelihood-ordered query lists of (partial) error patterns.

Patterns live on reliability ranks (1-based).  The canonical order is logistic
weight (sum of ranks) ascending; ties resolve by Hamming weight ascending, then
lexicographic rank sequence.  This total order makes shorter lists exact
prefixes of longer ones, which the paired-comparison tests rely on.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import RankOutOfRange


@dataclass(frozen=True)
class Pattern:
    ranks: tuple

    @property
    def weight(self):
        return len(self.ranks)


def logistic_weight(p):
    return sum(p.ranks)


def map_to_positions(p, pi):
    """Map ranks through the reliability permutation to bit positions."""
    if p.ranks and p.ranks[-1] > len(pi):
        raise RankOutOfRange(f"rank {p.ranks[-1]} > universe {len(pi)}")
    return {int(pi[r - 1]) for r in p.ranks}


def _partitions_distinct(total, max_part):
    """All strictly-increasing tuples of parts <= max_part summing to total."""
    out = []

    def rec(remaining, start, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        p = start
        while p <= min(remaining, max_part):
            acc.append(p)
            rec(remaining - p, p + 1, acc)
            acc.pop()
            p += 1

    rec(total, 1, [])
    return out


class QueryList:
    """Immutable ordered pattern list plus padded arrays for the scan kernels."""

    def __init__(self, patterns, n, q_max):
        self.patterns = patterns
        self.n = n
        self.q_max = q_max
        self._splits = {}
        self._arrays = None

    def __len__(self):
        return len(self.patterns)

    def __getitem__(self, i):
        return self.patterns[i]

    @property
    def max_rank(self):
        """How many least-reliable positions the decoder actually touches."""
        return max((p.ranks[-1] for p in self.patterns if p.ranks), default=0)

    @property
    def rank_tuples(self):
        """Plain tuple-of-ranks view, the pure-Python kernel's native format."""
        if not hasattr(self, "_rank_tuples"):
            self._rank_tuples = [p.ranks for p in self.patterns]
        return self._rank_tuples

    @property
    def arrays(self):
        """(ranks int32[Q, wmax] zero-padded, weights int32[Q])."""
        if self._arrays is None:
            wmax = max((p.weight for p in self.patterns), default=0)
            ranks = np.zeros((len(self.patterns), max(wmax, 1)), dtype=np.int32)
            wts = np.zeros(len(self.patterns), dtype=np.int32)
            for i, p in enumerate(self.patterns):
                wts[i] = p.weight
                if p.ranks:
                    ranks[i, : p.weight] = p.ranks
            self._arrays = (np.ascontiguousarray(ranks), wts)
        return self._arrays

    def split_by_parity(self, completed_offset):
        """(even, odd) sublists keyed by (weight + completed_offset) mod 2."""
        if completed_offset not in (0, 1):
            raise ValueError("completed_offset must be 0 or 1")
        if completed_offset not in self._splits:
            even = [p for p in self.patterns if (p.weight + completed_offset) % 2 == 0]
            odd = [p for p in self.patterns if (p.weight + completed_offset) % 2 == 1]
            self._splits[completed_offset] = (
                QueryList(even, self.n, len(even)),
                QueryList(odd, self.n, len(odd)),
            )
        return self._splits[completed_offset]


@lru_cache(maxsize=32)
def _generate_cached(n, q_max):
    patterns = [Pattern(())]
    omega = 1
    max_omega = n * (n + 1) // 2
    while len(patterns) < q_max and omega <= max_omega:
        group = _partitions_distinct(omega, n)
        group.sort(key=lambda t: (len(t), t))
        patterns.extend(Pattern(t) for t in group)
        omega += 1
    return tuple(patterns[:q_max])


def generate_query_list(n, q_max):
    """First q_max patterns over ranks 1..n in canonical order (cached)."""
    if n < 1 or q_max < 1:
        raise ValueError("n and q_max must be >= 1")
    pats = _generate_cached(n, q_max)
    return QueryList(list(pats), n, q_max)


def query_list_for(n, cfg):
    """Build a list sized so the decoder can issue cfg.q_max queries even after
    parity filtering (each sublist then holds >= q_max patterns when possible).
    """
    if not cfg.use_parity_split:
        return generate_query_list(n, cfg.q_max)
    want = 2 * cfg.q_max + 64
    while True:
        ql = generate_query_list(n, want)
        even1, odd1 = ql.split_by_parity(1)
        even0, odd0 = ql.split_by_parity(0)
        shortest = min(len(even1), len(odd1), len(even0), len(odd0))
        if shortest >= cfg.q_max or len(ql) < want:
            return ql
        want *= 2

"""Shared brute-force oracles for the test suite.

These deliberately avoid the package's own enumeration and operator code so
that agreement is evidence, not tautology.
"""

from __future__ import annotations

import itertools

import pytest

from lfdlcq.hamiltonian import ModelParams


def brute_partitions(total: int, max_part: int | None = None):
    """All integer partitions of `total` as non-increasing tuples, by direct
    recursion over the largest part."""
    if total == 0:
        yield ()
        return
    if max_part is None:
        max_part = total
    for first in range(min(total, max_part), 0, -1):
        for rest in brute_partitions(total - first, first):
            yield (first,) + rest


def brute_states_by_scan(K: int):
    """Every (fermions, antifermions, bosons) triple of total momentum K via a
    full occupancy scan over modes 1..K.  Exponential; only use for K <= 5."""
    modes = range(1, K + 1)
    fermion_subsets = [
        tuple(sorted(s))
        for r in range(K + 1)
        for s in itertools.combinations(modes, r)
        if sum(s) <= K
    ]
    out = []
    for fset in fermion_subsets:
        for aset in fermion_subsets:
            rem = K - sum(fset) - sum(aset)
            if rem < 0:
                continue
            for part in brute_partitions(rem):
                occ: dict[int, int] = {}
                for n in part:
                    occ[n] = occ.get(n, 0) + 1
                out.append((fset, aset, tuple(sorted(occ.items()))))
    return out


@pytest.fixture
def generic_params():
    """Fixed generic-coupling parameters used wherever the test only needs a
    structurally typical matrix."""
    def make(K: int, Lambda: int | None = None, Q=None) -> ModelParams:
        return ModelParams(
            m_B=1.3, m_F=0.7, g=0.9, Lambda=Lambda or 4 * K, K=K, Q=Q
        )
    return make

"""Fock-space enumeration at fixed harmonic resolution.

In discretized light-cone quantization the light-front momentum is carried in
integer units n >= 1, so the Fock space splits into finite blocks labeled by
the harmonic resolution K (the total momentum in those units).  A basis state
lists the occupied fermion, antifermion, and boson modes; fermionic occupancies
are 0/1 by Pauli exclusion, and a boson mode of momentum n can hold at most
floor(K/n) quanta inside a K-block.

Purely bosonic states of a block are in bijection with the integer partitions
of K (momenta are the parts, occupancies the multiplicities), which is what
drives the exp(sqrt(K)) growth of the block dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional


@dataclass(frozen=True)
class FockState:
    """One basis vector of a fixed-K block.

    fermions / antifermions are strictly increasing tuples of mode momenta;
    bosons is a tuple of (momentum, occupancy) pairs with strictly increasing
    momenta and occupancies >= 1 (empty modes are not stored).
    """

    fermions: tuple[int, ...] = ()
    antifermions: tuple[int, ...] = ()
    bosons: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for modes in (self.fermions, self.antifermions):
            if any(n < 1 for n in modes):
                raise ValueError("mode momenta must be >= 1")
            if any(a >= b for a, b in zip(modes, modes[1:])):
                raise ValueError("fermionic modes must be strictly increasing")
        ns = [n for n, _ in self.bosons]
        if any(n < 1 for n in ns) or any(a >= b for a, b in zip(ns, ns[1:])):
            raise ValueError("boson modes must be strictly increasing with momenta >= 1")
        if any(w < 1 for _, w in self.bosons):
            raise ValueError("boson occupancies must be >= 1")

    @property
    def key(self) -> tuple:
        return (self.fermions, self.antifermions, self.bosons)

    def boson_occupancy(self, n: int) -> int:
        for m, w in self.bosons:
            if m == n:
                return w
        return 0

    def occupancy(self, n: int) -> int:
        """Total occupancy of momentum mode n summed over all species."""
        return (n in self.fermions) + (n in self.antifermions) + self.boson_occupancy(n)


def charge(state: FockState) -> int:
    return len(state.fermions) - len(state.antifermions)


def momentum(state: FockState) -> int:
    return (
        sum(state.fermions)
        + sum(state.antifermions)
        + sum(n * w for n, w in state.bosons)
    )


def is_angel_state(state: FockState) -> bool:
    """True for the all-bosons-at-momentum-one state, which decouples from the
    rest of its block (verified by tests rather than assumed)."""
    return (
        not state.fermions
        and not state.antifermions
        and len(state.bosons) == 1
        and state.bosons[0][0] == 1
    )


def _sort_key(state: FockState) -> tuple:
    return (charge(state), state.fermions, state.antifermions, state.bosons)


def format_state(state: FockState) -> str:
    """Render a state in the textual exchange form f:[...];a:[...];b:[(n,w),...]."""
    fs = ",".join(str(n) for n in state.fermions)
    as_ = ",".join(str(n) for n in state.antifermions)
    bs = ",".join(f"({n},{w})" for n, w in state.bosons)
    return f"f:[{fs}];a:[{as_}];b:[{bs}]"


def parse_state(text: str) -> FockState:
    """Inverse of :func:`format_state`."""
    try:
        fpart, apart, bpart = text.strip().split(";")
        fs = fpart.removeprefix("f:[").removesuffix("]")
        as_ = apart.removeprefix("a:[").removesuffix("]")
        bs = bpart.removeprefix("b:[").removesuffix("]")
        fermions = tuple(int(x) for x in fs.split(",") if x)
        antifermions = tuple(int(x) for x in as_.split(",") if x)
        bosons = ()
        if bs:
            pairs = bs.replace("(", "").split("),")
            bosons = tuple(
                (int(p.split(",")[0]), int(p.split(",")[1].rstrip(")"))) for p in pairs
            )
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed state text: {text!r}") from exc
    return FockState(fermions, antifermions, bosons)


# ---------------------------------------------------------------------------
# Partition combinatorics
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def partition_count(K: int) -> int:
    """Number of integer partitions p(K), via Euler's pentagonal-number
    recurrence; p(0) = 1."""
    if K < 0:
        raise ValueError("partition_count requires K >= 0")
    if K == 0:
        return 1
    total = 0
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        g2 = j * (3 * j + 1) // 2
        if g1 > K and g2 > K:
            break
        sign = -1 if j % 2 == 0 else 1
        if g1 <= K:
            total += sign * partition_count(K - g1)
        if g2 <= K:
            total += sign * partition_count(K - g2)
        j += 1
    return total


def max_distinct_parts(K: int) -> int:
    """Largest number of distinct part sizes in any partition of K.

    Equals floor(sqrt(2K + 1/4) - 1/2): the cheapest way to use I distinct
    parts is 1 + 2 + ... + I, so I is set by the largest triangular number
    that fits under K.
    """
    if K < 1:
        raise ValueError("max_distinct_parts requires K >= 1")
    # integer-exact: largest I with I(I+1)/2 <= K
    i = (math.isqrt(8 * K + 1) - 1) // 2
    return i


def _distinct_sets(total: int, min_part: int = 1) -> Iterator[tuple[int, ...]]:
    """Strictly increasing tuples of integers >= min_part summing to total."""
    if total == 0:
        yield ()
        return
    for p in range(min_part, total + 1):
        if p == total:
            yield (p,)
        elif total - p > p:  # the next part must exceed p
            for rest in _distinct_sets(total - p, p + 1):
                yield (p,) + rest


def _boson_partitions(total: int, min_part: int = 1) -> Iterator[tuple[tuple[int, int], ...]]:
    """Partitions of total as ((momentum, multiplicity), ...) with increasing momenta."""
    if total == 0:
        yield ()
        return
    for n in range(min_part, total + 1):
        for w in range(1, total // n + 1):
            for rest in _boson_partitions(total - n * w, n + 1):
                yield ((n, w),) + rest


# ---------------------------------------------------------------------------
# Basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Basis:
    """Ordered, indexable block of Fock states at fixed K (optionally fixed Q).

    Immutable after construction; safe to share across threads for read-only
    queries.
    """

    K: int
    Q: Optional[int]
    states: tuple[FockState, ...]
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i: int) -> FockState:
        return self.states[i]

    def __iter__(self) -> Iterator[FockState]:
        return iter(self.states)

    def __contains__(self, state: FockState) -> bool:
        return state.key in self._index

    def index_of(self, state: FockState) -> int:
        return self._index[state.key]

    def index_of_key(self, key: tuple) -> int:
        return self._index[key]


def enumerate_basis(K: int, Q: Optional[int] = None) -> Basis:
    """Enumerate every Fock state of total momentum K (and charge Q if given).

    Recursive descent over species: fermion subsets of distinct momenta, then
    antifermion subsets, then boson partitions of the remainder.  States come
    out canonically sorted by (charge, fermions, antifermions, bosons).
    An unreachable Q simply yields an empty basis.
    """
    if K < 1:
        raise ValueError("enumerate_basis requires K >= 1")
    # group distinct-momentum subsets by their total, reused for both species
    sets_by_sum: dict[int, list[tuple[int, ...]]] = {s: [] for s in range(K + 1)}
    for s in range(K + 1):
        sets_by_sum[s] = list(_distinct_sets(s))

    states = []
    for sf in range(K + 1):
        for fset in sets_by_sum[sf]:
            for sa in range(K - sf + 1):
                for aset in sets_by_sum[sa]:
                    if Q is not None and len(fset) - len(aset) != Q:
                        continue
                    rem = K - sf - sa
                    for bos in _boson_partitions(rem):
                        states.append(FockState(fset, aset, bos))
    states.sort(key=_sort_key)
    index = {s.key: i for i, s in enumerate(states)}
    return Basis(K=K, Q=Q, states=tuple(states), _index=index)

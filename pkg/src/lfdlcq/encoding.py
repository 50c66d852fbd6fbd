"""Compact-mapping bookkeeping done classically.

A compact register stores only occupied modes as (momentum, occupancy) pairs, so
a fixed-K state fits in 4 I ceil(log2 K) qubits with I = max_distinct_parts(K).
The matrix-enumeration oracle is indexed by change descriptors ("deltas"): the
up-to-four mode occupancy changes a single Hamiltonian term family can make.
Applying a delta to a state either yields the connected state or fails (an
unphysical removal/Pauli blocking), mirroring the |0> flag of the reversible
construction.

Species codes: fermion = 0, antifermion = 1, boson = 2.  These leak into file
formats, so they are fixed here once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import DegenerateTruncationError
from .fock import FockState, max_distinct_parts
from .hamiltonian import ModelParams
from .observables import invariant_mass_free

FERMION, ANTIFERMION, BOSON = 0, 1, 2
RAISE, LOWER = +1, -1

# family tags in the written order of the Hamiltonian: vertex, seagull, fork
FAMILIES = (
    "diag",
    "v_fermion_emit", "v_fermion_absorb",
    "v_antifermion_emit", "v_antifermion_absorb",
    "v_pair_create", "v_pair_annihilate",
    "s_fermion_move", "s_antifermion_move",
    "s_pair_create", "s_pair_annihilate",
    "f_fermion_out", "f_fermion_in",
    "f_antifermion_out", "f_antifermion_in",
    "f_pair_out", "f_pair_in",
)
_FAMILY_RANK = {name: i for i, name in enumerate(FAMILIES)}


@dataclass(frozen=True)
class Delta:
    """Four (momentum, direction, species) slots; unused slots are (0, 0, 0).

    Valid shapes: all slots zero (diagonal), first three active with exactly
    one boson (cubic terms), or all four active with exactly two bosons
    (quartic terms).  The signed momenta sum to zero, added modes precede
    removed ones, and within each group slots are ordered fermion <
    antifermion < boson, then by momentum.
    """

    slots: tuple[tuple[int, int, int], ...]
    family: str = "diag"

    def is_diagonal(self) -> bool:
        return all(k == 0 for k, _, _ in self.slots)


def validate_delta(d: Delta) -> bool:
    """Check the slot-shape, ordering, and momentum-conservation rules."""
    if len(d.slots) != 4:
        return False
    ks = [k for k, _, _ in d.slots]
    active = [s for s in d.slots if s[0] != 0]
    if len(active) == 0:
        return d.slots == ((0, 0, 0),) * 4
    if len(active) == 2 or len(active) == 1:
        return False
    if len(active) == 3:
        if ks[3] != 0 or any(k == 0 for k in ks[:3]):
            return False
        if sum(1 for _, _, t in active if t == BOSON) != 1:
            return False
    if len(active) == 4:
        if any(k == 0 for k in ks):
            return False
        if sum(1 for _, _, t in active if t == BOSON) != 2:
            return False
        if d.slots[3][1] != LOWER:
            return False
    if d.slots[0][1] != RAISE:
        return False
    if sum(k * s for k, s, _ in active) != 0:
        return False
    # added before removed; (species, momentum) ascending within each group
    dirs = [s for _, s, _ in active]
    if sorted(dirs, reverse=True) != dirs:
        return False
    for grp_dir in (RAISE, LOWER):
        grp = [(t, k) for k, s, t in active if s == grp_dir]
        if grp != sorted(grp):
            return False
    return True


def _mk(slots: list[tuple[int, int, int]], family: str) -> Delta:
    added = sorted(((t, k) for k, s, t in slots if s == RAISE))
    removed = sorted(((t, k) for k, s, t in slots if s == LOWER))
    ordered = tuple((k, RAISE, t) for t, k in added) + tuple(
        (k, LOWER, t) for t, k in removed
    )
    ordered += ((0, 0, 0),) * (4 - len(ordered))
    return Delta(slots=ordered, family=family)


def enumerate_deltas(K: int) -> Iterator[Delta]:
    """Every candidate change of the K-block, once each, deterministically.

    Families follow the written term order; within a family, descriptors are
    ordered by their free momentum labels.  Changes whose term amplitude
    vanishes identically (pair creation/annihilation at equal fermion and
    antifermion momenta) are omitted, so the descriptor set matches the
    structural off-diagonal pattern of the assembled matrix.  The count stays
    below 324 K^3.
    """
    if K < 1:
        raise ValueError("enumerate_deltas requires K >= 1")
    yield Delta(slots=((0, 0, 0),) * 4, family="diag")

    for species, emit, absorb in (
        (FERMION, "v_fermion_emit", "v_fermion_absorb"),
        (ANTIFERMION, "v_antifermion_emit", "v_antifermion_absorb"),
    ):
        for m in range(2, K + 1):
            for k in range(1, m):
                l = m - k
                yield _mk([(k, RAISE, species), (l, RAISE, BOSON), (m, LOWER, species)], emit)
        for m in range(2, K + 1):
            for k in range(1, m):
                l = m - k
                yield _mk([(m, RAISE, species), (k, LOWER, species), (l, LOWER, BOSON)], absorb)

    for l in range(2, K + 1):
        for k in range(1, l):
            m = l - k
            if m == k:
                continue  # identically zero amplitude
            yield _mk([(k, RAISE, FERMION), (m, RAISE, ANTIFERMION), (l, LOWER, BOSON)], "v_pair_create")
    for l in range(2, K + 1):
        for k in range(1, l):
            m = l - k
            if m == k:
                continue
            yield _mk([(l, RAISE, BOSON), (k, LOWER, FERMION), (m, LOWER, ANTIFERMION)], "v_pair_annihilate")

    for species, fam in ((FERMION, "s_fermion_move"), (ANTIFERMION, "s_antifermion_move")):
        for m in range(1, K + 1):
            for n in range(1, K - m + 1):
                t = m + n
                for k in range(1, t):
                    if k == m:
                        continue  # diagonal
                    l = t - k
                    yield _mk(
                        [(k, RAISE, species), (l, RAISE, BOSON), (m, LOWER, species), (n, LOWER, BOSON)],
                        fam,
                    )

    for t in range(2, K + 1):  # pair momentum = boson-pair momentum
        for k in range(1, t):
            m = t - k
            if m == k:
                continue
            for l in range(1, t // 2 + 1):
                n = t - l
                yield _mk(
                    [(k, RAISE, FERMION), (m, RAISE, ANTIFERMION), (l, LOWER, BOSON), (n, LOWER, BOSON)],
                    "s_pair_create",
                )
                yield _mk(
                    [(l, RAISE, BOSON), (n, RAISE, BOSON), (k, LOWER, FERMION), (m, LOWER, ANTIFERMION)],
                    "s_pair_annihilate",
                )

    for species, out, inn in (
        (FERMION, "f_fermion_out", "f_fermion_in"),
        (ANTIFERMION, "f_antifermion_out", "f_antifermion_in"),
    ):
        for m in range(3, K + 1):
            for k in range(1, m - 1):
                rem = m - k
                for l in range(1, rem // 2 + 1):
                    n = rem - l
                    yield _mk(
                        [(k, RAISE, species), (l, RAISE, BOSON), (n, RAISE, BOSON), (m, LOWER, species)],
                        out,
                    )
                    yield _mk(
                        [(m, RAISE, species), (k, LOWER, species), (l, LOWER, BOSON), (n, LOWER, BOSON)],
                        inn,
                    )

    for n in range(3, K + 1):
        for k in range(1, n - 1):
            for m in range(1, n - k):
                if m == k:
                    continue
                l = n - k - m
                yield _mk(
                    [(k, RAISE, FERMION), (m, RAISE, ANTIFERMION), (l, RAISE, BOSON), (n, LOWER, BOSON)],
                    "f_pair_out",
                )
                yield _mk(
                    [(n, RAISE, BOSON), (k, LOWER, FERMION), (m, LOWER, ANTIFERMION), (l, LOWER, BOSON)],
                    "f_pair_in",
                )


def apply_delta(state: FockState, d: Delta) -> Optional[FockState]:
    """The state changed according to d, or None when the change is unphysical
    (removal from an empty mode, or a Pauli-blocked fermionic addition)."""
    fs = set(state.fermions)
    as_ = set(state.antifermions)
    bs = dict(state.bosons)
    for k, s, t in d.slots:
        if k == 0:
            continue
        if t == FERMION or t == ANTIFERMION:
            target = fs if t == FERMION else as_
            if s == RAISE:
                if k in target:
                    return None
                target.add(k)
            else:
                if k not in target:
                    return None
                target.remove(k)
        else:
            w = bs.get(k, 0) + (1 if s == RAISE else -1)
            if w < 0:
                return None
            if w == 0:
                bs.pop(k, None)
            else:
                bs[k] = w
    return FockState(
        tuple(sorted(fs)), tuple(sorted(as_)), tuple(sorted(bs.items()))
    )


# ---------------------------------------------------------------------------
# Oracle tuple indexing
# ---------------------------------------------------------------------------

def tuple_from_index(n: int) -> tuple[int, int]:
    """The n-th pair (k, l) with k > l >= 1 in the enumeration
    (2,1), (3,1), (3,2), (4,1), ...; n starts at 1."""
    if n < 1:
        raise ValueError("tuple index starts at 1")
    k = (3 + math.isqrt(8 * n - 7)) // 2
    # isqrt truncation can land one k too low at block boundaries
    while k * (k - 1) // 2 - (k - 2) > n:
        k -= 1
    while (k + 1) * k // 2 - (k - 1) <= n:
        k += 1
    l = n - k * (k - 1) // 2 + k - 1
    return k, l


def index_from_tuple(k: int, l: int) -> int:
    """Inverse of :func:`tuple_from_index`."""
    if not k > l >= 1:
        raise ValueError("need k > l >= 1")
    return l + k * (k - 1) // 2 - k + 1


# ---------------------------------------------------------------------------
# Qubit budgets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QubitBudget:
    scheme: str
    K: int
    total_qubits: int
    breakdown: dict[str, int]


def _clog2(x: int) -> int:
    return 0 if x <= 1 else (x - 1).bit_length()


def qubit_count(scheme: str, K: int) -> QubitBudget:
    """Qubits needed to hold one fixed-K Fock state under the given mapping.

    compact: 4 I ceil(log2 K) (one (n, w) register pair per potentially
    distinct mode, I of them for each fermionic species and 2I for bosons).
    direct-compact: binary boson occupancies, sum_n ceil(log2 floor(K/n)),
    plus one qubit per fermionic mode.  direct-direct: unary boson
    occupancies, sum_n floor(K/n), plus the same 2K fermionic qubits.
    """
    if K < 1:
        raise ValueError("qubit_count requires K >= 1")
    logk = _clog2(K)
    if scheme == "compact":
        i = max_distinct_parts(K)
        breakdown = {
            "fermion_registers": i * logk,
            "antifermion_registers": i * logk,
            "boson_registers": 2 * i * logk,
        }
    elif scheme == "direct-compact":
        boson = sum(_clog2(K // n) for n in range(1, K + 1))
        breakdown = {
            "boson_modes": boson,
            "fermion_modes": K,
            "antifermion_modes": K,
        }
    elif scheme == "direct-direct":
        boson = sum(K // n for n in range(1, K + 1))
        breakdown = {
            "boson_modes": boson,
            "fermion_modes": K,
            "antifermion_modes": K,
        }
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return QubitBudget(scheme=scheme, K=K, total_qubits=sum(breakdown.values()), breakdown=breakdown)


def qubit_count_qcd(K: int, lambda_perp: int, n_f: int, n_c: int) -> QubitBudget:
    """Upper bound on qubits for a 3+1D QCD light-front wavefunction at
    harmonic resolution K and transverse cutoff lambda_perp: a pure formula
    evaluation, no 3+1D states are constructed.

    Per occupied fermionic mode: momentum (ceil(log2 K) + 2 ceil(log2 L_perp)),
    helicity (1), flavor, color; 2K such modes.  Per occupied boson mode:
    momentum, occupancy (ceil(log2 K)), helicity (1), adjoint color
    (ceil(log2(n_c^2 - 1)), taken as 0 for the degenerate n_c = 1); K modes.
    """
    if min(K, lambda_perp, n_f, n_c) < 1:
        raise ValueError("all arguments must be >= 1")
    logk = _clog2(K)
    logp = _clog2(lambda_perp)
    fermion_bits = logk + 2 * logp + 1 + _clog2(n_f) + _clog2(n_c)
    adj = n_c * n_c - 1
    boson_bits = logk + 2 * logp + logk + 1 + (_clog2(adj) if adj >= 1 else 0)
    breakdown = {
        "fermion_modes": 2 * K * fermion_bits,
        "boson_modes": K * boson_bits,
    }
    return QubitBudget(
        scheme="qcd-compact", K=K, total_qubits=sum(breakdown.values()), breakdown=breakdown
    )


# ---------------------------------------------------------------------------
# Occupation measurement emulation
# ---------------------------------------------------------------------------

def measure_occupation(
    distribution: list[tuple[FockState, float]],
    n: int,
    params: ModelParams,
    qsq: Optional[float] = None,
) -> tuple[float, float]:
    """Expected total occupancy of mode n over a classical state distribution.

    Emulates the sampling procedure: each state contributes its summed
    fermion + antifermion + boson occupancy of mode n.  With a probing scale
    set, states above the free-mass cutoff are discarded (their flag qubit
    would read 0) and the estimate conditions on the kept ones.  Returns
    (expectation, kept_fraction).
    """
    total_p = sum(p for _, p in distribution)
    if abs(total_p - 1.0) > 1e-10:
        raise ValueError("probabilities must sum to 1")
    kept = 0.0
    acc = 0.0
    for state, p in distribution:
        if qsq is not None and invariant_mass_free(state, params) > qsq:
            continue
        kept += p
        acc += p * state.occupancy(n)
    if kept <= 0.0:
        raise DegenerateTruncationError("cutoff discarded every state in the distribution")
    return acc / kept, kept

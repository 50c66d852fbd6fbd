"""Mass-squared matrix of the 1+1D light-front Yukawa model in second quantization.

The dimensionless Hamiltonian splits into a diagonal mass part plus vertex,
seagull, and fork interactions (cubic and quartic strings of ladder operators
with 1/momentum couplings).  Within a block of harmonic resolution K the
invariant mass operator is M^2 = K * H, so diagonalizing the assembled sparse
matrix gives squared bound-state masses directly.

Normal ordering against the momentum cutoff Lambda leaves cutoff-dependent
diagonal corrections (the self-induced inertias alpha_n, beta_n, gamma_n),
which carry the only Lambda dependence of a fixed-K block: interaction sums
are cut off by momentum conservation at K, not by Lambda.

Conventions fixed here (any consistent choice gives the same spectrum):

* Fermionic operators act with the sign (-1)**(number of occupied same-species
  modes preceding the target), on modes kept in ascending order.
* Operators of one term apply right-to-left as written, which pins the
  normal-ordering of diagonal seagull pieces.
* Entries with |value| <= 1e-14 are treated as structurally absent; the only
  exact interaction zeros are pair creation/annihilation at equal fermion and
  antifermion momenta, where the two bracket contributions cancel.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np
import scipy.sparse as sp

from .errors import ResourceLimitError
from .fock import Basis, FockState, charge, momentum

STRUCTURAL_ZERO = 1e-14

# coupling channels of the term kernel; a matrix entry is
#   K * (mB^2*C_MB2 + mF^2*C_MF2 + g^2*C_INERTIA + g*mF*C_VERTEX + g^2*C_QUARTIC)
CH_MB2, CH_MF2, CH_INERTIA, CH_VERTEX, CH_QUARTIC = range(5)
N_CHANNELS = 5


@dataclass(frozen=True)
class ModelParams:
    """Bare parameters of a fixed-K block.

    g is the coupling exactly as it multiplies the vertex/seagull/fork terms;
    mapping from the Lagrangian coupling lambda happens at the CLI layer.
    """

    m_B: float
    m_F: float
    g: float
    Lambda: int
    K: int
    Q: Optional[int] = None

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.Lambda < self.K:
            raise ValueError("cutoff Lambda must be >= K")
        for name in ("m_B", "m_F", "g"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.m_B < 0 or self.m_F < 0:
            raise ValueError("masses must be >= 0")


@dataclass(frozen=True)
class InertiaTriple:
    """Self-induced inertias (alpha_n, beta_n, gamma_n) at mode n, cutoff Lambda."""

    alpha: float
    beta: float
    gamma: float


def bracket(n: int, m: int) -> float:
    """The two-argument momentum bracket: 0 if either argument is 0, else
    delta(m, -n)/n."""
    if n == 0 or m == 0:
        return 0.0
    return 1.0 / n if m == -n else 0.0


@lru_cache(maxsize=32)
def _harmonic_table(nmax: int) -> np.ndarray:
    """H_0..H_nmax with H_0 = 0."""
    h = np.zeros(nmax + 1)
    h[1:] = np.cumsum(1.0 / np.arange(1, nmax + 1))
    return h


def self_induced_inertias(n: int, Lambda: int) -> InertiaTriple:
    """Closed harmonic-number forms of the self-induced inertias.

    alpha_n = -1/n - H_{Lambda-n} - H_{2n} + 2 H_n
    beta_n  = -2/n + H_n + H_Lambda - H_{Lambda-n}
    gamma_n = -1/(2n) + H_n + H_Lambda - H_{Lambda+n}
    """
    if n < 1 or n > Lambda:
        raise ValueError("self_induced_inertias requires 1 <= n <= Lambda")
    h = _harmonic_table(Lambda + n)
    alpha = -1.0 / n - h[Lambda - n] - h[2 * n] + 2.0 * h[n]
    beta = -2.0 / n + h[n] + h[Lambda] - h[Lambda - n]
    gamma = -0.5 / n + h[n] + h[Lambda] - h[Lambda + n]
    return InertiaTriple(alpha, beta, gamma)


def inertia_bounds(n: int, Lambda: int) -> dict[str, tuple[float, float]]:
    """Analytic (lower, upper) envelopes of the inertias; requires n < Lambda."""
    if not 1 <= n < Lambda:
        raise ValueError("inertia_bounds requires 1 <= n < Lambda")
    la = math.log(n / (2.0 * (Lambda - n)))
    lb = math.log(Lambda * n / (Lambda - n))
    lg = math.log(n * Lambda / (Lambda + n))
    return {
        "alpha": (la - 2.0 + 1.0 / n, la + 2.0 - 1.5 / n - 1.0 / (Lambda - n)),
        "beta": (lb - 1.0 - 1.0 / n + 1.0 / Lambda, lb + 2.0 - 2.0 / n - 1.0 / (Lambda - n)),
        "gamma": (lg - 1.0 + 0.5 / n + 1.0 / (Lambda + n), lg + 2.0 - 0.5 / n - 1.0 / (Lambda + n)),
    }


# ---------------------------------------------------------------------------
# Ladder-operator primitives on raw (fermions, antifermions, bosons) triples
# ---------------------------------------------------------------------------

def _remove(modes: tuple[int, ...], n: int) -> tuple[tuple[int, ...], float]:
    i = modes.index(n)
    return modes[:i] + modes[i + 1:], -1.0 if i & 1 else 1.0

def _insert(modes: tuple[int, ...], n: int):
    """Returns (new_modes, sign) or (None, 0.0) on Pauli blocking."""
    i = bisect_left(modes, n)
    if i < len(modes) and modes[i] == n:
        return None, 0.0
    return modes[:i] + (n,) + modes[i:], -1.0 if i & 1 else 1.0

def _b_set(bosons: tuple[tuple[int, int], ...], n: int, w: int) -> tuple[tuple[int, int], ...]:
    i = bisect_left(bosons, (n,))
    present = i < len(bosons) and bosons[i][0] == n
    if w == 0:
        return bosons[:i] + bosons[i + 1:] if present else bosons
    if present:
        return bosons[:i] + ((n, w),) + bosons[i + 1:]
    return bosons[:i] + ((n, w),) + bosons[i:]


def _term_images(f, a, b, K, inert_a, inert_b, inert_g) -> Iterator[tuple[tuple, int, float]]:
    """Yield (image_key, channel, raw_value) for every Hamiltonian term acting
    on the state (f, a, b).  Raw values exclude the couplings, which the
    caller folds in per channel.  Boson normalization 1/sqrt(n) per ladder
    operator is included here.
    """
    key = (f, a, b)
    bocc = dict(b)

    # mass part: number operators, diagonal
    if b:
        yield key, CH_MB2, sum(w / n for n, w in b)
        yield key, CH_INERTIA, sum(w * inert_a[n] / n for n, w in b)
    if f or a:
        yield key, CH_MF2, sum(1.0 / n for n in f) + sum(1.0 / n for n in a)
        yield key, CH_INERTIA, (
            sum(inert_b[n] / n for n in f) + sum(inert_g[n] / n for n in a)
        )

    # vertex: fermion (or antifermion) emits/absorbs one boson
    for species, modes in ((0, f), (1, a)):
        for m in modes:
            # emission m -> k + boson l
            base, s1 = _remove(modes, m)
            for k in range(1, m):
                new, s2 = _insert(base, k)
                if new is None:
                    continue
                l = m - k
                wl = bocc.get(l, 0)
                val = s1 * s2 * math.sqrt(wl + 1.0) / math.sqrt(l) * (1.0 / k + 1.0 / m)
                nb = _b_set(b, l, wl + 1)
                img = (new, a, nb) if species == 0 else (f, new, nb)
                yield img, CH_VERTEX, val
        for k in modes:
            # absorption k + boson l -> m
            base, s1 = _remove(modes, k)
            for l, wl in b:
                m = k + l
                new, s2 = _insert(base, m)
                if new is None:
                    continue
                val = s1 * s2 * math.sqrt(wl) / math.sqrt(l) * (1.0 / k + 1.0 / m)
                nb = _b_set(b, l, wl - 1)
                img = (new, a, nb) if species == 0 else (f, new, nb)
                yield img, CH_VERTEX, val

    # vertex: pair annihilation / creation against one boson
    for k in f:
        nf, s1 = _remove(f, k)
        for m in a:
            if m == k:
                continue  # the two bracket pieces cancel exactly
            na, s2 = _remove(a, m)
            l = k + m
            wl = bocc.get(l, 0)
            val = s1 * s2 * math.sqrt(wl + 1.0) / math.sqrt(l) * (1.0 / k - 1.0 / m)
            yield (nf, na, _b_set(b, l, wl + 1)), CH_VERTEX, val
    for l, wl in b:
        for k in range(1, l):
            m = l - k
            if m == k:
                continue
            nf, s1 = _insert(f, k)
            if nf is None:
                continue
            na, s2 = _insert(a, m)
            if na is None:
                continue
            val = s1 * s2 * math.sqrt(wl) / math.sqrt(l) * (1.0 / k - 1.0 / m)
            yield (nf, na, _b_set(b, l, wl - 1)), CH_VERTEX, val

    # seagull: fermion m + boson n -> fermion k + boson l (and antifermions);
    # k == m reproduces the diagonal seagull pieces
    for species, modes in ((0, f), (1, a)):
        for m in modes:
            base, s1 = _remove(modes, m)
            for n, wn in b:
                t = m + n
                bmid = _b_set(b, n, wn - 1)
                fac0 = math.sqrt(wn) / math.sqrt(n)
                for k in range(1, t):
                    new, s2 = _insert(base, k)
                    if new is None:
                        continue
                    l = t - k
                    wl = bocc.get(l, 0) - (1 if l == n else 0)
                    coeff = (0.0 if k == n else 1.0 / (k - n)) + 1.0 / t
                    val = s1 * s2 * fac0 * math.sqrt(wl + 1.0) / math.sqrt(l) * coeff
                    nb = _b_set(bmid, l, wl + 1)
                    img = (new, a, nb) if species == 0 else (f, new, nb)
                    yield img, CH_QUARTIC, val

    # seagull: pair <-> two bosons
    for m in f:
        nf, s1 = _remove(f, m)
        for k in a:
            if k == m:
                continue  # exact cancellation between the two boson orderings
            na, s2 = _remove(a, k)
            t = m + k
            for n in range(1, t):  # ordered (l, n); bracket needs l != k
                l = t - n
                if l == k:
                    continue
                wn = bocc.get(n, 0)
                bmid = _b_set(b, n, wn + 1)
                wl = wn + 1 if l == n else bocc.get(l, 0)
                val = (
                    s1 * s2
                    * math.sqrt(wn + 1.0) / math.sqrt(n)
                    * math.sqrt(wl + 1.0) / math.sqrt(l)
                    / (l - k)
                )
                yield (nf, na, _b_set(bmid, l, wl + 1)), CH_QUARTIC, val
    for l, wl in b:
        bmid = _b_set(b, l, wl - 1)
        for n, _wn in b:
            wn = wl - 1 if n == l else _wn
            if wn < 1:
                continue
            t = l + n
            fac0 = math.sqrt(wl) / math.sqrt(l) * math.sqrt(wn) / math.sqrt(n)
            nb = _b_set(bmid, n, wn - 1)
            for k in range(1, t):  # k: antifermion momentum; bracket needs l != k
                m = t - k
                if k == l or k == m:
                    continue
                nf, s1 = _insert(f, m)
                if nf is None:
                    continue
                na, s2 = _insert(a, k)
                if na is None:
                    continue
                val = s1 * s2 * fac0 / (l - k)
                yield (nf, na, nb), CH_QUARTIC, val

    # fork: fermion m -> fermion k + two bosons (and the reverse; antifermions too)
    for species, modes in ((0, f), (1, a)):
        for m in modes:
            base, s1 = _remove(modes, m)
            for k in range(1, m - 1):
                new, s2 = _insert(base, k)
                if new is None:
                    continue
                rem = m - k
                for n in range(1, rem):  # ordered (l, n), coefficient 1/(k+l)
                    l = rem - n
                    wn = bocc.get(n, 0)
                    bmid = _b_set(b, n, wn + 1)
                    wl = wn + 1 if l == n else bocc.get(l, 0)
                    val = (
                        s1 * s2
                        * math.sqrt(wn + 1.0) / math.sqrt(n)
                        * math.sqrt(wl + 1.0) / math.sqrt(l)
                        / (k + l)
                    )
                    nb = _b_set(bmid, l, wl + 1)
                    img = (new, a, nb) if species == 0 else (f, new, nb)
                    yield img, CH_QUARTIC, val
        for k in modes:
            base, s1 = _remove(modes, k)
            for l, wl in b:
                bmid = _b_set(b, l, wl - 1)
                fac0 = math.sqrt(wl) / math.sqrt(l)
                for n, _wn in b:
                    wn = wl - 1 if n == l else _wn
                    if wn < 1:
                        continue
                    m = k + l + n
                    if m > K:
                        continue
                    new, s2 = _insert(base, m)
                    if new is None:
                        continue
                    val = s1 * s2 * fac0 * math.sqrt(wn) / math.sqrt(n) / (k + l)
                    nb = _b_set(bmid, n, wn - 1)
                    img = (new, a, nb) if species == 0 else (f, new, nb)
                    yield img, CH_QUARTIC, val

    # fork: boson -> pair + boson, and pair + boson -> boson
    for n, wn in b:
        bmid = _b_set(b, n, wn - 1)
        fac0 = math.sqrt(wn) / math.sqrt(n)
        for k in range(1, n - 1):
            nf, s1 = _insert(f, k)
            if nf is None:
                continue
            for m in range(1, n - k):
                if m == k:
                    continue  # 1/(k+l) - 1/(m+l) cancels
                na, s2 = _insert(a, m)
                if na is None:
                    continue
                l = n - k - m
                wl = bocc.get(l, 0) - (1 if l == n else 0)
                val = (
                    s1 * s2 * fac0
                    * math.sqrt(wl + 1.0) / math.sqrt(l)
                    * (1.0 / (k + l) - 1.0 / (m + l))
                )
                yield (nf, na, _b_set(bmid, l, wl + 1)), CH_QUARTIC, val
    for k in f:
        nf, s1 = _remove(f, k)
        for m in a:
            if m == k:
                continue
            na, s2 = _remove(a, m)
            for l, wl in b:
                n = k + m + l
                if n > K:
                    continue
                bmid = _b_set(b, l, wl - 1)
                wn = wl - 1 if n == l else bocc.get(n, 0)
                val = (
                    s1 * s2
                    * math.sqrt(wl) / math.sqrt(l)
                    * math.sqrt(wn + 1.0) / math.sqrt(n)
                    * (1.0 / (k + l) - 1.0 / (m + l))
                )
                yield (nf, na, _b_set(bmid, n, wn + 1)), CH_QUARTIC, val


def _inertia_arrays(K: int, Lambda: int):
    h = _harmonic_table(Lambda + K)
    alpha = np.empty(K + 1)
    beta = np.empty(K + 1)
    gamma = np.empty(K + 1)
    for i in range(1, K + 1):
        alpha[i] = -1.0 / i - h[Lambda - i] - h[2 * i] + 2.0 * h[i]
        beta[i] = -2.0 / i + h[i] + h[Lambda] - h[Lambda - i]
        gamma[i] = -0.5 / i + h[i] + h[Lambda] - h[Lambda + i]
    return alpha, beta, gamma


def apply_hamiltonian(state: FockState, params: ModelParams) -> list[tuple[FockState, float]]:
    """All distinct images of H|state> with their summed amplitudes.

    Every image conserves momentum and charge; amplitudes below the structural
    threshold are dropped (this removes the exact equal-momentum pair
    cancellations along with genuine round-off zeros).
    """
    if momentum(state) != params.K:
        raise ValueError("state momentum does not match params.K")
    ia, ib, ig = _inertia_arrays(params.K, params.Lambda)
    coupling = {
        CH_MB2: params.m_B ** 2,
        CH_MF2: params.m_F ** 2,
        CH_INERTIA: params.g ** 2,
        CH_VERTEX: params.g * params.m_F,
        CH_QUARTIC: params.g ** 2,
    }
    acc: dict[tuple, float] = {}
    for key, ch, val in _term_images(
        state.fermions, state.antifermions, state.bosons, params.K, ia, ib, ig
    ):
        c = coupling[ch]
        if c == 0.0:
            continue
        acc[key] = acc.get(key, 0.0) + c * val
    out = []
    for key, amp in acc.items():
        if abs(amp) > STRUCTURAL_ZERO:
            out.append((FockState(*key), amp))
    return out


# ---------------------------------------------------------------------------
# Sparse matrix assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseMatrix:
    """Row-compressed real symmetric matrix holding M^2 = K * H for one block."""

    dim: int
    K: int
    csr: sp.csr_matrix

    def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        sl = slice(self.csr.indptr[i], self.csr.indptr[i + 1])
        return self.csr.indices[sl], self.csr.data[sl]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.csr @ v

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()


@dataclass(frozen=True)
class MatrixComponents:
    """Coupling-independent pieces of a block's mass matrix.

    M^2(m_B, m_F, g) = K * (m_B^2 C0 + m_F^2 C1 + g^2 C2 + g m_F C3 + g^2 C4),
    indexed by the channel constants.  Built once per (basis, Lambda) so the
    renormalization search can re-assemble cheaply.
    """

    basis: Basis
    Lambda: int
    channels: tuple[sp.csr_matrix, ...]

    def assemble_raw(self, mB2: float, m_F: float, g: float) -> sp.csr_matrix:
        c = self.channels
        mat = (
            mB2 * c[CH_MB2]
            + m_F ** 2 * c[CH_MF2]
            + g ** 2 * (c[CH_INERTIA] + c[CH_QUARTIC])
            + g * m_F * c[CH_VERTEX]
        ) * float(self.basis.K)
        mat = sp.csr_matrix(mat)
        mat.data[np.abs(mat.data) <= STRUCTURAL_ZERO] = 0.0
        mat.eliminate_zeros()
        return mat

    def assemble(self, params: ModelParams) -> SparseMatrix:
        mat = self.assemble_raw(params.m_B ** 2, params.m_F, params.g)
        return SparseMatrix(dim=len(self.basis), K=self.basis.K, csr=mat)


def mass_matrix_components(
    basis: Basis, Lambda: int, max_dim: int = 5_000_000
) -> MatrixComponents:
    if len(basis) > max_dim:
        raise ResourceLimitError(
            f"basis dimension {len(basis)} exceeds cap {max_dim}"
        )
    K = basis.K
    ia, ib, ig = _inertia_arrays(K, Lambda)
    rows = [[] for _ in range(N_CHANNELS)]
    cols = [[] for _ in range(N_CHANNELS)]
    vals = [[] for _ in range(N_CHANNELS)]
    lookup = basis.index_of_key
    n = len(basis)
    for i, s in enumerate(basis):
        for key, ch, val in _term_images(s.fermions, s.antifermions, s.bosons, K, ia, ib, ig):
            rows[ch].append(lookup(key))
            cols[ch].append(i)
            vals[ch].append(val)
    channels = tuple(
        sp.coo_matrix(
            (np.asarray(vals[ch]), (np.asarray(rows[ch], dtype=np.int64), np.asarray(cols[ch], dtype=np.int64))),
            shape=(n, n),
        ).tocsr()
        for ch in range(N_CHANNELS)
    )
    return MatrixComponents(basis=basis, Lambda=Lambda, channels=channels)


def build_mass_matrix(
    basis: Basis, params: ModelParams, max_dim: int = 5_000_000
) -> SparseMatrix:
    """Assemble M^2 = K*H over the given block; symmetric, charge-block diagonal."""
    if basis.K != params.K:
        raise ValueError("basis.K and params.K disagree")
    comps = mass_matrix_components(basis, params.Lambda, max_dim=max_dim)
    return comps.assemble(params)


def sparsity(matrix: SparseMatrix) -> int:
    """Max over rows of the number of structurally nonzero entries."""
    if matrix.dim == 0:
        return 0
    csr = matrix.csr.copy()
    csr.data[np.abs(csr.data) <= STRUCTURAL_ZERO] = 0.0
    csr.eliminate_zeros()
    return int(np.diff(csr.indptr).max())


def sparsity_bounds(K: int) -> tuple[int, int]:
    """(lower, upper) envelope of the block sparsity: K^2/2 -/+ 3K/2 +/- 1."""
    lower = (K * K - 3 * K + 2) // 2 + 0  # (1/2)K^2 - (3/2)K + 1
    upper = (K * K + 3 * K - 2) // 2
    return lower, upper


def max_abs_element(matrix: SparseMatrix) -> float:
    """Largest |entry| of H itself, i.e. of matrix / K."""
    if matrix.csr.nnz == 0:
        return 0.0
    return float(np.abs(matrix.csr.data).max()) / matrix.K


# ---------------------------------------------------------------------------
# Analytic seagull matrix element (fermion-moving family)
# ---------------------------------------------------------------------------

def _fermion_move_sign(before: tuple[int, ...], removed: int, added: int) -> float:
    reduced, s1 = _remove(before, removed)
    _, s2 = _insert(reduced, added)
    return s1 * s2


def matrix_element_HS1(state: FockState, other: FockState, params: ModelParams) -> float:
    """<other| H_{S,1} |state> for the fermion-boson seagull family (b+ b a+ a),
    via the closed connection conditions rather than ladder application.

    Nonzero only when: fermion sets differ by exactly one mode each way,
    antifermion sets are identical, and the boson maps differ by moving one
    quantum from mode n (occupancy w in `state`) to mode l (occupancy w' in
    `other`).  Value: g^2 * sqrt(w w'/(l n)) * ((1-d_kn)/(k-n+d_kn) + 1/(k+l)),
    times the fermionic reordering sign.
    """
    if state.antifermions != other.antifermions:
        return 0.0
    fs, fo = set(state.fermions), set(other.fermions)
    gone, new = fs - fo, fo - fs
    if len(gone) != 1 or len(new) != 1:
        return 0.0
    m, k = gone.pop(), new.pop()

    src = dict(state.bosons)
    dst = dict(other.bosons)
    down = [q for q in src if src[q] > dst.get(q, 0)]
    up = [q for q in dst if dst[q] > src.get(q, 0)]
    if len(down) != 1 or len(up) != 1:
        return 0.0
    n, l = down[0], up[0]
    if src[n] - dst.get(n, 0) != 1 or dst[l] - src.get(l, 0) != 1:
        return 0.0
    if any(src.get(q, 0) != dst.get(q, 0) for q in set(src) | set(dst) if q not in (n, l)):
        return 0.0
    if k + l != m + n:
        return 0.0

    w, wp = src[n], dst[l]
    coeff = (0.0 if k == n else 1.0 / (k - n)) + 1.0 / (k + l)
    sign = _fermion_move_sign(state.fermions, m, k)
    return params.g ** 2 * sign * math.sqrt(w * wp / (l * n)) * coeff

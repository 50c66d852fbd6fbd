"""Eigen-solving fixed-(K, Q) mass matrices and bare-mass renormalization.

The renormalization conditions tie the physical (observable) boson and fermion
masses to eigenvalues of the Q=0 and Q=1 blocks: given physical targets and a
bare coupling, the bare Lagrangian masses are found by nested 1D secant
searches.  The analytic seed for the bare boson mass,

    m_B^2 = mtilde_B^2 - (alpha_2 / 4 pi) lambda^2,

is exact in the K=2 sector, where the single-boson state is decoupled and its
M^2 eigenvalue is m_B^2 + g^2 alpha_2 with g = lambda / sqrt(4 pi).  That
exactness fixes the sqrt(4 pi) coupling convention used by the figure
pipeline; the plain g = lambda identification stays available.

When the physical boson mass exceeds the two-fermion threshold (2 mtilde_F),
the lowest Q=0 eigenvalue is a fermion-pair level that no choice of bare boson
mass can raise to the boson target, so the literal lowest-eigenvalue condition
has no solution.  For that regime the search can instead track the eigenvalue
whose eigenvector has maximal overlap with the free single-boson state
(``track="boson"``), which reduces to the literal condition whenever the boson
is the ground state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, InfeasibleSeedError
from .fock import Basis, FockState, enumerate_basis
from .hamiltonian import (
    MatrixComponents,
    ModelParams,
    SparseMatrix,
    mass_matrix_components,
    self_induced_inertias,
)

DENSE_CUTOFF = 512


def lambda_to_g(lam: float, mode: str = "identity") -> float:
    """Map the Lagrangian coupling to the Hamiltonian coupling g.

    identity: g = lambda.  sqrt4pi: g = lambda / sqrt(4 pi), the convention
    under which the K=2 renormalization seed is exact.
    """
    if mode == "identity":
        return lam
    if mode == "sqrt4pi":
        return lam / math.sqrt(4.0 * math.pi)
    raise ValueError(f"unknown coupling mode {mode!r}")


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues of M^2 with unit-norm eigenvectors (columns) and
    explicit residuals ||M^2 v - lambda v||_2."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray


def _residuals(csr, evals, evecs) -> np.ndarray:
    r = csr @ evecs - evecs * evals[np.newaxis, :]
    return np.linalg.norm(r, axis=0)


def lowest_eigenpairs(
    matrix: SparseMatrix,
    count: int,
    tol: float = 1e-10,
    dense_cutoff: int = DENSE_CUTOFF,
    seed: int = 0,
) -> EigenResult:
    """`count` smallest eigenpairs of a symmetric block matrix.

    Dense LAPACK path for dim <= dense_cutoff, Lanczos with full
    reorthogonalization otherwise.  Every returned pair satisfies
    ||M^2 v - lambda v|| <= tol * max(1, |lambda|).
    """
    if count < 1 or count > matrix.dim:
        raise ValueError("count must satisfy 1 <= count <= dim")
    if matrix.dim <= dense_cutoff:
        dense = matrix.toarray()
        evals, evecs = np.linalg.eigh(dense)
        evals, evecs = evals[:count], evecs[:, :count]
        res = _residuals(matrix.csr, evals, evecs)
        return EigenResult(evals, evecs, res)
    return _lanczos_lowest(matrix, count, tol, seed)


def _lanczos_lowest(matrix: SparseMatrix, count: int, tol: float, seed: int) -> EigenResult:
    """Lanczos with full reorthogonalization and a fixed-seed start vector."""
    from scipy.linalg import eigh_tridiagonal

    csr = matrix.csr
    n = matrix.dim
    max_iter = min(n, 10 * count + 200)
    rng = np.random.default_rng(seed)

    V = np.zeros((max_iter, n))
    alphas = np.zeros(max_iter)
    betas = np.zeros(max_iter)

    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    V[0] = v
    best = None
    j = 0
    while True:
        w = csr @ V[j]
        alphas[j] = V[j] @ w
        w -= alphas[j] * V[j]
        if j > 0:
            w -= betas[j - 1] * V[j - 1]
        # full reorthogonalization, twice for good measure
        w -= V[: j + 1].T @ (V[: j + 1] @ w)
        w -= V[: j + 1].T @ (V[: j + 1] @ w)
        beta = np.linalg.norm(w)
        j += 1
        m = j
        check_now = j >= count and (j % max(8, count) == 0 or j == max_iter or beta < 1e-13)
        if check_now:
            theta, S = eigh_tridiagonal(alphas[:m], betas[: m - 1])
            kth = min(count, m)
            vecs = V[:m].T @ S[:, :kth]
            nrm = np.linalg.norm(vecs, axis=0)
            vecs /= nrm
            evals = theta[:kth]
            res = _residuals(csr, evals, vecs)
            ok = kth == count and np.all(res <= tol * np.maximum(1.0, np.abs(evals)))
            if best is None or res.max() < best[2].max():
                best = (evals, vecs, res)
            if ok:
                return EigenResult(evals, vecs, res)
        if j == max_iter:
            break
        if beta < 1e-13:
            # Krylov space exhausted; restart direction orthogonal to span
            w = rng.standard_normal(n)
            w -= V[:j].T @ (V[:j] @ w)
            beta = np.linalg.norm(w)
            if beta < 1e-13:
                break
            betas[j - 1] = 0.0
            V[j] = w / beta
        else:
            betas[j - 1] = beta
            V[j] = w / beta
    if best is not None and best[0].size == count:
        evals, vecs, res = best
        if np.all(res <= tol * np.maximum(1.0, np.abs(evals))):
            return EigenResult(evals, vecs, res)
    raise ConvergenceError(
        "Lanczos failed to converge the requested eigenpairs",
        best_residual=None if best is None else float(best[2].max()),
    )


# ---------------------------------------------------------------------------
# Renormalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RenormTarget:
    """Physical masses, bare coupling, cutoff and resolution for the search."""

    mB_phys: float
    mF_phys: float
    lam: float
    Lambda: int
    K: int

    def __post_init__(self):
        if self.mB_phys <= 0 or self.mF_phys <= 0:
            raise ValueError("physical masses must be positive")
        if self.Lambda < self.K:
            raise ValueError("Lambda must be >= K")
        if self.K < 1:
            raise ValueError("K must be >= 1")


@dataclass
class RenormResult:
    m_B: float
    m_F: float
    g: float
    coupling_mode: str
    track: str
    converged: bool
    sweeps: int
    eig_q0: float
    eig_q1: float
    trace: list = field(default_factory=list)


def _free_boson_index(basis: Basis) -> int:
    return basis.index_of(FockState((), (), ((basis.K, 1),)))


class _BlockSolver:
    """Caches a block's matrix components; returns the tracked M^2 level."""

    def __init__(self, K: int, Q: int, Lambda: int, dense_cutoff: int):
        self.basis = enumerate_basis(K, Q)
        self.comps = mass_matrix_components(self.basis, Lambda)
        self.dense_cutoff = dense_cutoff
        self.Q = Q

    def level(self, mB2: float, m_F: float, g: float, track: str) -> float:
        csr = self.comps.assemble_raw(mB2, m_F, g)
        dim = len(self.basis)
        mat = SparseMatrix(dim=dim, K=self.basis.K, csr=csr)
        if track == "boson" and self.Q == 0:
            if dim <= self.dense_cutoff:
                evals, evecs = np.linalg.eigh(mat.toarray())
            else:
                res = lowest_eigenpairs(mat, count=dim, dense_cutoff=dim)
                evals, evecs = res.eigenvalues, res.eigenvectors
            j = _free_boson_index(self.basis)
            pick = int(np.argmax(evecs[j, :] ** 2))
            return float(evals[pick])
        res = lowest_eigenpairs(mat, count=1, dense_cutoff=self.dense_cutoff)
        return float(res.eigenvalues[0])


def _secant(fun, x0: float, x1: float, tol_f: float, max_iter: int, trace, label: str):
    f0 = fun(x0)
    trace.append({"var": label, "x": x0, "f": f0})
    if abs(f0) <= tol_f:
        return x0, f0
    f1 = fun(x1)
    trace.append({"var": label, "x": x1, "f": f1})
    for _ in range(max_iter):
        if abs(f1) <= tol_f:
            return x1, f1
        if f1 == f0:
            x1 += 0.1 * (abs(x1) + 1.0)  # flat step, nudge
            f1 = fun(x1)
            trace.append({"var": label, "x": x1, "f": f1})
            continue
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        x0, f0, x1 = x1, f1, x2
        f1 = fun(x1)
        trace.append({"var": label, "x": x1, "f": f1})
    return x1, f1


def renormalize(
    target: RenormTarget,
    coupling_mode: str = "identity",
    track: str = "lowest",
    tol: float = 1e-6,
    max_sweeps: int = 50,
    initial: Optional[tuple[float, float]] = None,
    dense_cutoff_tracking: int = 4096,
) -> tuple[float, float, RenormResult]:
    """Find bare (m_B, m_F) so the tracked Q=0 level matches mtilde_B^2 and the
    lowest Q=1 level matches mtilde_F^2, each to relative tolerance `tol`.

    Outer secant runs on m_B^2 against the Q=0 condition; every outer
    evaluation re-solves m_F against the Q=1 condition (nested search).  The
    seed for m_B^2 is the analytic K=2 formula; `initial` overrides both seeds.
    """
    if track not in ("lowest", "boson"):
        raise ValueError("track must be 'lowest' or 'boson'")
    g = lambda_to_g(target.lam, coupling_mode)
    tB = target.mB_phys ** 2
    tF = target.mF_phys ** 2
    tol_B = tol * max(1.0, abs(tB))
    tol_F = tol * max(1.0, abs(tF))

    if initial is None:
        alpha2 = self_induced_inertias(2, target.Lambda).alpha
        mB2_seed = tB - alpha2 / (4.0 * math.pi) * target.lam ** 2
        if mB2_seed <= 0:
            raise InfeasibleSeedError(
                f"seed bare boson mass squared {mB2_seed:.6g} <= 0; "
                "increase Lambda or reduce the coupling"
            )
        mF_seed = target.mF_phys
    else:
        mB2_seed, mF_seed = initial[0] ** 2, initial[1]

    trace: list = []
    q0 = _BlockSolver(target.K, 0, target.Lambda, dense_cutoff_tracking)
    q1 = _BlockSolver(target.K, 1, target.Lambda, dense_cutoff_tracking)

    state = {"m_F": mF_seed}

    def solve_mF(mB2: float) -> float:
        def fF(mF):
            return q1.level(mB2, mF, g, "lowest") - tF

        x0 = state["m_F"]
        x1 = x0 * 1.05 + 1e-3
        mF, fval = _secant(fF, x0, x1, tol_F, max_sweeps, trace, "m_F")
        state["m_F"] = mF
        return mF

    def fB(mB2: float) -> float:
        mF = solve_mF(mB2)
        return q0.level(mB2, mF, g, track) - tB

    x0 = mB2_seed
    x1 = mB2_seed * 1.02 + 1e-3
    mB2, fval = _secant(fB, x0, x1, tol_B, max_sweeps, trace, "m_B^2")
    m_F = state["m_F"]

    eig_q0 = fval + tB
    eig_q1 = q1.level(mB2, m_F, g, "lowest")
    converged = abs(eig_q0 - tB) <= tol_B and abs(eig_q1 - tF) <= tol_F
    sweeps = sum(1 for t in trace if t["var"] == "m_B^2")
    if not converged:
        raise ConvergenceError(
            "renormalization search did not converge", trace=trace
        )
    if mB2 < 0:
        raise ConvergenceError(
            "converged bare boson mass squared is negative", trace=trace
        )
    m_B = math.sqrt(mB2)
    result = RenormResult(
        m_B=m_B, m_F=m_F, g=g, coupling_mode=coupling_mode, track=track,
        converged=converged, sweeps=sweeps, eig_q0=eig_q0, eig_q1=eig_q1,
        trace=trace,
    )
    return m_B, m_F, result


def spectrum_scan(
    targets: list[RenormTarget],
    nev: int = 4,
    coupling_mode: str = "identity",
    track: str = "lowest",
    tol: float = 1e-6,
) -> list[dict]:
    """Renormalize and diagonalize per K; per-K failures are reported in the
    row rather than aborting the scan."""
    ks = [t.K for t in targets]
    if ks != sorted(ks):
        raise ValueError("targets must be in ascending K order")
    rows = []
    for t in targets:
        row: dict = {"K": t.K}
        try:
            m_B, m_F, diag = renormalize(
                t, coupling_mode=coupling_mode, track=track, tol=tol
            )
            row.update(m_B=m_B, m_F=m_F, converged=diag.converged, sweeps=diag.sweeps)
            g = diag.g
            for q in (0, 1):
                basis = enumerate_basis(t.K, q)
                comps = mass_matrix_components(basis, t.Lambda)
                params = ModelParams(m_B=m_B, m_F=m_F, g=g, Lambda=t.Lambda, K=t.K, Q=q)
                mat = comps.assemble(params)
                count = min(nev, len(basis))
                res = lowest_eigenpairs(mat, count=count)
                row[f"eigenvalues_q{q}"] = [float(x) for x in res.eigenvalues]
        except Exception as exc:  # noqa: BLE001 - scan rows carry failures
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows

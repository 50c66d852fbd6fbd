"""Parton distribution functions and the probing-scale cutoff.

The PDF of species ell at momentum fraction x = n/K is the expectation of the
mode-n number operator in a unit-norm bound state, so it is evaluated on the
grid x = 1/K, ..., 1 with no interpolation.  Sum rules: the momenta of the
partons add up to K, and fermion minus antifermion numbers add up to the
charge Q.

A probing scale Q^2 truncates the bound-state expansion to Fock states whose
free invariant mass K * sum_j w_j m_j^2 / n_j stays below Q^2; the truncated
state is re-normalized before measuring, which keeps the sum rules exact on
the kept component.  Masses entering the free invariant mass are taken from
the supplied ModelParams, so callers choose between bare and physical
conventions by what they pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateTruncationError
from .fock import Basis, FockState, momentum
from .hamiltonian import ModelParams

NORM_TOL = 1e-10


@dataclass(frozen=True)
class PdfTable:
    """Per-species occupation expectations on the x = n/K grid, n = 1..K."""

    K: int
    f_f: np.ndarray
    f_a: np.ndarray
    f_b: np.ndarray
    qsq: Optional[float] = None

    @property
    def x(self) -> np.ndarray:
        return np.arange(1, self.K + 1) / self.K

    def momentum_sum(self) -> float:
        n = np.arange(1, self.K + 1)
        return float(np.sum(n * (self.f_f + self.f_a + self.f_b)))

    def charge_sum(self) -> float:
        return float(np.sum(self.f_f - self.f_a))


def pdf(vector: np.ndarray, basis: Basis, qsq: Optional[float] = None) -> PdfTable:
    """Mode-occupation expectations of a unit-norm coefficient vector."""
    vector = np.asarray(vector, dtype=float)
    if vector.shape != (len(basis),):
        raise ValueError("vector length does not match basis dimension")
    nrm = float(np.linalg.norm(vector))
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"vector norm {nrm} is not 1 within {NORM_TOL}")
    K = basis.K
    f_f = np.zeros(K)
    f_a = np.zeros(K)
    f_b = np.zeros(K)
    for c, state in zip(vector, basis):
        if c == 0.0:
            continue
        p = c * c
        for n in state.fermions:
            f_f[n - 1] += p
        for n in state.antifermions:
            f_a[n - 1] += p
        for n, w in state.bosons:
            f_b[n - 1] += p * w
    return PdfTable(K=K, f_f=f_f, f_a=f_a, f_b=f_b, qsq=qsq)


def invariant_mass_free(state: FockState, params: ModelParams) -> float:
    """Free invariant mass squared K * sum_j w_j m_j^2 / n_j of one Fock state."""
    mB2 = params.m_B ** 2
    mF2 = params.m_F ** 2
    s = sum(mF2 / n for n in state.fermions)
    s += sum(mF2 / n for n in state.antifermions)
    s += sum(w * mB2 / n for n, w in state.bosons)
    return params.K * s


def qmax2(basis: Basis, params: ModelParams) -> float:
    """Largest free invariant mass squared over the block: the maximal probing
    scale at this resolution (any larger cutoff keeps every state)."""
    if len(basis) == 0:
        raise ValueError("qmax2 requires a nonempty basis")
    return max(invariant_mass_free(s, params) for s in basis)


def truncate_state(
    vector: np.ndarray, basis: Basis, params: ModelParams, qsq: float
) -> tuple[np.ndarray, float]:
    """Zero out coefficients of states above the probing scale and re-normalize.

    Returns (vector', kept probability mass).  Raises if the cutoff removes
    essentially everything.
    """
    vector = np.asarray(vector, dtype=float)
    nrm = float(np.linalg.norm(vector))
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"vector norm {nrm} is not 1 within {NORM_TOL}")
    mask = np.array(
        [invariant_mass_free(s, params) <= qsq for s in basis], dtype=bool
    )
    if mask.all():
        return vector.copy(), 1.0
    kept = float(np.sum(vector[mask] ** 2))
    if kept < 1e-6:
        raise DegenerateTruncationError(
            f"cutoff Q^2 = {qsq} keeps probability mass {kept:.3g}"
        )
    out = np.where(mask, vector, 0.0) / np.sqrt(kept)
    return out, kept

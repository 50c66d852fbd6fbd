"""Parton distributions, free invariant masses, and the probing-scale cutoff."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfdlcq.errors import DegenerateTruncationError
from lfdlcq.fock import FockState, charge, enumerate_basis
from lfdlcq.hamiltonian import ModelParams, build_mass_matrix
from lfdlcq.observables import invariant_mass_free, pdf, qmax2, truncate_state
from lfdlcq.spectrum import lowest_eigenpairs


def unit_vector(dim, i):
    v = np.zeros(dim)
    v[i] = 1.0
    return v


class TestPdf:
    def test_single_free_boson(self):
        basis = enumerate_basis(2, 0)
        v = unit_vector(len(basis), basis.index_of(FockState((), (), ((2, 1),))))
        tab = pdf(v, basis)
        assert tab.f_b[1] == 1.0
        assert tab.f_b[0] == tab.f_f[0] == tab.f_a[0] == 0.0
        assert tab.momentum_sum() == pytest.approx(2.0)

    def test_equal_superposition(self):
        basis = enumerate_basis(2, 0)
        v = np.zeros(len(basis))
        v[basis.index_of(FockState((), (), ((1, 2),)))] = 1 / math.sqrt(2)
        v[basis.index_of(FockState((1,), (1,), ()))] = 1 / math.sqrt(2)
        tab = pdf(v, basis)
        assert tab.f_b[0] == pytest.approx(1.0)
        assert tab.f_f[0] == pytest.approx(0.5)
        assert tab.f_a[0] == pytest.approx(0.5)

    def test_norm_violation_rejected(self):
        basis = enumerate_basis(3, 0)
        with pytest.raises(ValueError):
            pdf(np.ones(len(basis)), basis)
        with pytest.raises(ValueError):
            pdf(np.zeros(len(basis) + 1), basis)

    @pytest.mark.parametrize("K,Q", [(4, 0), (5, 1), (6, 0), (6, 2)])
    def test_sum_rules_for_eigenvectors(self, K, Q, generic_params):
        basis = enumerate_basis(K, Q)
        mat = build_mass_matrix(basis, generic_params(K, Q=Q))
        res = lowest_eigenpairs(mat, count=min(4, mat.dim))
        for j in range(res.eigenvectors.shape[1]):
            tab = pdf(res.eigenvectors[:, j], basis)
            assert tab.momentum_sum() == pytest.approx(K, abs=1e-8)
            assert tab.charge_sum() == pytest.approx(Q, abs=1e-8)
            assert np.all(tab.f_f >= 0) and np.all(tab.f_a >= 0) and np.all(tab.f_b >= 0)

    def test_grid_is_n_over_k(self):
        basis = enumerate_basis(4, 0)
        v = unit_vector(len(basis), 0)
        tab = pdf(v, basis)
        assert np.allclose(tab.x, np.arange(1, 5) / 4)


class TestInvariantMassFree:
    def test_single_boson_at_top_mode(self):
        p = ModelParams(m_B=2.0, m_F=1.0, g=0.5, Lambda=16, K=4)
        assert invariant_mass_free(FockState((), (), ((4, 1),)), p) == pytest.approx(4.0)

    def test_pair_at_k2(self):
        p = ModelParams(m_B=2.0, m_F=1.5, g=0.5, Lambda=8, K=2)
        got = invariant_mass_free(FockState((1,), (1,), ()), p)
        assert got == pytest.approx(4 * 1.5**2)

    def test_symbolic_oracle_k6(self):
        from fractions import Fraction

        p = ModelParams(m_B=2.0, m_F=1.0, g=0.5, Lambda=24, K=6)
        for s in enumerate_basis(6):
            exact = Fraction(0)
            for n in s.fermions:
                exact += Fraction(1, n)  # m_F^2 = 1
            for n in s.antifermions:
                exact += Fraction(1, n)
            for n, w in s.bosons:
                exact += Fraction(4 * w, n)  # m_B^2 = 4
            assert invariant_mass_free(s, p) == pytest.approx(float(6 * exact), rel=1e-14)


class TestQmax2:
    def test_k1(self):
        p = ModelParams(m_B=2.0, m_F=1.0, g=0.0, Lambda=4, K=1, Q=0)
        assert qmax2(enumerate_basis(1, 0), p) == pytest.approx(4.0)

    def test_exhaustive_scan_k4(self):
        p = ModelParams(m_B=2.0, m_F=1.0, g=0.0, Lambda=16, K=4)
        basis = enumerate_basis(4)
        assert qmax2(basis, p) == max(invariant_mass_free(s, p) for s in basis)

    def test_maximum_is_the_all_ones_boson_state(self):
        # K quanta at momentum one maximize sum(w m^2/n) whenever m_B >= m_F
        p = ModelParams(m_B=2.0, m_F=1.0, g=0.0, Lambda=16, K=4)
        angel = FockState((), (), ((1, 4),))
        assert qmax2(enumerate_basis(4), p) == pytest.approx(invariant_mass_free(angel, p))

    def test_empty_basis_rejected(self):
        p = ModelParams(m_B=1.0, m_F=1.0, g=0.0, Lambda=8, K=2)
        with pytest.raises(ValueError):
            qmax2(enumerate_basis(2, 5), p)


class TestTruncateState:
    def test_cutoff_at_qmax_keeps_everything(self, generic_params):
        K = 5
        basis = enumerate_basis(K, 0)
        p = generic_params(K)
        mat = build_mass_matrix(basis, p)
        vec = lowest_eigenpairs(mat, count=1).eigenvectors[:, 0]
        out, kept = truncate_state(vec, basis, p, qmax2(basis, p))
        assert kept == 1.0
        assert np.array_equal(out, vec)

    def test_cutoff_below_minimum_raises(self, generic_params):
        K = 5
        basis = enumerate_basis(K, 0)
        p = generic_params(K)
        v = np.zeros(len(basis))
        v[0] = 1.0
        with pytest.raises(DegenerateTruncationError):
            truncate_state(v, basis, p, 1e-12)

    def test_monotone_in_cutoff_and_sum_rules_preserved(self, generic_params):
        K = 6
        basis = enumerate_basis(K, 0)
        p = generic_params(K)
        vec = np.ones(len(basis)) / math.sqrt(len(basis))
        masses = sorted(invariant_mass_free(s, p) for s in basis)
        cuts = [masses[len(masses) // 4], masses[len(masses) // 2], masses[-1]]
        kepts = []
        for qsq in cuts:
            out, kept = truncate_state(vec, basis, p, qsq)
            kepts.append(kept)
            tab = pdf(out, basis, qsq=qsq)
            assert tab.momentum_sum() == pytest.approx(K, abs=1e-8)
            assert tab.charge_sum() == pytest.approx(0.0, abs=1e-8)
        assert kepts == sorted(kepts)
        assert kepts[-1] == 1.0


@given(theta=st.floats(0.0, 2 * math.pi), seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_pdf_is_linear_in_probability(theta, seed):
    basis = enumerate_basis(4, 0)
    rng = np.random.default_rng(seed)
    i, j = rng.choice(len(basis), size=2, replace=False)
    v = np.zeros(len(basis))
    v[i], v[j] = math.cos(theta), math.sin(theta)
    mixed = pdf(v, basis)
    a = pdf(unit_vector(len(basis), i), basis)
    b = pdf(unit_vector(len(basis), j), basis)
    for species in ("f_f", "f_a", "f_b"):
        want = math.cos(theta) ** 2 * getattr(a, species) + math.sin(theta) ** 2 * getattr(b, species)
        assert np.allclose(getattr(mixed, species), want, atol=1e-12)

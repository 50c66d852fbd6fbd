"""Matrix assembly: inertias, term amplitudes, structure, and bounds."""

import math

import numpy as np
import pytest

from lfdlcq.fock import FockState, charge, enumerate_basis, is_angel_state
from lfdlcq.hamiltonian import (
    ModelParams,
    apply_hamiltonian,
    bracket,
    build_mass_matrix,
    inertia_bounds,
    mass_matrix_components,
    matrix_element_HS1,
    max_abs_element,
    self_induced_inertias,
    sparsity,
    sparsity_bounds,
)


def literal_inertia_sums(n: int, Lambda: int):
    """Term-by-term summation twins of the harmonic-number closed forms."""
    alpha = sum(1.0 / (n - m) for m in range(1, Lambda + 1) if m != n)
    alpha -= sum(1.0 / (n + m) for m in range(1, n + 1))
    beta = sum((n / m) / (n - m) for m in range(1, Lambda + 1) if m != n)
    gamma = sum((n / m) / (n + m) for m in range(1, Lambda + 1) if m != n)
    return alpha, beta, gamma


class TestBracket:
    def test_values(self):
        assert bracket(2, -2) == 0.5
        assert bracket(0, 5) == 0.0
        assert bracket(5, 0) == 0.0
        assert bracket(3, 2) == 0.0
        assert bracket(-1, 1) == -1.0


class TestInertias:
    @pytest.mark.parametrize("Lambda", [128, 512, 2048])
    def test_closed_forms_match_literal_sums(self, Lambda):
        for n in range(1, 65):
            t = self_induced_inertias(n, Lambda)
            a, b, g = literal_inertia_sums(n, Lambda)
            assert abs(t.alpha - a) < 1e-10
            assert abs(t.beta - b) < 1e-10
            assert abs(t.gamma - g) < 1e-10

    @pytest.mark.parametrize("Lambda", [128, 512, 2048])
    def test_within_analytic_bounds(self, Lambda):
        for n in range(1, 65):
            t = self_induced_inertias(n, Lambda)
            bd = inertia_bounds(n, Lambda)
            assert bd["alpha"][0] <= t.alpha <= bd["alpha"][1]
            assert bd["beta"][0] <= t.beta <= bd["beta"][1]
            assert bd["gamma"][0] <= t.gamma <= bd["gamma"][1]

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            self_induced_inertias(0, 8)
        with pytest.raises(ValueError):
            self_induced_inertias(9, 8)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(m_B=1, m_F=1, g=0, Lambda=3, K=4)
        with pytest.raises(ValueError):
            ModelParams(m_B=-1, m_F=1, g=0, Lambda=8, K=4)
        with pytest.raises(ValueError):
            ModelParams(m_B=math.inf, m_F=1, g=0, Lambda=8, K=4)


class TestApplyHamiltonian:
    def test_free_limit_is_pure_mass_diagonal(self, generic_params):
        for K in (2, 4, 6):
            p = ModelParams(m_B=1.3, m_F=0.7, g=0.0, Lambda=4 * K, K=K)
            for s in enumerate_basis(K):
                images = apply_hamiltonian(s, p)
                assert len(images) == 1
                img, amp = images[0]
                assert img == s
                expected = (
                    sum(w * 1.3**2 / n for n, w in s.bosons)
                    + sum(0.7**2 / n for n in s.fermions)
                    + sum(0.7**2 / n for n in s.antifermions)
                )
                assert amp == pytest.approx(expected, rel=1e-14)

    def test_images_conserve_momentum_and_charge(self, generic_params):
        from lfdlcq.fock import momentum

        for K in (3, 5, 7):
            p = generic_params(K)
            for s in enumerate_basis(K):
                for img, _ in apply_hamiltonian(s, p):
                    assert momentum(img) == K
                    assert charge(img) == charge(s)

    def test_image_change_patterns(self, generic_params):
        # off-diagonal images differ by exactly two (anti)fermions and one or
        # two bosons, counted as total occupancy changes per species
        for K in (4, 6, 8, 10):
            p = generic_params(K)
            for s in enumerate_basis(K):
                for img, _ in apply_hamiltonian(s, p):
                    if img == s:
                        continue
                    fdiff = len(set(s.fermions) ^ set(img.fermions))
                    adiff = len(set(s.antifermions) ^ set(img.antifermions))
                    sb, ib = dict(s.bosons), dict(img.bosons)
                    bdiff = sum(
                        abs(sb.get(n, 0) - ib.get(n, 0))
                        for n in set(sb) | set(ib)
                    )
                    assert fdiff + adiff == 2
                    assert bdiff in (1, 2)

    def test_wrong_momentum_rejected(self, generic_params):
        p = generic_params(5)
        with pytest.raises(ValueError):
            apply_hamiltonian(FockState((), (), ((1, 1),)), p)


class TestBuildMassMatrix:
    def test_k1_free(self):
        p = ModelParams(m_B=2.5, m_F=1.0, g=0.0, Lambda=4, K=1, Q=0)
        mat = build_mass_matrix(enumerate_basis(1, 0), p)
        assert mat.dim == 1
        assert mat.toarray()[0, 0] == pytest.approx(2.5**2, rel=1e-15)

    def test_k2_free_eigenvalues(self):
        p = ModelParams(m_B=1.3, m_F=0.7, g=0.0, Lambda=8, K=2, Q=0)
        mat = build_mass_matrix(enumerate_basis(2, 0), p)
        evals = sorted(np.linalg.eigvalsh(mat.toarray()))
        expected = sorted([1.3**2, 4 * 1.3**2, 4 * 0.7**2])
        assert np.allclose(evals, expected, rtol=1e-14)

    def test_k2_interacting_block_is_diagonal_with_hand_values(self):
        # the K=2, Q=0 block decouples exactly: pair creation at equal momenta
        # and the two-boson-to-pair transition both carry vanishing brackets
        p = ModelParams(m_B=1.3, m_F=0.7, g=0.9, Lambda=16, K=2, Q=0)
        basis = enumerate_basis(2, 0)
        A = build_mass_matrix(basis, p).toarray()
        assert np.all(A == np.diag(np.diag(A)))
        i1 = self_induced_inertias(1, 16)
        i2 = self_induced_inertias(2, 16)
        expected = {
            ((), (), ((1, 2),)): 4 * (1.3**2 + 0.81 * i1.alpha),
            ((), (), ((2, 1),)): 1.3**2 + 0.81 * i2.alpha,
            ((1,), (1,), ()): 4 * 0.7**2 + 2 * 0.81 * (i1.beta + i1.gamma),
        }
        for s, want in expected.items():
            i = basis.index_of_key(s)
            assert A[i, i] == pytest.approx(want, rel=1e-13)

    @pytest.mark.parametrize("seed", range(4))
    def test_hermiticity_random_params(self, seed):
        rng = np.random.default_rng(seed)
        K = int(rng.integers(3, 13))
        p = ModelParams(
            m_B=float(rng.uniform(0.2, 3.0)),
            m_F=float(rng.uniform(0.2, 3.0)),
            g=float(rng.uniform(-2.0, 2.0)),
            Lambda=K + int(rng.integers(0, 64)),
            K=K,
        )
        A = build_mass_matrix(enumerate_basis(K), p).toarray()
        scale = np.abs(A).max()
        assert np.abs(A - A.T).max() <= 1e-12 * scale

    def test_charge_block_structure(self, generic_params):
        for K in (4, 8, 12):
            p = generic_params(K)
            basis = enumerate_basis(K)
            A = build_mass_matrix(basis, p).toarray()
            qs = np.array([charge(s) for s in basis])
            assert np.all(A[np.not_equal.outer(qs, qs)] == 0.0)

    def test_angel_state_row_decouples(self, generic_params):
        for K in range(2, 11):
            p = generic_params(K)
            basis = enumerate_basis(K, 0)
            mat = build_mass_matrix(basis, p)
            i = next(j for j, s in enumerate(basis) if is_angel_state(s))
            cols, vals = mat.row(i)
            off = sum(abs(v) for c, v in zip(cols, vals) if c != i)
            assert off <= 1e-12

    def test_free_spectrum_equals_diagonal_multiset(self):
        for K in range(1, 9):
            p = ModelParams(m_B=1.3, m_F=0.7, g=0.0, Lambda=2 * K, K=K)
            basis = enumerate_basis(K)
            A = build_mass_matrix(basis, p).toarray()
            expected = sorted(
                K * (
                    sum(w * 1.3**2 / n for n, w in s.bosons)
                    + sum(0.7**2 / n for n in s.fermions)
                    + sum(0.7**2 / n for n in s.antifermions)
                )
                for s in basis
            )
            assert np.allclose(sorted(np.linalg.eigvalsh(A)), expected, rtol=1e-10)

    def test_matches_apply_hamiltonian_columns(self, generic_params):
        K = 5
        p = generic_params(K)
        basis = enumerate_basis(K)
        A = build_mass_matrix(basis, p).toarray()
        for j, s in enumerate(basis):
            col = np.zeros(len(basis))
            for img, amp in apply_hamiltonian(s, p):
                col[basis.index_of(img)] = K * amp
            assert np.allclose(A[:, j], col, rtol=0, atol=1e-13 * max(1, np.abs(col).max()))

    def test_component_assembly_matches_direct_build(self, generic_params):
        K = 6
        p = generic_params(K)
        basis = enumerate_basis(K, 0)
        direct = build_mass_matrix(basis, p).toarray()
        comps = mass_matrix_components(basis, p.Lambda)
        assembled = comps.assemble(p).toarray()
        assert np.array_equal(direct, assembled)

    def test_dimension_cap(self, generic_params):
        from lfdlcq.errors import ResourceLimitError

        with pytest.raises(ResourceLimitError):
            build_mass_matrix(enumerate_basis(8), generic_params(8), max_dim=10)


class TestSparsity:
    def test_k1_single_state(self):
        p = ModelParams(m_B=1.0, m_F=1.0, g=0.3, Lambda=4, K=1, Q=0)
        mat = build_mass_matrix(enumerate_basis(1, 0), p)
        assert sparsity(mat) == 1

    @pytest.mark.parametrize("K", range(3, 13))
    def test_within_bounds_small_k(self, K, generic_params):
        mat = build_mass_matrix(enumerate_basis(K, 0), generic_params(K))
        lo, hi = sparsity_bounds(K)
        assert lo <= sparsity(mat) <= hi

    def test_k5_regression(self, generic_params):
        # structure is parameter-independent at generic couplings; value pinned
        # from the first computation
        mat = build_mass_matrix(enumerate_basis(5, 0), generic_params(5, Lambda=20))
        assert sparsity(mat) == 12

    def test_bounds_formula(self):
        assert sparsity_bounds(3) == (1, 8)
        assert sparsity_bounds(19) == (153, 208)


class TestMaxAbsElement:
    def test_k1_free(self):
        p = ModelParams(m_B=2.0, m_F=1.0, g=0.0, Lambda=4, K=1, Q=0)
        mat = build_mass_matrix(enumerate_basis(1, 0), p)
        assert max_abs_element(mat) == pytest.approx(4.0)

    def test_free_limit_matches_diagonal_oracle(self):
        K = 6
        p = ModelParams(m_B=1.3, m_F=0.7, g=0.0, Lambda=24, K=K)
        basis = enumerate_basis(K)
        mat = build_mass_matrix(basis, p)
        oracle = max(
            sum(w * 1.3**2 / n for n, w in s.bosons)
            + sum(0.7**2 / n for n in s.fermions)
            + sum(0.7**2 / n for n in s.antifermions)
            for s in basis
        )
        assert max_abs_element(mat) == pytest.approx(oracle, rel=1e-14)

    def test_near_linear_growth_trend(self):
        # empirical pin: max|H| / (K (1 + |log(K/Lambda)|)) stays below 1
        # for the fixed generic parameter set
        for K in (8, 10, 12, 14):
            p = ModelParams(m_B=1.3, m_F=0.7, g=0.9, Lambda=2048, K=K)
            mat = build_mass_matrix(enumerate_basis(K, 0), p)
            ratio = max_abs_element(mat) / (K * (1 + abs(math.log(K / 2048))))
            assert ratio < 1.0


def ladder_hs1_images(state, params):
    """Brute-force fermion-boson seagull family, applied as a ladder string."""
    K = params.K
    out = {}
    f, a, b = state.fermions, state.antifermions, state.bosons
    bocc = dict(b)
    for m in f:
        fs1 = list(f)
        i = fs1.index(m)
        s1 = (-1) ** i
        fs1.pop(i)
        for n, wn in b:
            f0 = math.sqrt(wn)
            for k in range(1, K + 1):
                if k in fs1:
                    continue
                l = m + n - k
                if not 1 <= l <= K:
                    continue
                s2 = (-1) ** sum(1 for x in fs1 if x < k)
                wl = bocc.get(l, 0) - (1 if l == n else 0)
                coeff = (0.0 if k == n else 1.0 / (k - n)) + 1.0 / (k + l)
                amp = (
                    params.g**2 * s1 * s2 * f0
                    * math.sqrt(wl + 1.0) / math.sqrt(l * n) * coeff
                )
                bd = dict(b)
                bd[n] -= 1
                if bd[n] == 0:
                    del bd[n]
                bd[l] = bd.get(l, 0) + 1
                key = (tuple(sorted(fs1 + [k])), a, tuple(sorted(bd.items())))
                out[key] = out.get(key, 0.0) + amp
    return out


class TestMatrixElementHS1:
    def test_disconnected_pairs_are_zero(self, generic_params):
        p = generic_params(6)
        s = FockState((1, 2), (), ((3, 1),))
        t = FockState((3,), (), ((1, 1), (2, 1)))  # fermion sets differ by one, bosons by two moves
        assert matrix_element_HS1(s, t, p) == 0.0
        t2 = FockState((1, 2), (), ((1, 1), (2, 1)))  # fermions identical
        assert matrix_element_HS1(s, t2, p) == 0.0

    def test_k_equals_n_branch(self, generic_params):
        # moved fermion lands on the annihilated boson momentum: only the
        # 1/(k+l) piece survives
        p = generic_params(6)
        s = FockState((1,), (1,), ((2, 2),))  # K = 6
        t = FockState((2,), (1,), ((1, 1), (2, 1)))
        got = matrix_element_HS1(s, t, p)
        k, l, n, w, wp = 2, 1, 2, 2, 1
        expected = p.g**2 * math.sqrt(w * wp / (l * n)) * (1.0 / (k + l))
        assert got == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("K", [4, 6, 8])
    def test_agrees_with_ladder_oracle(self, K, generic_params):
        p = generic_params(K, Lambda=32)
        basis = enumerate_basis(K)
        checked = 0
        for s in basis:
            images = ladder_hs1_images(s, p)
            for t in basis:
                if t.key == s.key:
                    continue
                brute = images.get(t.key, 0.0)
                analytic = matrix_element_HS1(s, t, p)
                if brute == 0.0 and analytic == 0.0:
                    continue
                checked += 1
                assert analytic == pytest.approx(brute, rel=1e-10)
        assert checked > 0

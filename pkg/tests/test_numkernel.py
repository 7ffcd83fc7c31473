import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gatebind.errors import BadGenerator, NotUnitary
from gatebind.eta import analytic_blocks
from gatebind.gates import CNOT, SWAP, XX, YY, ZZ, random_su
from gatebind.invariants import canonical_phases, m_matrix
from gatebind.numkernel import (
    TolerancePolicy,
    cluster_phases,
    cluster_representatives,
    eigenphases_unitary,
    expm_antihermitian,
    kernel_basis,
    nullity,
    rank,
    special_unitarize,
)

from conftest import taylor_expm

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_antihermitian(seed, dim=4, scale=math.pi):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    H = (A - A.conj().T) / 2
    return H * (scale * rng.uniform() / np.linalg.norm(H, 2))


class TestTolerancePolicy:
    def test_defaults(self):
        tol = TolerancePolicy()
        assert (tol.eps_unitary, tol.eps_rank, tol.eps_eig, tol.eps_match) == (1e-9, 1e-7, 1e-7, 1e-8)

    @pytest.mark.parametrize("field", ["eps_unitary", "eps_rank", "eps_eig", "eps_match"])
    def test_rejects_nonpositive(self, field):
        with pytest.raises(ValueError):
            TolerancePolicy(**{field: 0.0})

    def test_rank_must_exceed_unitary(self):
        with pytest.raises(ValueError):
            TolerancePolicy(eps_unitary=1e-6, eps_rank=1e-7)


class TestSpecialUnitarize:
    def test_identity(self):
        u, phase = special_unitarize(np.eye(4))
        assert np.allclose(u, np.eye(4)) and phase == 0

    def test_cnot(self):
        # det(CNOT) = -1 by cofactor expansion of the permutation (one transposition)
        assert np.isclose(np.linalg.det(CNOT), -1)
        u, phase = special_unitarize(CNOT)
        assert phase == pytest.approx(math.pi / 4, abs=1e-15)
        assert abs(np.linalg.det(u) - 1) < 1e-8

    def test_pure_phase(self):
        u, phase = special_unitarize(np.exp(0.3j) * np.eye(4))
        assert phase == pytest.approx(0.3, abs=1e-14)
        assert np.allclose(u, np.eye(4), atol=1e-14)

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            special_unitarize(2 * np.eye(4))

    @given(seeds)
    def test_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        from gatebind.gates import _haar_unitary
        u1, _ = special_unitarize(_haar_unitary(4, rng))
        u2, phase = special_unitarize(u1)
        assert np.max(np.abs(u1 - u2)) <= 1e-8
        assert abs(phase) < 1e-12


class TestEigenphases:
    def test_identity(self):
        assert np.allclose(eigenphases_unitary(np.eye(4)), 0)

    def test_diagonal(self):
        got = eigenphases_unitary(np.diag([1j, 1j, -1j, -1j]))
        assert np.allclose(got, [-math.pi / 2, -math.pi / 2, math.pi / 2, math.pi / 2])

    def test_m_of_cnot_matches_closed_form(self):
        u, _ = special_unitarize(CNOT)
        expected = canonical_phases((math.pi / 2, 0, 0))
        assert np.allclose(expected, [-math.pi / 2, -math.pi / 2, math.pi / 2, math.pi / 2])
        assert np.allclose(eigenphases_unitary(m_matrix(u)), expected, atol=1e-12)

    def test_minus_one_maps_to_pi(self):
        assert eigenphases_unitary(-np.eye(2))[0] == math.pi

    @given(seeds)
    def test_phases_reproduce_trace(self, seed):
        U = random_su(4, seed).matrix
        phases = eigenphases_unitary(U)
        assert abs(np.exp(1j * phases).sum() - np.trace(U)) <= 1e-6
        assert np.all(np.diff(phases) >= 0)
        assert np.all((phases > -math.pi) & (phases <= math.pi))


class TestClusterPhases:
    def test_all_equal(self):
        assert cluster_phases([0, 0, 0, 0]) == [4]

    def test_within_tolerance(self):
        p = [-math.pi / 2 - 1e-9, -math.pi / 2, math.pi / 2, math.pi / 2]
        assert cluster_phases(p, 1e-7) == [2, 2]

    def test_b_gate_distinct(self):
        p = canonical_phases((math.pi / 2, math.pi / 4, 0))
        assert np.allclose(p, [-3 * math.pi / 4, -math.pi / 4, math.pi / 4, 3 * math.pi / 4])
        assert cluster_phases(p) == [1, 1, 1, 1]

    def test_wraparound(self):
        p = [-math.pi + 1e-9, 0.0, 1.0, math.pi]
        assert sorted(cluster_phases(p, 1e-7)) == [1, 1, 2]

    def test_representative_is_circular_mean(self):
        reps = cluster_representatives([-math.pi + 1e-9, 0.0, math.pi], 1e-7)
        means = sorted(abs(m) for m, k in reps if k == 2)
        assert means == [pytest.approx(math.pi, abs=1e-8)]

    def test_empty(self):
        assert cluster_phases([]) == []


class TestNullity:
    def test_zero(self):
        assert nullity(np.zeros((2, 2))) == 2

    def test_identity(self):
        assert nullity(np.eye(3)) == 0

    def test_vanishing_block(self):
        _, N = analytic_blocks((math.pi / 2, 0, 0))
        assert nullity(N[0]) == 2

    def test_empty_rows(self):
        assert nullity(np.zeros((0, 3))) == 3

    @given(seeds, st.integers(1, 6), st.integers(1, 6), st.integers(0, 6))
    def test_rank_nullity(self, seed, m, n, r):
        rng = np.random.default_rng(seed)
        r = min(r, m, n)
        M = rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
        assert rank(M) + nullity(M) == n
        assert nullity(M) == n - r


class TestKernelBasis:
    def test_identity_empty(self):
        assert kernel_basis(np.eye(3)).shape == (3, 0)

    def test_zero_full(self):
        K = kernel_basis(np.zeros((2, 2)))
        assert np.allclose(K.T @ K, np.eye(2))

    def test_rank_one(self):
        K = kernel_basis(np.array([[1.0, 1.0], [0.0, 0.0]]))
        assert K.shape == (2, 1)
        assert np.allclose(abs(K[:, 0] @ np.array([1, -1]) / math.sqrt(2)), 1)

    @given(seeds)
    def test_orthonormal_and_annihilated(self, seed):
        rng = np.random.default_rng(seed)
        M = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 6))
        K = kernel_basis(M)
        assert K.shape[1] == nullity(M)
        assert np.allclose(K.T @ K, np.eye(K.shape[1]), atol=1e-8)
        assert np.max(np.abs(M @ K)) <= 1e-7 * np.linalg.norm(M, 2)


class TestExpm:
    def test_zero(self):
        assert np.allclose(expm_antihermitian(np.zeros((4, 4))), np.eye(4))

    def test_diagonal(self):
        got = expm_antihermitian(1j * math.pi / 2 * np.diag([1, -1]))
        assert np.allclose(got, np.diag([1j, -1j]), atol=1e-15)

    def test_swap_point(self):
        H = 0.5j * (math.pi / 2) * (XX + YY + ZZ)
        got = expm_antihermitian(H)
        assert np.allclose(got, np.exp(1j * math.pi / 4) * SWAP, atol=1e-12)
        assert np.allclose(got, taylor_expm(H), atol=1e-12)

    def test_rejects_hermitian(self):
        with pytest.raises(BadGenerator):
            expm_antihermitian(np.eye(2))

    @given(seeds)
    def test_matches_series_and_inverse(self, seed):
        H = random_antihermitian(seed)
        E = expm_antihermitian(H)
        assert np.max(np.abs(E @ expm_antihermitian(-H) - np.eye(4))) <= 1e-9
        assert np.max(np.abs(E - taylor_expm(H))) <= 1e-10

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nmtr import HessianApprox, NumericFailure, SolverConfig, get_problem, minimize
from nmtr.hessian import bfgs_update, matvec


class TestExamples:
    def test_identity_fixed_point(self):
        H = HessianApprox(2)
        assert H.bfgs_update([1.0, 0.0], [1.0, 0.0])
        np.testing.assert_allclose(H.B, np.eye(2), atol=1e-15)

    def test_orthogonal_pair_skipped(self):
        H = HessianApprox(2)
        assert not H.bfgs_update([1.0, 0.0], [0.0, 1.0])
        assert H.skips == 1 and H.updates == 0
        np.testing.assert_array_equal(H.B, np.eye(2))

    def test_rank_two_by_hand(self):
        H = bfgs_update(HessianApprox(2), [1.0, 0.0], [2.0, 0.0])
        np.testing.assert_allclose(H.B, np.diag([2.0, 1.0]), atol=1e-15)

    def test_functional_update_copies(self):
        H = HessianApprox(2)
        bfgs_update(H, [1.0, 0.0], [2.0, 0.0])
        np.testing.assert_array_equal(H.B, np.eye(2))

    def test_matvec_examples(self):
        np.testing.assert_array_equal(matvec(HessianApprox(2), np.array([3.0, 4.0])), [3.0, 4.0])
        H = HessianApprox(2, np.diag([2.0, 1.0]))
        np.testing.assert_array_equal(H.matvec(np.array([1.0, 1.0])), [2.0, 1.0])

    def test_matvec_matches_dense_product(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((6, 6))
        A = A + A.T
        v = rng.standard_normal(6)
        H = HessianApprox(6, A)
        expected = [sum(A[i, j] * v[j] for j in range(6)) for i in range(6)]
        np.testing.assert_allclose(H.matvec(v), expected, rtol=1e-13)

    def test_non_finite_pair(self):
        with pytest.raises(NumericFailure):
            HessianApprox(2).bfgs_update([np.inf, 0.0], [1.0, 0.0])

    def test_bad_B0_shape(self):
        with pytest.raises(ValueError):
            HessianApprox(3, np.eye(2))

    def test_norm2_identity(self):
        assert HessianApprox(4).norm2() == pytest.approx(1.0)


class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 12), st.integers(1, 15))
    def test_secant_symmetry_definiteness(self, seed, n, n_updates):
        # pairs y = A s from a fixed SPD A keep the updates well conditioned
        rng = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        A = Q @ np.diag(rng.uniform(0.5, 5.0, n)) @ Q.T
        H = HessianApprox(n)
        for _ in range(n_updates):
            s = rng.standard_normal(n)
            y = A @ s
            assert H.bfgs_update(s, y)
            B = H.B
            assert np.max(np.abs(B - B.T)) <= 1e-12 * np.max(np.abs(B))
            assert np.linalg.norm(B @ s - y) <= 1e-10 * max(1.0, np.linalg.norm(y))
        np.linalg.cholesky(H.B)

    @pytest.mark.parametrize("name", ["NCR", "MARATOS", "BEALE", "CUBE", "VARDIM", "HILBERTB"])
    def test_definite_along_solver_runs(self, name):
        seen = []

        def grab(g, H, delta, res):
            seen.append(H.B.copy())

        minimize(get_problem(name), SolverConfig(strategy="term2", eta0=0.45), on_subproblem=grab)
        assert seen
        for B in seen:
            assert np.max(np.abs(B - B.T)) <= 1e-12 * np.max(np.abs(B))
            np.linalg.cholesky(B)

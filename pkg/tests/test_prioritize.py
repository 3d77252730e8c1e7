import numpy as np
import pytest

from peersplit import (
    DisconnectedGraph,
    IncompleteMatrix,
    consistency_index,
    derive,
    derive_evm,
    derive_gmm,
    derive_llsm,
    principal_eigenvector,
    validate_pcmatrix,
)
from oracles import consistent_matrix, eigen3, random_reciprocal_matrix

CONSISTENT_124 = [[1, 2, 4], [0.5, 1, 2], [0.25, 0.5, 1]]


def pcm(raw, **kwargs):
    return validate_pcmatrix(raw, **kwargs)


class TestEVM:
    def test_consistent_matrix(self):
        w, lam = principal_eigenvector(pcm(CONSISTENT_124))
        assert np.allclose(w.values, [4 / 7, 2 / 7, 1 / 7], atol=1e-12)
        assert lam == pytest.approx(3.0, abs=1e-10)

    def test_uniform_matrix(self):
        w = derive_evm(pcm([[1, 1], [1, 1]]))
        assert np.allclose(w.values, [0.5, 0.5], atol=1e-15)

    def test_against_characteristic_polynomial_oracle(self):
        raw = [[1, 2, 1], [0.5, 1, 4], [1, 0.25, 1]]
        w, lam = principal_eigenvector(pcm(raw))
        oracle_v, oracle_lam = eigen3(np.array(raw, dtype=float))
        assert np.abs(w.values - oracle_v).max() < 1e-8
        assert lam == pytest.approx(oracle_lam, abs=1e-8)
        # frozen values from the oracle: eigenpair is exactly (0.4, 0.4, 0.2) at 3.5
        assert np.abs(w.values - [0.4, 0.4, 0.2]).max() < 1e-8
        assert lam == pytest.approx(3.5, abs=1e-8)

    def test_incomplete_rejected(self):
        with pytest.raises(IncompleteMatrix):
            derive_evm(pcm([[1, 2, None], [0.5, 1, 2], [None, 0.5, 1]]))


class TestGMM:
    def test_two_by_two(self):
        w = derive_gmm(pcm([[1, 2], [0.5, 1]]))
        assert np.allclose(w.values, [2 / 3, 1 / 3], atol=1e-15)

    def test_equals_evm_on_consistent(self):
        m = pcm(CONSISTENT_124)
        assert np.allclose(derive_gmm(m).values, derive_evm(m).values, atol=1e-12)

    def test_hand_computed_row_products(self):
        # row products 3/2, 2/3, 1 -> cube roots, normalized
        w = derive_gmm(pcm([[1, 3, 0.5], [1 / 3, 1, 2], [2, 0.5, 1]]))
        expected = [0.37925860579110343, 0.28942848510666375, 0.3313129091022329]
        assert np.abs(w.values - expected).max() < 1e-14

    def test_incomplete_rejected(self):
        with pytest.raises(IncompleteMatrix):
            derive_gmm(pcm([[1, None], [None, 1]]))


class TestLLSM:
    def test_complete_equals_gmm(self):
        m = pcm([[1, 2], [0.5, 1]])
        assert np.allclose(derive_llsm(m).values, [2 / 3, 1 / 3], atol=1e-12)

    def test_spanning_tree_path_products(self):
        # only c12 = 2 and c23 = 2 given: exact tree solution (4/7, 2/7, 1/7)
        raw = [[1, 2, None], [0.5, 1, 2], [None, 0.5, 1]]
        w = derive_llsm(pcm(raw))
        assert np.abs(w.values - [4 / 7, 2 / 7, 1 / 7]).max() < 1e-12

    def test_consistent_complete(self):
        raw = [[1, 3, 9], [1 / 3, 1, 3], [1 / 9, 1 / 3, 1]]
        w = derive_llsm(pcm(raw))
        assert np.abs(w.values - [9 / 13, 3 / 13, 1 / 13]).max() < 1e-12

    def test_gauge_independence(self):
        # solving the normal equations with any coordinate pinned to zero
        # yields the same normalized weights
        import math

        rng = np.random.default_rng(9)
        for _ in range(10):
            n = int(rng.integers(3, 7))
            raw = np.full((n, n), float("nan"))
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.8:
                        raw[i, j] = rng.uniform(0.2, 5.0)
            m = pcm(raw)
            from peersplit import comparison_graph_connected

            if not comparison_graph_connected(m):
                continue
            packaged = derive_llsm(m).values

            for gauge in range(n):
                laplacian = np.zeros((n, n))
                rhs = np.zeros(n)
                for i in range(n):
                    for j in range(n):
                        if i == j or math.isnan(m.entries[i, j]):
                            continue
                        lc = math.log(m.entries[i, j])
                        laplacian[i, i] += 1.0
                        laplacian[i, j] -= 1.0
                        rhs[i] += lc
                        laplacian[j, j] += 1.0
                        laplacian[j, i] -= 1.0
                        rhs[j] -= lc
                keep = [k for k in range(n) if k != gauge]
                x = np.zeros(n)
                x[keep] = np.linalg.solve(laplacian[np.ix_(keep, keep)], rhs[keep])
                w = np.exp(x - x.max())
                w /= w.sum()
                assert np.abs(w - packaged).max() < 1e-10

    def test_disconnected_rejected(self):
        raw = [
            [1, 2, None, None],
            [0.5, 1, None, None],
            [None, None, 1, 3],
            [None, None, 1 / 3, 1],
        ]
        with pytest.raises(DisconnectedGraph):
            derive_llsm(pcm(raw))


class TestConsistencyIndex:
    def test_consistent_is_zero(self):
        ci, cr = consistency_index(pcm(CONSISTENT_124))
        assert abs(ci) < 1e-10
        assert cr == pytest.approx(0.0, abs=1e-10)

    def test_two_by_two_always_consistent(self):
        ci, cr = consistency_index(pcm([[1, 7], [1 / 7, 1]]))
        assert abs(ci) < 1e-10
        assert cr is None

    def test_against_eigen_oracle(self):
        raw = [[1, 2, 0.5], [0.5, 1, 4], [2, 0.25, 1]]
        ci, cr = consistency_index(pcm(raw))
        _, lam = eigen3(np.array(raw, dtype=float))
        assert ci == pytest.approx((lam - 3) / 2, abs=1e-8)
        assert cr == pytest.approx(ci / 0.58, abs=1e-8)

    def test_never_meaningfully_negative(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(2, 9))
            ci, _ = consistency_index(pcm(random_reciprocal_matrix(rng, n)))
            assert ci >= -1e-10


class TestDerivationInvariants:
    METHODS = (derive_evm, derive_gmm, derive_llsm)

    def test_positive_and_normalized(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            n = int(rng.integers(2, 9))
            m = pcm(random_reciprocal_matrix(rng, n))
            for method in self.METHODS:
                w = method(m).values
                assert (w > 0).all()
                assert abs(w.sum() - 1.0) <= 1e-12

    def test_consistent_recovery(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            n = int(rng.integers(2, 9))
            v = rng.uniform(0.1, 10.0, n)
            m = pcm(consistent_matrix(v))
            target = v / v.sum()
            for method in self.METHODS:
                assert np.abs(method(m).values - target).max() < 1e-8

    def test_llsm_matches_gmm_on_complete(self):
        rng = np.random.default_rng(6)
        for _ in range(25):
            n = int(rng.integers(2, 9))
            m = pcm(random_reciprocal_matrix(rng, n))
            assert np.abs(derive_llsm(m).values - derive_gmm(m).values).max() < 1e-10

    def test_rescaling_equivariance(self):
        # revaluing alternative i by alpha (row i times alpha, column i divided
        # by alpha) multiplies its weight by alpha, relative to everyone else
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = int(rng.integers(3, 8))
            c = random_reciprocal_matrix(rng, n)
            i = int(rng.integers(n))
            alpha = float(rng.uniform(0.2, 5.0))
            scaled = c.copy()
            scaled[i, :] *= alpha
            scaled[:, i] /= alpha
            base = derive_gmm(pcm(c)).values
            expected = base.copy()
            expected[i] *= alpha
            expected /= expected.sum()
            got = derive_gmm(pcm(scaled)).values
            assert np.abs(got - expected).max() < 1e-10

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(8)
        for _ in range(15):
            n = int(rng.integers(3, 8))
            c = random_reciprocal_matrix(rng, n)
            perm = rng.permutation(n)
            permuted = c[np.ix_(perm, perm)]
            for method in self.METHODS:
                base = method(pcm(c)).values
                got = method(pcm(permuted)).values
                assert np.abs(got - base[perm]).max() < 1e-9

    def test_dispatch(self):
        m = pcm([[1, 2], [0.5, 1]])
        assert np.allclose(derive(m, "gmm").values, [2 / 3, 1 / 3])
        with pytest.raises(ValueError):
            derive(m, "nope")

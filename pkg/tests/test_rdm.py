import numpy as np
import pytest
from scipy.spatial.distance import pdist, squareform
from scipy.stats import spearmanr

from rsacompare.rdm import (
    DegenerateRdmError,
    Rdm,
    average_ranks,
    correlation_rdm,
    euclidean_rdm,
    rsa_score,
    spearman,
)


def tril_condensed(full):
    """Lower triangle in row-major order: (1,0), (2,0), (2,1), (3,0), ..."""
    n = full.shape[0]
    return full[np.tril_indices(n, -1)]


class TestCorrelationRdm:
    def test_proportional_rows_distance_zero(self):
        r = correlation_rdm(np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]))
        assert r.values == pytest.approx([0.0], abs=1e-12)

    def test_reversed_rows_distance_two(self):
        r = correlation_rdm(np.array([[1.0, 2.0, 3.0], [3.0, 2.0, 1.0]]))
        assert r.values == pytest.approx([2.0], abs=1e-12)

    def test_hand_example_three_items(self):
        # rows (1,2) and (2,1) anticorrelate, (1,2) and (1,3) correlate
        # perfectly after row-centering, so condensed = (2, 0, 2)
        r = correlation_rdm(np.array([[1.0, 2.0], [2.0, 1.0], [1.0, 3.0]]))
        assert r.n_items == 3
        assert r.metric == "correlation"
        assert r.values == pytest.approx([2.0, 0.0, 2.0], abs=1e-12)

    def test_matches_pdist_oracle(self):
        rng = np.random.default_rng(7)
        for n, p in [(5, 4), (12, 6), (30, 20)]:
            x = rng.standard_normal((n, p))
            got = correlation_rdm(x).values
            want = tril_condensed(squareform(pdist(x, metric="correlation")))
            np.testing.assert_allclose(got, want, atol=1e-12)

    def test_values_bounded(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal((40, 5))
        v = correlation_rdm(x).values
        assert np.all(v >= -1e-12) and np.all(v <= 2 + 1e-12)

    def test_positive_scaling_invariance(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((10, 6))
        np.testing.assert_allclose(
            correlation_rdm(x).values, correlation_rdm(3.7 * x).values, atol=1e-12
        )

    def test_row_shift_invariance(self):
        rng = np.random.default_rng(10)
        x = rng.standard_normal((10, 6))
        shifted = x.copy()
        shifted[4] += 11.0  # row-centering absorbs a per-row constant
        np.testing.assert_allclose(
            correlation_rdm(x).values, correlation_rdm(shifted).values, atol=1e-12
        )

    def test_constant_row_error_names_row(self):
        x = np.array([[1.0, 2.0, 3.0], [5.0, 5.0, 5.0], [1.0, 0.0, 2.0]])
        with pytest.raises(DegenerateRdmError, match="row 1"):
            correlation_rdm(x)

    def test_single_feature_rejected(self):
        with pytest.raises(ValueError):
            correlation_rdm(np.array([[1.0], [2.0], [3.0]]))


class TestEuclideanRdm:
    def test_scalar_response(self):
        r = euclidean_rdm(np.array([1.0, 4.0, 2.0]))
        assert r.metric == "euclidean"
        assert r.values == pytest.approx([3.0, 1.0, 2.0], abs=1e-12)

    def test_identical_rows_zero(self):
        r = euclidean_rdm(np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]]))
        assert r.values[0] == pytest.approx(0.0, abs=1e-12)

    def test_three_four_five(self):
        r = euclidean_rdm(np.array([[0.0, 0.0], [3.0, 4.0]]))
        assert r.values == pytest.approx([5.0], abs=1e-12)

    def test_matches_pdist_oracle(self):
        rng = np.random.default_rng(11)
        y = rng.standard_normal((25, 7))
        want = tril_condensed(squareform(pdist(y)))
        np.testing.assert_allclose(euclidean_rdm(y).values, want, atol=1e-12)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(12)
        y = rng.standard_normal((15, 3))
        full = squareform(pdist(y))
        got = squareform_from_tril(euclidean_rdm(y).values, 15)
        np.testing.assert_allclose(got, full, atol=1e-12)
        n = 15
        for _ in range(200):
            i, j, k = rng.choice(n, size=3, replace=False)
            assert got[i, j] <= got[i, k] + got[k, j] + 1e-12


def squareform_from_tril(values, n):
    full = np.zeros((n, n))
    full[np.tril_indices(n, -1)] = values
    return full + full.T


class TestAverageRanks:
    def test_distinct(self):
        assert average_ranks(np.array([10.0, 30.0, 20.0])) == pytest.approx([1, 3, 2])

    def test_midrank_pair(self):
        assert average_ranks(np.array([1.0, 1.0, 2.0])) == pytest.approx([1.5, 1.5, 3])

    def test_all_tied(self):
        assert average_ranks(np.full(4, 9.0)) == pytest.approx([2.5, 2.5, 2.5, 2.5])

    def test_matches_scipy_rankdata(self):
        from scipy.stats import rankdata

        rng = np.random.default_rng(13)
        for _ in range(50):
            v = rng.integers(0, 6, size=40).astype(float)
            np.testing.assert_allclose(average_ranks(v), rankdata(v), atol=0)


class TestSpearman:
    def test_same_order(self):
        assert spearman([0.1, 0.2, 0.3], [5, 6, 7]) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_swap(self):
        # one adjacent swap in 4 items: rho = 1 - 6*2/(4*15) = 0.8
        assert spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)

    def test_tied_hand_value(self):
        # ranks (1.5, 1.5, 3) vs (1, 2, 3): Pearson = 1.5/sqrt(3)
        assert spearman([1, 1, 2], [1, 2, 3]) == pytest.approx(1.5 / np.sqrt(3.0), abs=1e-12)

    def test_symmetry_and_sign(self):
        rng = np.random.default_rng(14)
        a = rng.standard_normal(30)
        b = rng.standard_normal(30)
        assert spearman(a, b) == pytest.approx(spearman(b, a), abs=1e-15)
        assert spearman(a, -a) == pytest.approx(-1.0, abs=1e-12)
        assert spearman(a, np.exp(a)) == pytest.approx(1.0, abs=1e-12)

    def test_tiefree_closed_form(self):
        rng = np.random.default_rng(15)
        for _ in range(20):
            a = rng.permutation(50).astype(float)
            b = rng.permutation(50).astype(float)
            d = average_ranks(a) - average_ranks(b)
            closed = 1 - 6 * np.sum(d**2) / (50 * (50**2 - 1))
            assert spearman(a, b) == pytest.approx(closed, abs=1e-12)

    def test_scipy_oracle_with_ties(self):
        rng = np.random.default_rng(16)
        for _ in range(200):
            m = int(rng.integers(5, 60))
            a = rng.integers(0, 8, size=m).astype(float)
            b = rng.integers(0, 8, size=m).astype(float)
            if np.all(a == a[0]) or np.all(b == b[0]):
                continue
            want = spearmanr(a, b).statistic
            assert spearman(a, b) == pytest.approx(want, abs=1e-12)

    def test_constant_vector_degenerate(self):
        with pytest.raises(DegenerateRdmError):
            spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            spearman([1.0, 2.0], [1.0, 2.0, 3.0])


class TestRsaScore:
    def test_identity(self):
        r = correlation_rdm(np.random.default_rng(17).standard_normal((8, 5)))
        assert rsa_score(r, r) == pytest.approx(1.0, abs=1e-12)

    def test_hand_example_anticorrelated(self):
        rx = correlation_rdm(np.array([[1.0, 2.0], [2.0, 1.0], [1.0, 3.0]]))
        ry = euclidean_rdm(np.array([1.0, 2.0, 3.0]))
        # condensed (2,0,2) vs (1,2,1): ranks (2.5,1,2.5) vs (1.5,3,1.5)
        assert rsa_score(rx, ry) == pytest.approx(-1.0, abs=1e-12)

    def test_mismatched_items(self):
        rx = euclidean_rdm(np.array([1.0, 2.0, 3.0]))
        ry = euclidean_rdm(np.array([1.0, 2.0, 3.0, 4.0]))
        with pytest.raises(ValueError):
            rsa_score(rx, ry)

    def test_constant_rdm_degenerate(self):
        rx = Rdm(n_items=3, values=np.array([1.0, 1.0, 1.0]), metric="euclidean")
        ry = euclidean_rdm(np.array([1.0, 2.0, 4.0]))
        with pytest.raises(DegenerateRdmError):
            rsa_score(rx, ry)

    def test_common_permutation_invariance(self):
        rng = np.random.default_rng(18)
        x = rng.standard_normal((12, 6))
        y = rng.standard_normal(12)
        base = rsa_score(correlation_rdm(x), euclidean_rdm(y))
        for _ in range(5):
            perm = rng.permutation(12)
            s = rsa_score(correlation_rdm(x[perm]), euclidean_rdm(y[perm]))
            assert s == pytest.approx(base, abs=1e-12)

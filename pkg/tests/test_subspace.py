import numpy as np
import pytest
from scipy.linalg import subspace_angles

from splda.preprocess import ZeroVectorWarning, l2_normalize_columns
from splda.subspace import build_graph, embed, slpp_fit


def pencil_matrices(data, labels):
    graph = build_graph(labels)
    a = (data * graph.degree) @ data.T
    b = data @ graph.laplacian @ data.T + np.eye(data.shape[0])
    return 0.5 * (a + a.T), 0.5 * (b + b.T)


class TestBuildGraph:
    def test_three_labels(self):
        graph = build_graph([0, 0, 1])
        np.testing.assert_array_equal(
            graph.adjacency, [[1, 1, 0], [1, 1, 0], [0, 0, 1]])
        np.testing.assert_array_equal(graph.degree, [2, 2, 1])

    def test_all_equal_labels(self):
        n = 5
        graph = build_graph(np.zeros(n, dtype=int))
        np.testing.assert_array_equal(graph.adjacency, np.ones((n, n)))
        np.testing.assert_array_equal(graph.laplacian, n * np.eye(n) - np.ones((n, n)))

    def test_laplacian_rows_sum_to_zero(self, rng):
        labels = rng.integers(0, 4, size=30)
        graph = build_graph(labels)
        np.testing.assert_allclose(graph.laplacian @ np.ones(30), 0.0, atol=1e-12)

    def test_depends_only_on_label_equality(self, rng):
        labels = rng.integers(0, 3, size=12)
        shifted = labels + 7
        np.testing.assert_array_equal(build_graph(labels).adjacency,
                                      build_graph(shifted).adjacency)


class TestSlppFit:
    def test_two_classes_on_a_line(self):
        rng = np.random.default_rng(5)
        n = 40
        # class 0 near -4, class 1 near +4 along the first axis
        base = np.concatenate([rng.normal(-4, 0.3, n), rng.normal(4, 0.3, n)])
        data = np.vstack([base, rng.normal(0, 0.3, 2 * n)])
        labels = np.array([0] * n + [1] * n)
        model = slpp_fit(data, labels, 1)
        projected = (model.projection.T @ data).ravel()
        m0, m1 = projected[:n].mean(), projected[n:].mean()
        spread = max(projected[:n].std(), projected[n:].std())
        assert abs(m0 - m1) >= spread

    def test_uniform_labels_residual_contract(self, rng):
        data = rng.normal(size=(6, 20))
        labels = np.zeros(20, dtype=int)
        model = slpp_fit(data, labels, 3)
        a, b = pencil_matrices(data, labels)
        bound = 1e-8 * (np.linalg.norm(a, "fro") + np.linalg.norm(b, "fro"))
        for j in range(3):
            p = model.projection[:, j]
            lam = (p @ a @ p) / (p @ b @ p)
            assert np.linalg.norm(a @ p - lam * (b @ p)) <= bound

    def test_beats_random_projections(self, rng):
        data = rng.normal(size=(8, 60))
        labels = rng.integers(0, 3, size=60)
        data += 3.0 * np.eye(8)[:, labels % 8]
        model = slpp_fit(data, labels, 2)
        a, b = pencil_matrices(data, labels)

        def quotient(p):
            return np.trace(p.T @ a @ p) / np.trace(p.T @ b @ p)

        ours = quotient(model.projection)
        for _ in range(100):
            q, _ = np.linalg.qr(rng.normal(size=(8, 2)))
            assert ours >= quotient(q) - 1e-12

    def test_residual_contract_random_labels(self, rng):
        data = rng.normal(size=(7, 35))
        labels = rng.integers(0, 4, size=35)
        model = slpp_fit(data, labels, 5)
        a, b = pencil_matrices(data, labels)
        bound = 1e-8 * (np.linalg.norm(a, "fro") + np.linalg.norm(b, "fro"))
        for j in range(model.n_components):
            p = model.projection[:, j]
            lam = (p @ a @ p) / (p @ b @ p)
            assert np.linalg.norm(a @ p - lam * (b @ p)) <= bound

    def test_column_permutation_gives_same_subspace(self, rng):
        data = rng.normal(size=(6, 30))
        labels = rng.integers(0, 3, size=30)
        perm = rng.permutation(30)
        model_a = slpp_fit(data, labels, 3)
        model_b = slpp_fit(data[:, perm], labels[perm], 3)
        angles = subspace_angles(model_a.projection, model_b.projection)
        assert angles.max() <= 1e-6

    def test_embedding_mean_uses_all_data(self, rng):
        labeled = rng.normal(size=(5, 12))
        labels = rng.integers(0, 2, size=12)
        everything = rng.normal(size=(5, 40))
        model = slpp_fit(labeled, labels, 2, all_data=everything)
        expected = (model.projection.T @ everything).mean(axis=1)
        np.testing.assert_allclose(model.embedding_mean, expected)

    def test_rejects_too_many_components(self, rng):
        data = rng.normal(size=(4, 10))
        with pytest.raises(ValueError, match="n_components"):
            slpp_fit(data, np.zeros(10, dtype=int), 5)

    def test_rejects_label_misalignment(self, rng):
        data = rng.normal(size=(4, 10))
        with pytest.raises(ValueError, match="align"):
            slpp_fit(data, np.zeros(9, dtype=int), 2)


class TestEmbed:
    def test_zero_projection_passthrough(self):
        from splda.subspace import SlppModel
        model = SlppModel(projection=np.eye(2), embedding_mean=np.array([1.0, 2.0]))
        with pytest.warns(ZeroVectorWarning):
            out = embed(model, np.array([[1.0], [2.0]]))
        np.testing.assert_array_equal(out, np.zeros((2, 1)))

    def test_output_columns_unit_norm(self, rng):
        data = rng.normal(size=(5, 30))
        model = slpp_fit(data, rng.integers(0, 3, size=30), 3)
        out = embed(model, rng.normal(size=(5, 15)))
        np.testing.assert_allclose(np.linalg.norm(out, axis=0), 1.0, atol=1e-12)

    def test_pre_normalization_mean_is_zero(self, rng):
        data = rng.normal(size=(6, 25))
        labels = rng.integers(0, 3, size=25)
        model = slpp_fit(data, labels, 4, all_data=data)
        centered = model.projection.T @ data - model.embedding_mean[:, None]
        assert np.linalg.norm(centered.mean(axis=1)) <= 1e-10

    def test_dimension_mismatch(self, rng):
        data = rng.normal(size=(5, 20))
        model = slpp_fit(data, rng.integers(0, 2, size=20), 2)
        with pytest.raises(ValueError, match="dimension mismatch"):
            embed(model, np.ones((4, 3)))

    def test_matches_manual_pipeline(self, rng):
        data = rng.normal(size=(5, 18))
        model = slpp_fit(data, rng.integers(0, 2, size=18), 2)
        probe = rng.normal(size=(5, 6))
        manual = l2_normalize_columns(
            model.projection.T @ probe - model.embedding_mean[:, None])
        np.testing.assert_allclose(embed(model, probe), manual)

import numpy as np
import pytest

from it2frbc import (
    ConfigError,
    DataError,
    PotentialField,
    SubclustParams,
    gen_circular,
    initial_potentials,
    revise_potentials,
    subtractive_cluster,
)

# Frozen oracle values for the 3-point set {(0,0), (0,0.1), (1,1)} at
# r_a = 0.5 (alpha = 16, beta = 10.24), evaluated independently at
# 30-digit precision.
THREE_POINTS = np.array([[0.0, 0.0], [0.0, 0.1], [1.0, 1.0]])
THREE_INITIAL = [1.8521437889662240, 1.8521437889664761, 1.0000000000002774]
THREE_REVISED = [0.18027209603427560, 0.0, 0.99999998346973690]


class TestParams:
    def test_defaults(self):
        p = SubclustParams(0.5)
        assert p.rb_ratio == 1.25
        assert p.accept_ratio == 0.5
        assert p.reject_ratio == 0.15
        assert p.alpha == pytest.approx(16.0)
        assert p.beta == pytest.approx(10.24)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(r_a=0.0),
            dict(r_a=-1.0),
            dict(r_a=0.5, rb_ratio=0.0),
            dict(r_a=0.5, accept_ratio=0.0),
            dict(r_a=0.5, accept_ratio=1.5),
            dict(r_a=0.5, reject_ratio=0.9),
            dict(r_a=0.5, max_centers=0),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            SubclustParams(**kwargs)


class TestInitialPotentials:
    def test_single_point(self):
        field = initial_potentials(np.array([[3.0, 4.0]]), SubclustParams(1.0))
        assert field.values.tolist() == [1.0]

    def test_two_coincident(self):
        field = initial_potentials(np.zeros((2, 2)), SubclustParams(1.0))
        assert field.values.tolist() == [2.0, 2.0]

    def test_three_point_oracle(self):
        field = initial_potentials(THREE_POINTS, SubclustParams(0.5))
        assert field.values == pytest.approx(THREE_INITIAL, rel=1e-14)

    def test_all_at_least_one(self):
        rng = np.random.default_rng(0)
        field = initial_potentials(rng.normal(size=(30, 3)), SubclustParams(0.3))
        assert np.all(field.values >= 1.0)

    def test_dimension_check(self):
        with pytest.raises(DataError):
            initial_potentials(np.zeros(3), SubclustParams(1.0))


class TestRevisePotentials:
    def test_center_potential_becomes_zero(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
        params = SubclustParams(0.8)
        field = initial_potentials(pts, params)
        k = int(field.values.argmax())
        revised = revise_potentials(field, pts, k, params)
        assert revised.values[k] == 0.0

    def test_far_point_unchanged(self):
        pts = np.array([[0.0], [1e9]])
        params = SubclustParams(1.0)
        field = initial_potentials(pts, params)
        revised = revise_potentials(field, pts, 0, params)
        assert revised.values[1] == field.values[1]

    def test_three_point_oracle(self):
        params = SubclustParams(0.5)
        field = initial_potentials(THREE_POINTS, params)
        assert int(field.values.argmax()) == 1
        revised = revise_potentials(field, THREE_POINTS, 1, params)
        assert revised.values == pytest.approx(THREE_REVISED, rel=1e-12, abs=1e-15)

    def test_never_increases(self):
        rng = np.random.default_rng(1)
        pts = rng.uniform(size=(25, 2))
        params = SubclustParams(0.4)
        field = initial_potentials(pts, params)
        revised = revise_potentials(field, pts, int(field.values.argmax()), params)
        assert np.all(revised.values <= field.values)

    def test_index_validation(self):
        field = PotentialField(np.ones(2))
        with pytest.raises(DataError):
            revise_potentials(field, np.zeros((2, 1)), 5, SubclustParams(1.0))


class TestSubtractiveCluster:
    def test_single_point(self):
        centers = subtractive_cluster(np.array([[2.0, 3.0]]), SubclustParams(0.5))
        assert centers.tolist() == [[2.0, 3.0]]

    def test_two_dense_blobs(self):
        # 10 coincident points per blob: potentials are near-exact integers
        # (10 + 10*exp(-alpha*50) per point); the loop accepts exactly one
        # center per blob and then stops.
        pts = np.vstack([np.zeros((10, 2)), np.full((10, 2), 5.0)])
        centers = subtractive_cluster(pts, SubclustParams(1.0))
        assert centers.shape == (2, 2)
        assert centers[0].tolist() == [0.0, 0.0]
        assert centers[1].tolist() == [5.0, 5.0]

    def test_tie_breaks_to_lowest_index(self):
        pts = np.array([[0.0, 0.0], [10.0, 10.0]])
        centers = subtractive_cluster(pts, SubclustParams(0.5))
        assert centers[0].tolist() == [0.0, 0.0]

    def test_centers_are_input_points(self):
        rng = np.random.default_rng(2)
        pts = rng.uniform(size=(60, 2))
        centers = subtractive_cluster(pts, SubclustParams(0.3))
        as_set = {tuple(p) for p in pts}
        assert all(tuple(c) in as_set for c in centers)

    def test_translation_covariance(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(size=(40, 2))
        shift = np.array([13.5, -2.25])
        a = subtractive_cluster(pts, SubclustParams(0.35))
        b = subtractive_cluster(pts + shift, SubclustParams(0.35))
        assert a.shape == b.shape
        assert np.allclose(a + shift, b, atol=1e-9)

    def test_max_centers_cap(self):
        rng = np.random.default_rng(4)
        pts = rng.uniform(size=(50, 2))
        centers = subtractive_cluster(pts, SubclustParams(0.1, max_centers=3))
        assert centers.shape[0] == 3

    def test_radius_controls_count_on_benchmark(self):
        ds = gen_circular(11)
        ring = ds.features[ds.labels == 1] / 20.0
        small = subtractive_cluster(ring, SubclustParams(0.2))
        large = subtractive_cluster(ring, SubclustParams(0.6))
        assert small.shape[0] > large.shape[0]

    def test_always_at_least_one_center(self):
        rng = np.random.default_rng(5)
        pts = rng.uniform(size=(10, 2))
        centers = subtractive_cluster(pts, SubclustParams(5.0))
        assert centers.shape[0] >= 1

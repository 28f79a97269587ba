import numpy as np
import pytest

from lapreg.errors import InvalidArgumentError
from lapreg.graph import generate_geometric_graph, laplacian, laplacian_quadratic_form
from lapreg.synth import (
    block_rng,
    dump_instance,
    load_instance,
    make_instance,
    sample_coefficients,
    sample_design_matrix,
    synthesize_observations,
)

from conftest import two_components


@pytest.fixture(scope="module")
def graph100():
    return laplacian(generate_geometric_graph(100, 0.5, 0.0, seed=10))


def test_design_matrix_shape(graph100):
    theta = sample_design_matrix(graph100, 10, seed=1)
    assert theta.shape == (100, 10)


def test_design_columns_orthogonal_to_constant(graph100):
    theta = sample_design_matrix(graph100, 10, seed=2)
    for v in theta.T:
        assert abs(v.sum()) <= 1e-8 * np.linalg.norm(v) * np.sqrt(100)


def test_design_matrix_needs_connected_graph():
    with pytest.raises(InvalidArgumentError):
        sample_design_matrix(laplacian(two_components()), 3, seed=0)


def test_design_covariance_matches_pseudoinverse():
    # Monte Carlo oracle against an explicit pseudoinverse
    s = laplacian(generate_geometric_graph(5, 0.5, 0.0, seed=3))
    N = 100_000
    V = sample_design_matrix(s, N, seed=4)
    C = np.linalg.pinv(s.L)
    emp = V @ V.T / N
    se = np.sqrt((np.outer(np.diag(C), np.diag(C)) + C**2) / N)
    assert np.all(np.abs(emp - C) <= 3 * se)


def test_smoothness_expectation_is_m_minus_one():
    # E tr(v^T L v) = tr(L L^+) = m - 1 per column
    s = laplacian(generate_geometric_graph(20, 0.5, 0.0, seed=5))
    N = 20_000
    V = sample_design_matrix(s, N, seed=6)
    per_col = laplacian_quadratic_form(s, V) / N
    # each column's form is chi-square with m - 1 dof, sd sqrt(2(m-1))
    assert per_col == pytest.approx(19, abs=4 * np.sqrt(2 * 19 / N))


def test_coefficients_shape_and_determinism():
    a = sample_coefficients(np.eye(10), 10, 500, seed=7)
    b = sample_coefficients(np.eye(10), 10, 500, seed=7)
    assert a.shape == (10, 500)
    np.testing.assert_array_equal(a, b)


def test_coefficients_empirical_covariance():
    X = sample_coefficients(np.eye(3), 3, 100_000, seed=8)
    np.testing.assert_allclose(X @ X.T / 100_000, np.eye(3), atol=0.05)


def test_coefficients_respect_sigma():
    Sigma = np.array([[2.0, 0.5], [0.5, 1.0]])
    X = sample_coefficients(Sigma, 2, 200_000, seed=9)
    np.testing.assert_allclose(X @ X.T / 200_000, Sigma, atol=0.03)


@pytest.mark.parametrize("Sigma, k, n", [
    (np.zeros((0, 0)), 0, 10),
    (np.eye(3), 3, 2),
    (np.diag([1.0, -1.0]), 2, 10),
    (np.eye(2), 3, 10),
])
def test_coefficients_reject_bad_input(Sigma, k, n):
    with pytest.raises(InvalidArgumentError):
        sample_coefficients(Sigma, k, n, seed=0)


def test_observations_noise_variance():
    theta = np.zeros((100, 10))
    X = np.ones((10, 500))
    Y, omega = synthesize_observations(theta, X, np.sqrt(5.0), seed=10)
    # sample variance of 5e4 N(0, 5) entries: sd = 5 sqrt(2 / 5e4) ~ 0.032
    assert omega.var() == pytest.approx(5.0, abs=0.2)
    np.testing.assert_array_equal(Y, omega)


def test_noiseless_observations():
    rng = np.random.default_rng(0)
    theta, X = rng.standard_normal((4, 2)), rng.standard_normal((2, 7))
    Y, omega = synthesize_observations(theta, X, 0.0, seed=1)
    np.testing.assert_array_equal(Y, theta @ X)
    assert not omega.any()


def test_observations_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        synthesize_observations(np.zeros((3, 2)), np.zeros((3, 5)), 1.0)


def test_instance_reconstruction_identity(graph100):
    inst = make_instance(graph100, 10, 500, np.sqrt(5), seed=11)
    np.testing.assert_array_equal(inst.Y, inst.theta_star @ inst.X + inst.omega)
    np.testing.assert_allclose(inst.Y - inst.theta_star @ inst.X - inst.omega, 0, atol=1e-12)
    assert (inst.m, inst.k, inst.n) == (100, 10, 500)
    assert inst.seed == 11


def test_instance_determinism_and_stream_independence(graph100):
    a = make_instance(graph100, 4, 50, 1.0, seed=12)
    b = make_instance(graph100, 4, 50, 1.0, seed=12)
    for name in ("theta_star", "X", "omega", "Y"):
        np.testing.assert_array_equal(getattr(a, name), getattr(b, name))
    # a different noise level leaves the other blocks untouched
    c = make_instance(graph100, 4, 50, 2.0, seed=12)
    np.testing.assert_array_equal(c.theta_star, a.theta_star)
    np.testing.assert_array_equal(c.X, a.X)
    np.testing.assert_array_equal(c.omega, 2 * a.omega)
    # more samples change X but not the ground truth
    d = make_instance(graph100, 4, 80, 1.0, seed=12)
    np.testing.assert_array_equal(d.theta_star, a.theta_star)


def test_block_streams_differ():
    draws = {b: block_rng(5, b).standard_normal(4) for b in ("graph", "theta", "X", "omega")}
    values = [tuple(v) for v in draws.values()]
    assert len(set(values)) == 4


def test_instance_dump_round_trip(tmp_path, graph100):
    inst = make_instance(graph100, 3, 20, 0.7, seed=13)
    dump_instance(inst, tmp_path, bandwidth=0.5, threshold=0.0)
    manifest = (tmp_path / "manifest.txt").read_text().splitlines()
    assert manifest[:4] == ["m=100", "k=3", "n=20", "sigma=0.69999999999999996"]
    assert "seed=13" in manifest and "bandwidth=0.5" in manifest
    back, meta = load_instance(tmp_path)
    for name in ("theta_star", "X", "omega", "Y", "Sigma"):
        np.testing.assert_array_equal(getattr(back, name), getattr(inst, name))
    assert back.seed == 13 and meta["threshold"] == "0.0"

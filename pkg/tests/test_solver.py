import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lapreg.errors import InvalidArgumentError, NonConvergenceError, SingularSystemError
from lapreg.graph import Graph, generate_geometric_graph, identity_spectrum, laplacian
from lapreg.solver import (
    EstimatorConfig,
    SpectralSolver,
    gradient_loss,
    loss,
    objective,
    oracle_gradient_descent,
    regularizer,
    solve_laplacian_regularized,
    solve_ridge,
    stationarity_residual,
    taylor_remainder,
    taylor_remainder_direct,
)
from lapreg.synth import make_instance


def random_problem(seed, m=6, k=2, n=40, sigma=1.0):
    s = laplacian(generate_geometric_graph(m, 0.5, 0.0, seed=seed))
    return s, make_instance(s, k, n, sigma, seed=seed)


def central_difference_gradient(f, Theta, h=1e-6):
    G = np.zeros_like(Theta)
    for idx in np.ndindex(*Theta.shape):
        E = np.zeros_like(Theta)
        E[idx] = h
        G[idx] = (f(Theta + E) - f(Theta - E)) / (2 * h)
    return G


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        EstimatorConfig(-1.0)
    with pytest.raises(InvalidArgumentError):
        EstimatorConfig(1.0, "lasso")


# closed form ------------------------------------------------------------------------
def test_alpha_zero_is_least_squares(small_problem):
    s, inst = small_problem
    est = solve_laplacian_regularized(inst.Y, inst.X, s, 0.0)
    ls = inst.Y @ inst.X.T @ np.linalg.inv(inst.X @ inst.X.T)
    np.testing.assert_allclose(est.theta_hat, ls, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(gradient_loss(est.theta_hat, inst.Y, inst.X), 0, atol=1e-10)


def test_empty_graph_matches_unregularized(small_problem):
    _, inst = small_problem
    empty = laplacian(Graph.from_weights(np.zeros((6, 6))))
    a = solve_laplacian_regularized(inst.Y, inst.X, empty, 3.0).theta_hat
    b = solve_laplacian_regularized(inst.Y, inst.X, empty, 0.0).theta_hat
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_matches_gradient_descent_oracle(small_problem):
    s, inst = small_problem
    est = solve_laplacian_regularized(inst.Y, inst.X, s, 0.1)
    ref = oracle_gradient_descent(inst.Y, inst.X, s, 0.1)
    assert np.linalg.norm(est.theta_hat - ref.theta_hat) <= 1e-6 * np.linalg.norm(ref.theta_hat)


def test_stationarity_residual_definition(small_problem):
    s, inst = small_problem
    est = solve_laplacian_regularized(inst.Y, inst.X, s, 0.3)
    n = inst.n
    direct = np.linalg.norm(
        2 * 0.3 * s.L @ est.theta_hat + est.theta_hat @ (inst.X @ inst.X.T / n) - inst.Y @ inst.X.T / n
    )
    assert est.stationarity_residual == pytest.approx(direct, abs=1e-15)
    assert est.stationarity_residual <= 1e-8 * (1 + np.linalg.norm(inst.Y @ inst.X.T / n))


def test_singular_system_names_index():
    s = laplacian(generate_geometric_graph(4, 0.5, 0.0, seed=1))
    X = np.array([[1.0, 2.0, 3.0, 4.0], [2.0, 4.0, 6.0, 8.0]])  # rank 1
    Y = np.ones((4, 4))
    with pytest.raises(SingularSystemError) as info:
        solve_laplacian_regularized(Y, X, s, 0.0)
    assert info.value.index == (0, 0)
    # a positive alpha still leaves the constant mode singular
    with pytest.raises(SingularSystemError):
        solve_laplacian_regularized(Y, X, s, 1.0)
    solve_ridge(Y, X, 1.0)
    with pytest.raises(SingularSystemError):
        solve_ridge(Y, X, 0.0)


def test_spectral_solver_reuse_matches_fresh_solve(small_problem):
    s, inst = small_problem
    solver = SpectralSolver(inst.Y, inst.X, s)
    for a in (1e-3, 0.1, 10.0):
        np.testing.assert_array_equal(
            solver.solve(a).theta_hat, solve_laplacian_regularized(inst.Y, inst.X, s, a).theta_hat
        )


# ridge -------------------------------------------------------------------------------
def test_ridge_equals_laplacian_with_identity(small_problem):
    _, inst = small_problem
    for a in (0.0, 0.05, 2.0):
        r = solve_ridge(inst.Y, inst.X, a).theta_hat
        lap = solve_laplacian_regularized(inst.Y, inst.X, identity_spectrum(6), a).theta_hat
        assert np.linalg.norm(r - lap) <= 1e-10 * max(1.0, np.linalg.norm(r))


def test_ridge_scalar_case():
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal((1, 10)), rng.standard_normal((1, 10))
    a = 0.4
    expected = (np.sum(y * x) / 10) / (np.sum(x * x) / 10 + 2 * a)
    assert solve_ridge(y, x, a).theta_hat[0, 0] == pytest.approx(expected, rel=1e-14)
    gd = oracle_gradient_descent(y, x, None, a)
    assert gd.theta_hat[0, 0] == pytest.approx(expected, rel=1e-8)


def test_ridge_alpha_zero_least_squares(small_problem):
    _, inst = small_problem
    ls = np.linalg.lstsq(inst.X.T, inst.Y.T, rcond=None)[0].T
    np.testing.assert_allclose(solve_ridge(inst.Y, inst.X, 0.0).theta_hat, ls, rtol=1e-10)


# objective and loss calculus --------------------------------------------------------------
def test_objective_perfect_fit():
    s, inst = random_problem(2, sigma=0.0)
    assert objective(inst.theta_star, inst.Y, inst.X, s, 0.0) == pytest.approx(0.0, abs=1e-28)


def test_objective_alpha_zero_is_loss(small_problem):
    s, inst = small_problem
    T = np.random.default_rng(0).standard_normal((6, 2))
    R = inst.Y - T @ inst.X
    assert objective(T, inst.Y, inst.X, s, 0.0) == pytest.approx(np.sum(R**2) / (2 * inst.n), rel=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_objective_of_estimate_beats_truth(seed):
    s, inst = random_problem(seed, m=8, k=3, n=30, sigma=2.0)
    for a in (0.0, 0.01, 1.0):
        est = solve_laplacian_regularized(inst.Y, inst.X, s, a)
        assert est.objective_value <= objective(inst.theta_star, inst.Y, inst.X, s, a)


def test_gradient_at_truth_is_noise_correlation(small_problem):
    _, inst = small_problem
    g = gradient_loss(inst.theta_star, inst.Y, inst.X)
    # with Omega = Y - Theta* X the gradient is -(1/n) Omega X^T
    np.testing.assert_allclose(g, -(inst.omega @ inst.X.T) / inst.n, atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    Y, X, T = rng.standard_normal((4, 20)), rng.standard_normal((3, 20)), rng.standard_normal((4, 3))
    fd = central_difference_gradient(lambda Th: loss(Th, Y, X), T)
    g = gradient_loss(T, Y, X)
    assert np.linalg.norm(fd - g) <= 1e-5 * np.linalg.norm(g)


def test_taylor_remainder_zero_step(small_problem):
    _, inst = small_problem
    assert taylor_remainder(inst.theta_star, np.zeros((6, 2)), inst.X) == 0.0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 8), k=st.integers(1, 4), extra=st.integers(0, 30))
def test_taylor_remainder_closed_form_equals_definition(seed, m, k, extra):
    rng = np.random.default_rng(seed)
    n = k + extra
    T, D = rng.standard_normal((m, k)), rng.standard_normal((m, k))
    X, Y = rng.standard_normal((k, n)), rng.standard_normal((m, n))
    closed = taylor_remainder(T, D, X)
    direct = taylor_remainder_direct(T, D, X, Y)
    assert abs(closed - direct) <= 1e-9 * max(abs(closed), 1e-300) + 1e-12 * (loss(T, Y, X) + loss(T + D, Y, X))
    smin = np.linalg.eigvalsh(X @ X.T)[0]
    assert closed >= smin / (2 * n) * np.sum(D**2) * (1 - 1e-12) - 1e-15


def test_exact_quadratic_expansion(small_problem):
    s, inst = small_problem
    a = 0.2
    D = np.random.default_rng(4).standard_normal((6, 2))
    T = inst.theta_star
    g = gradient_loss(T, inst.Y, inst.X)
    lhs = objective(T + D, inst.Y, inst.X, s, a)
    rhs = loss(T, inst.Y, inst.X) + np.sum(g * D) + taylor_remainder(T, D, inst.X) + a * regularizer(T + D, s)
    assert lhs == pytest.approx(rhs, rel=1e-12)
    # regularizer increment
    inc = regularizer(T + D, s) - regularizer(T, s)
    assert inc == pytest.approx(2 * np.sum((s.L @ T) * D) + regularizer(D, s), rel=1e-10, abs=1e-12)


def test_regularization_path_monotone(small_problem):
    s, inst = small_problem
    solver = SpectralSolver(inst.Y, inst.X, s)
    alphas = np.logspace(-4, 2, 25)
    values = [regularizer(solver.solve(a).theta_hat, s) for a in alphas]
    assert all(b <= a * (1 + 1e-10) for a, b in zip(values, values[1:]))


# oracle -----------------------------------------------------------------------------------
def test_oracle_objective_nonincreasing(small_problem):
    s, inst = small_problem
    _, values = oracle_gradient_descent(inst.Y, inst.X, s, 0.5, history=True)
    diffs = np.diff(values)
    assert np.all(diffs <= 4 * np.finfo(float).eps * np.abs(values[:-1]))


def test_oracle_reports_nonconvergence(small_problem):
    s, inst = small_problem
    with pytest.raises(NonConvergenceError) as info:
        oracle_gradient_descent(inst.Y, inst.X, s, 0.1, tol=1e-14, max_iter=3)
    assert info.value.residual > 1e-14


def test_oracle_rejects_bad_arguments(small_problem):
    s, inst = small_problem
    with pytest.raises(InvalidArgumentError):
        oracle_gradient_descent(inst.Y, inst.X, s, -1.0)
    with pytest.raises(InvalidArgumentError):
        oracle_gradient_descent(inst.Y, inst.X, s, 1.0, tol=0.0)


def test_stationarity_residual_zero_at_ls(small_problem):
    s, inst = small_problem
    ls = inst.Y @ inst.X.T @ np.linalg.inv(inst.X @ inst.X.T)
    assert stationarity_residual(ls, inst.Y, inst.X, s, 0.0) < 1e-12

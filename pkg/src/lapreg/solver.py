r"""Closed-form Laplacian-regularized and ridge estimators.

Both estimators minimize

.. math::
    \frac{1}{2n}\|Y - \Theta X\|_F^2 + \alpha\,\mathrm{tr}(\Theta^T L \Theta),

with ``L = I_m`` for ridge. Setting the gradient to zero gives the Sylvester
equation ``2 alpha L Theta + Theta M = C`` with ``M = X X^T / n`` and
``C = Y X^T / n``. Both coefficient matrices are symmetric, so the
Bartels-Stewart Schur forms are diagonal and the solve reduces to two
eigendecompositions and an elementwise division.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NonConvergenceError, SingularSystemError
from .graph import LaplacianSpectrum, identity_spectrum

__all__ = [
    "LAPLACIAN",
    "RIDGE",
    "EstimatorConfig",
    "EstimateResult",
    "solve_laplacian_regularized",
    "solve_ridge",
    "solve",
    "SpectralSolver",
    "objective",
    "regularizer",
    "loss",
    "gradient_loss",
    "full_gradient",
    "taylor_remainder",
    "taylor_remainder_direct",
    "stationarity_residual",
    "oracle_gradient_descent",
]

LAPLACIAN = "laplacian"
RIDGE = "ridge"


@dataclass(frozen=True)
class EstimatorConfig:
    alpha: float
    kind: str = LAPLACIAN

    def __post_init__(self):
        if not self.alpha >= 0:
            raise InvalidArgumentError(f"alpha must be nonnegative, got {self.alpha}")
        if self.kind not in (LAPLACIAN, RIDGE):
            raise InvalidArgumentError(f"unknown estimator kind {self.kind!r}")


@dataclass(frozen=True)
class EstimateResult:
    """Estimated design matrix with its first-order residual and objective."""

    theta_hat: np.ndarray
    config: EstimatorConfig
    stationarity_residual: float
    objective_value: float
    iterations: int = 0


def _L(s):
    """Dense penalty matrix from a spectrum, an array, or ``None`` (identity)."""
    if s is None:
        return None
    if isinstance(s, LaplacianSpectrum):
        return s.L
    return np.asarray(s, dtype=float)


def _check_dims(Theta, Y, X):
    m, k = Theta.shape
    if X.shape[0] != k or Y.shape != (m, X.shape[1]):
        raise InvalidArgumentError(
            f"dimension mismatch: Theta {Theta.shape}, X {X.shape}, Y {Y.shape}"
        )


def loss(Theta, Y, X) -> float:
    """Least-squares loss ``||Y - Theta X||_F^2 / (2n)``."""
    Theta, Y, X = (np.asarray(a, dtype=float) for a in (Theta, Y, X))
    _check_dims(Theta, Y, X)
    R = Y - Theta @ X
    return float(np.sum(R * R)) / (2 * X.shape[1])


def regularizer(Theta, s=None) -> float:
    """``tr(Theta^T L Theta)``; ``s=None`` means ``L = I``."""
    Theta = np.asarray(Theta, dtype=float)
    L = _L(s)
    if L is None:
        return float(np.sum(Theta * Theta))
    if L.shape[0] != Theta.shape[0]:
        raise InvalidArgumentError(f"penalty is {L.shape}, Theta has {Theta.shape[0]} rows")
    return float(np.sum(Theta * (L @ Theta)))


def objective(Theta, Y, X, s=None, alpha=0.0) -> float:
    """Penalized objective; ``s`` is a spectrum, a matrix, or ``None`` for ridge."""
    return loss(Theta, Y, X) + alpha * regularizer(Theta, s)


def gradient_loss(Theta, Y, X) -> np.ndarray:
    """Gradient of the loss, ``(Theta X - Y) X^T / n``."""
    Theta, Y, X = (np.asarray(a, dtype=float) for a in (Theta, Y, X))
    _check_dims(Theta, Y, X)
    return (Theta @ X - Y) @ X.T / X.shape[1]


def full_gradient(Theta, Y, X, s=None, alpha=0.0) -> np.ndarray:
    """Gradient of :func:`objective`: loss gradient plus ``2 alpha L Theta``."""
    Theta = np.asarray(Theta, dtype=float)
    L = _L(s)
    LTheta = Theta if L is None else L @ Theta
    return gradient_loss(Theta, Y, X) + 2 * alpha * LTheta


def stationarity_residual(Theta, Y, X, s=None, alpha=0.0) -> float:
    """``||2 alpha L Theta + Theta X X^T/n - Y X^T/n||_F``."""
    return float(np.linalg.norm(full_gradient(Theta, Y, X, s, alpha)))


def taylor_remainder(theta_star, Delta, X) -> float:
    """Closed-form first-order Taylor remainder ``||Delta X||_F^2 / (2n)``."""
    Delta, X = np.asarray(Delta, dtype=float), np.asarray(X, dtype=float)
    if Delta.shape[1] != X.shape[0] or np.shape(theta_star) != Delta.shape:
        raise InvalidArgumentError("dimension mismatch in taylor_remainder")
    DX = Delta @ X
    return float(np.sum(DX * DX)) / (2 * X.shape[1])


def taylor_remainder_direct(theta_star, Delta, X, Y) -> float:
    """Remainder from its definition ``L(T+D) - L(T) - <grad L(T), D>``."""
    theta_star, Delta = np.asarray(theta_star, dtype=float), np.asarray(Delta, dtype=float)
    g = gradient_loss(theta_star, Y, X)
    return loss(theta_star + Delta, Y, X) - loss(theta_star, Y, X) - float(np.sum(g * Delta))


# Spectral solver ==============================================================
class SpectralSolver:
    """Reusable factorization of one ``(Y, X, L)`` triple.

    The eigendecompositions of ``L`` and ``X X^T / n`` and the projected
    right-hand side are computed once, so solving along an ``alpha`` grid
    costs one elementwise division and two matrix products per value.

    Parameters
    ----------
    Y : (m, n) ndarray
    X : (k, n) ndarray
    s : LaplacianSpectrum or None
        Penalty spectrum; ``None`` selects the ridge penalty ``I_m``.
    """

    def __init__(self, Y, X, s: LaplacianSpectrum | None = None):
        Y = np.asarray(Y, dtype=float)
        X = np.asarray(X, dtype=float)
        if Y.ndim != 2 or X.ndim != 2 or Y.shape[1] != X.shape[1]:
            raise InvalidArgumentError(f"Y {Y.shape} and X {X.shape} must share n columns")
        m, n = Y.shape
        self.kind = RIDGE if s is None else LAPLACIAN
        if s is None:
            s = identity_spectrum(m)
        if s.m != m:
            raise InvalidArgumentError(f"graph has {s.m} vertices, Y has {m} rows")
        self.Y, self.X, self.spectrum = Y, X, s
        self.n = n
        M = X @ X.T / n
        self.C = Y @ X.T / n
        self.mu, self.P = np.linalg.eigh((M + M.T) / 2)
        self.lam = s.eigenvalues
        Q = s.eigenvectors
        # ridge: Q = I, skip the products
        self._Q = None if self.kind == RIDGE else Q
        self.Ct = self.C @ self.P if self._Q is None else Q.T @ self.C @ self.P

    def solve(self, alpha) -> EstimateResult:
        cfg = EstimatorConfig(float(alpha), self.kind)
        divisor = 2 * alpha * self.lam[:, None] + self.mu[None, :]
        guard = 1e-12 * (2 * alpha * max(self.lam[-1], 0.0) + max(self.mu[-1], 0.0))
        if not np.all(divisor > guard):
            i, j = np.unravel_index(np.argmin(divisor), divisor.shape)
            raise SingularSystemError(
                f"singular Sylvester system at alpha={alpha}: divisor "
                f"2*alpha*lambda_{i} + mu_{j} = {divisor[i, j]:.3e} <= {guard:.3e}",
                index=(int(i), int(j)),
            )
        U = self.Ct / divisor
        theta = U @ self.P.T if self._Q is None else self._Q @ U @ self.P.T
        L = None if self.kind == RIDGE else self.spectrum
        return EstimateResult(
            theta,
            cfg,
            stationarity_residual(theta, self.Y, self.X, L, alpha),
            objective(theta, self.Y, self.X, L, alpha),
        )


def solve_laplacian_regularized(Y, X, s: LaplacianSpectrum, alpha) -> EstimateResult:
    """Laplacian-regularized estimate via the diagonalized Sylvester equation.

    With ``L = Q diag(lambda) Q^T`` and ``X X^T/n = P diag(mu) P^T`` the
    solution is ``Q U P^T`` with ``U_ij = (Q^T C P)_ij / (2 alpha lambda_i + mu_j)``.

    Raises
    ------
    SingularSystemError
        If a divisor is not safely positive (e.g. ``alpha = 0`` with
        rank-deficient ``X``); ``index`` names the offending pair.
    """
    if s is None:
        raise InvalidArgumentError("a LaplacianSpectrum is required; use solve_ridge for L = I")
    return SpectralSolver(Y, X, s).solve(alpha)


def solve_ridge(Y, X, alpha) -> EstimateResult:
    """Ridge estimate ``(Y X^T/n) (X X^T/n + 2 alpha I)^{-1}``."""
    Y = np.asarray(Y, dtype=float)
    X = np.asarray(X, dtype=float)
    if Y.shape[1] != X.shape[1]:
        raise InvalidArgumentError(f"Y {Y.shape} and X {X.shape} must share n columns")
    if not alpha >= 0:
        raise InvalidArgumentError(f"alpha must be nonnegative, got {alpha}")
    n, k = X.shape[1], X.shape[0]
    A = X @ X.T / n + 2 * alpha * np.eye(k)
    C = Y @ X.T / n
    w = np.linalg.eigvalsh(A)
    if not w[0] > 1e-12 * max(w[-1], 0.0):
        raise SingularSystemError(
            f"singular ridge system at alpha={alpha} (smallest eigenvalue {w[0]:.3e})",
            index=(0, 0),
        )
    theta = np.linalg.solve(A, C.T).T
    cfg = EstimatorConfig(float(alpha), RIDGE)
    return EstimateResult(
        theta, cfg, stationarity_residual(theta, Y, X, None, alpha), objective(theta, Y, X, None, alpha)
    )


def solve(Y, X, s, alpha, kind=LAPLACIAN) -> EstimateResult:
    """Dispatch on ``kind``."""
    if kind == RIDGE:
        return solve_ridge(Y, X, alpha)
    return solve_laplacian_regularized(Y, X, s, alpha)


# Verification oracle ==========================================================
def oracle_gradient_descent(Y, X, s=None, alpha=0.0, tol=None, max_iter=200_000, history=False):
    """Gradient descent with Armijo backtracking on the full objective.

    Independent of the spectral solver: it touches neither eigenvector
    matrix, only ``L`` itself and the largest eigenvalues for the step size.

    Parameters
    ----------
    tol : float, optional
        Stop when the gradient Frobenius norm is ``<= tol``. Defaults to
        ``1e-9 * (1 + ||Y X^T / n||_F)``.
    history : bool
        Also return the list of objective values, one per iteration.

    Raises
    ------
    NonConvergenceError
        After ``max_iter`` iterations; ``residual`` is the final gradient norm.
    """
    Y = np.asarray(Y, dtype=float)
    X = np.asarray(X, dtype=float)
    if not alpha >= 0:
        raise InvalidArgumentError(f"alpha must be nonnegative, got {alpha}")
    n = X.shape[1]
    m, k = Y.shape[0], X.shape[0]
    L = _L(s)
    if tol is None:
        tol = 1e-9 * (1 + np.linalg.norm(Y @ X.T / n))
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    lam_max = 1.0 if L is None else (np.linalg.eigvalsh(L)[-1] if m else 0.0)
    lip = np.linalg.eigvalsh(X @ X.T / n)[-1] + 2 * alpha * max(lam_max, 0.0)
    step0 = 1.0 / lip
    armijo, shrink = 1e-4, 0.5

    theta = np.zeros((m, k))
    f = objective(theta, Y, X, L, alpha)
    values = [f]
    g = full_gradient(theta, Y, X, L, alpha)
    gnorm = np.linalg.norm(g)
    it = 0
    while gnorm > tol:
        if it >= max_iter:
            raise NonConvergenceError(
                f"gradient descent did not converge in {max_iter} iterations "
                f"(gradient norm {gnorm:.3e})",
                float(gnorm),
            )
        t = step0
        while True:
            cand = theta - t * g
            fc = objective(cand, Y, X, L, alpha)
            # slack absorbs rounding once decreases fall below resolution of f
            if fc <= f - armijo * t * gnorm**2 + 4 * np.finfo(float).eps * abs(f) or t < 1e-20:
                break
            t *= shrink
        theta, f = cand, min(fc, f)
        values.append(fc)
        g = full_gradient(theta, Y, X, L, alpha)
        gnorm = np.linalg.norm(g)
        it += 1
    kind = RIDGE if L is None else LAPLACIAN
    res = EstimateResult(theta, EstimatorConfig(float(alpha), kind), float(gnorm), f, it)
    return (res, values) if history else res

"""Error-bound calculators and lemma diagnostics for the Laplacian estimator.

The main bound on ``||Theta_hat - Theta*||_F`` is

    alpha * (sqrt(r) + 2 ||L Theta*||_F) / (kappa + alpha * lambda_2),

valid when ``alpha`` dominates the sup-norm of the loss gradient at the truth
and the loss is ``kappa``-strongly convex. Ridge is the ``L = I`` special
case. The diagnostics evaluate every ingredient of the argument on realized
data so the probabilistic steps can be checked empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .graph import LaplacianSpectrum, fiedler_value, identity_spectrum
from .synth import sample_coefficients

__all__ = [
    "BoundIngredients",
    "LemmaReport",
    "TrialReport",
    "theorem1_bound",
    "corollary1_bound",
    "recommended_alpha",
    "kappa_from_sigma",
    "realized_kappa",
    "assumption1_ratio",
    "lemma_diagnostics",
    "empirical_vs_bound",
    "LEMMA2_NOTE",
    "ridge_ingredients",
    "lemma3_event_frequency",
]

#: Reading of the sup-norm in the gradient-concentration diagnostic.
LEMMA2_NOTE = (
    "lemma2_lhs uses the entrywise max |.| of (1/n) Omega X^T; "
    "lemma2_lhs_op is the spectral-norm alternative; neither is assumed to satisfy the rhs"
)


@dataclass(frozen=True)
class BoundIngredients:
    alpha: float
    r: int
    smoothness_misalignment: float
    kappa: float
    lambda2: float
    bound_value: float


@dataclass(frozen=True)
class LemmaReport:
    """Both sides of every lemma inequality for one realized ``Delta``."""

    lemma1_lhs: float
    lemma1_exact_rhs: float
    lemma1_approx_rhs: float
    assumption1_ratio: float
    lemma2_lhs: float
    lemma2_rhs: float
    lemma3_min: float
    lemma3_max: float
    lemma2_lhs_op: float = float("nan")
    lemma3_event: bool = False

    @property
    def lemma1_exact_holds(self) -> bool:
        return self.lemma1_lhs >= self.lemma1_exact_rhs - 1e-9 * (1 + abs(self.lemma1_lhs))

    @property
    def lemma1_approx_holds(self) -> bool:
        return self.lemma1_lhs >= self.lemma1_approx_rhs - 1e-9 * (1 + abs(self.lemma1_lhs))

    @property
    def lemma2_holds(self) -> bool:
        return self.lemma2_lhs <= self.lemma2_rhs


@dataclass(frozen=True)
class TrialReport:
    """Empirical error next to its bound for one solved instance."""

    empirical_error: float
    bound_value: float
    ratio: float
    r: int
    ingredients: BoundIngredients
    lemmas: LemmaReport
    realized_kappa: float
    stationarity_residual: float
    alpha: float
    kind: str
    seed: int | None

    @property
    def bound_holds(self) -> bool:
        return self.empirical_error <= self.bound_value


def _bound(alpha, r, misalignment, kappa, lambda2):
    return alpha * (math.sqrt(r) + 2.0 * misalignment) / (kappa + alpha * lambda2)


def _check_common(alpha, r, kappa):
    if not kappa > 0:
        raise InvalidArgumentError(f"kappa must be positive, got {kappa}")
    if not alpha >= 0:
        raise InvalidArgumentError(f"alpha must be nonnegative, got {alpha}")
    if r < 1:
        raise InvalidArgumentError(f"rank budget r must be at least 1, got {r}")


def theorem1_bound(alpha, r, s: LaplacianSpectrum, theta_star, kappa) -> BoundIngredients:
    """Evaluate the Laplacian-estimator error bound.

    Raises
    ------
    InvalidArgumentError
        If the graph is disconnected (``lambda_2 = 0``), or on a bad
        ``alpha``/``r``/``kappa``.
    """
    _check_common(alpha, r, kappa)
    theta_star = np.asarray(theta_star, dtype=float)
    if theta_star.shape[0] != s.m:
        raise InvalidArgumentError(f"theta_star has {theta_star.shape[0]} rows, graph has {s.m} vertices")
    lam2 = fiedler_value(s)
    if not lam2 > 0:
        raise InvalidArgumentError("bound requires a connected graph (lambda_2 > 0)")
    mis = float(np.linalg.norm(s.L @ theta_star))
    return BoundIngredients(float(alpha), int(r), mis, float(kappa), lam2, _bound(alpha, r, mis, kappa, lam2))


def corollary1_bound(alpha, r, theta_star, kappa) -> float:
    """Ridge bound ``alpha (sqrt(r) + 2||Theta*||_F) / (kappa + alpha)``."""
    _check_common(alpha, r, kappa)
    return _bound(alpha, r, float(np.linalg.norm(theta_star)), kappa, 1.0)


def recommended_alpha(sigma, D, m, k, n) -> float:
    """Smallest admissible ``alpha``: ``8 sigma sqrt(D) sqrt(m + k) / (m n)``."""
    if not D >= 2:
        raise InvalidArgumentError(f"D must be at least 2, got {D}")
    if min(m, k, n) < 1:
        raise InvalidArgumentError("dimensions must be positive")
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be nonnegative, got {sigma}")
    return 8.0 * sigma * math.sqrt(D) * math.sqrt(m + k) / (m * n)


def kappa_from_sigma(Sigma) -> float:
    """Strong-convexity constant ``sigma_min(Sigma) / 18``."""
    Sigma = np.atleast_2d(np.asarray(Sigma, dtype=float))
    if Sigma.shape[0] != Sigma.shape[1] or not np.allclose(Sigma, Sigma.T):
        raise InvalidArgumentError("Sigma must be square and symmetric")
    w = np.linalg.eigvalsh(Sigma)
    if not w[0] > 0:
        raise InvalidArgumentError("Sigma must be positive definite")
    return float(w[0]) / 18.0


def realized_kappa(X) -> float:
    """Per-instance curvature ``sigma_min(X X^T) / (2n)``."""
    X = np.asarray(X, dtype=float)
    return float(np.linalg.eigvalsh(X @ X.T)[0]) / (2 * X.shape[1])


def assumption1_ratio(Delta) -> float:
    """``sum_j mean-mode energy / ||Delta||_F^2``; 0 when ``Delta = 0``."""
    Delta = np.asarray(Delta, dtype=float)
    total = float(np.sum(Delta * Delta))
    if total == 0.0:
        return 0.0
    m = Delta.shape[0]
    return float(np.sum(Delta.sum(axis=0) ** 2) / m) / total


def lemma_diagnostics(Delta, s: LaplacianSpectrum, Omega, X, sigma, D=2.0, Sigma=None) -> LemmaReport:
    """Evaluate both sides of each lemma for a realized error ``Delta``.

    ``Sigma`` defaults to ``I_k`` and only affects ``lemma3_event``.
    """
    Delta = np.asarray(Delta, dtype=float)
    Omega = np.asarray(Omega, dtype=float)
    X = np.asarray(X, dtype=float)
    m, k = Delta.shape
    n = X.shape[1]
    if s.m != m or X.shape[0] != k or Omega.shape != (m, n):
        raise InvalidArgumentError("dimension mismatch in lemma_diagnostics")

    lhs = float(np.sum(Delta * (s.L @ Delta)))
    lam2 = fiedler_value(s) if m >= 2 else 0.0
    fro2 = float(np.sum(Delta * Delta))
    q1 = s.eigenvectors[:, 0]
    null_energy = float(np.sum((q1 @ Delta) ** 2))

    G = Omega @ X.T / n
    mu = np.linalg.eigvalsh(X @ X.T / n)
    Sigma = np.eye(k) if Sigma is None else np.asarray(Sigma, dtype=float)
    sw = np.linalg.eigvalsh(Sigma)
    return LemmaReport(
        lemma1_lhs=lhs,
        lemma1_exact_rhs=lam2 * fro2 - lam2 * null_energy,
        lemma1_approx_rhs=lam2 * fro2,
        assumption1_ratio=assumption1_ratio(Delta),
        lemma2_lhs=float(np.max(np.abs(G))),
        lemma2_rhs=recommended_alpha(sigma, D, m, k, n),
        lemma3_min=float(mu[0]),
        lemma3_max=float(mu[-1]),
        lemma2_lhs_op=float(np.linalg.norm(G, 2)),
        lemma3_event=bool(mu[0] >= sw[0] / 9 and mu[-1] <= 9 * sw[-1]),
    )


def empirical_vs_bound(instance, estimate, ingredients: BoundIngredients, s: LaplacianSpectrum, D=2.0) -> TrialReport:
    """Compare ``||Theta_hat - Theta*||_F`` with a precomputed bound.

    The lemma quantities are evaluated on the Laplacian of ``s``, whichever
    penalty the estimator used.
    """
    Delta = estimate.theta_hat - instance.theta_star
    err = float(np.linalg.norm(Delta))
    lemmas = lemma_diagnostics(Delta, s, instance.omega, instance.X, instance.sigma, D, instance.Sigma)
    b = ingredients.bound_value
    return TrialReport(
        empirical_error=err,
        bound_value=b,
        ratio=err / b if b > 0 else math.inf,
        r=min(instance.m, instance.k),
        ingredients=ingredients,
        lemmas=lemmas,
        realized_kappa=realized_kappa(instance.X),
        stationarity_residual=estimate.stationarity_residual,
        alpha=estimate.config.alpha,
        kind=estimate.config.kind,
        seed=instance.seed,
    )


def ridge_ingredients(alpha, r, theta_star, kappa) -> BoundIngredients:
    """Bound ingredients for ridge (``L = I``, ``lambda_2 = 1``)."""
    m = np.shape(theta_star)[0]
    if m < 2:
        _check_common(alpha, r, kappa)
        mis = float(np.linalg.norm(theta_star))
        return BoundIngredients(float(alpha), int(r), mis, float(kappa), 1.0, _bound(alpha, r, mis, kappa, 1.0))
    return theorem1_bound(alpha, r, identity_spectrum(m), theta_star, kappa)


def lemma3_event_frequency(Sigma, n, draws=1000, seed=None) -> float:
    """Fraction of ``X`` draws with ``sigma_min(X X^T/n) >= sigma_min(Sigma)/9``
    and ``sigma_max(X X^T/n) <= 9 sigma_max(Sigma)``."""
    Sigma = np.atleast_2d(np.asarray(Sigma, dtype=float))
    k = Sigma.shape[0]
    sw = np.linalg.eigvalsh(Sigma)
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(draws):
        X = sample_coefficients(Sigma, k, n, rng)
        mu = np.linalg.eigvalsh(X @ X.T / n)
        hits += mu[0] >= sw[0] / 9 and mu[-1] <= 9 * sw[-1]
    return hits / draws

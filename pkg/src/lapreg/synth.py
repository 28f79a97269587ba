"""Synthetic instances of the linear model ``Y = Theta X + Omega``.

Randomness comes from numpy's PCG64 bit generator (128-bit state). Every
block of an instance draws from its own stream, derived from the master seed
through :class:`numpy.random.SeedSequence` with a fixed spawn key per block
(see :data:`STREAMS`), so regenerating one block never perturbs another.
Gaussian variates use numpy's ziggurat sampler.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .graph import LaplacianSpectrum

__all__ = [
    "STREAMS",
    "ModelInstance",
    "block_rng",
    "sample_design_matrix",
    "sample_coefficients",
    "synthesize_observations",
    "make_instance",
    "dump_instance",
    "load_instance",
]

#: Fixed spawn keys of the per-block random streams.
STREAMS = {"graph": 0, "theta": 1, "X": 2, "omega": 3}


def block_rng(seed, block) -> np.random.Generator:
    """Independent generator for one named block of an instance."""
    if isinstance(seed, np.random.Generator):
        return seed
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(STREAMS[block],))
    return np.random.Generator(np.random.PCG64(ss))


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


@dataclass(frozen=True)
class ModelInstance:
    """One realization of ``Y = theta_star @ X + omega`` with its provenance."""

    theta_star: np.ndarray
    X: np.ndarray
    omega: np.ndarray
    Y: np.ndarray
    sigma: float
    Sigma: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        m, k = self.theta_star.shape
        if self.X.shape[0] != k or self.Y.shape != (m, self.X.shape[1]) or self.omega.shape != self.Y.shape:
            raise InvalidArgumentError("inconsistent instance dimensions")
        for name in ("theta_star", "X", "omega", "Y", "Sigma"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def m(self) -> int:
        return self.theta_star.shape[0]

    @property
    def k(self) -> int:
        return self.theta_star.shape[1]

    @property
    def n(self) -> int:
        return self.X.shape[1]


def sample_design_matrix(s: LaplacianSpectrum, k, seed=None) -> np.ndarray:
    """Draw ``k`` graph-smooth columns from ``N(0, L^+)``.

    Each column is ``Q[:, 1:] @ (z / sqrt(lambda[1:]))`` with ``z`` standard
    normal, i.e. a degenerate Gaussian whose precision is the Laplacian. The
    constant mode is projected out exactly.

    Raises
    ------
    InvalidArgumentError
        If the graph is disconnected or ``k < 1``.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be at least 1, got {k}")
    if not s.connected:
        raise InvalidArgumentError("covariance L^+ needs a connected graph")
    rng = _rng(seed)
    lam = s.eigenvalues[1:]
    z = rng.standard_normal((lam.size, k))
    theta = s.eigenvectors[:, 1:] @ (z / np.sqrt(lam)[:, None])
    return theta - theta.mean(axis=0)


def sample_coefficients(Sigma, k, n, seed=None) -> np.ndarray:
    """``k x n`` matrix with i.i.d. ``N(0, Sigma)`` columns (Cholesky sampling)."""
    Sigma = np.atleast_2d(np.asarray(Sigma, dtype=float))
    if k < 1 or Sigma.shape != (k, k):
        raise InvalidArgumentError(f"Sigma must be {k}x{k} with k >= 1, got shape {Sigma.shape}")
    if n < k:
        raise InvalidArgumentError(f"need n >= k, got n={n}, k={k}")
    if not np.allclose(Sigma, Sigma.T):
        raise InvalidArgumentError("Sigma must be symmetric")
    try:
        C = np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError as exc:
        raise InvalidArgumentError("Sigma is not positive definite") from exc
    return C @ _rng(seed).standard_normal((k, n))


def synthesize_observations(theta_star, X, sigma, seed=None):
    """Return ``(Y, omega)`` with ``omega`` i.i.d. ``N(0, sigma**2)``."""
    theta_star = np.asarray(theta_star, dtype=float)
    X = np.asarray(X, dtype=float)
    if theta_star.shape[1] != X.shape[0]:
        raise InvalidArgumentError(f"theta_star {theta_star.shape} and X {X.shape} do not conform")
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be nonnegative, got {sigma}")
    omega = sigma * _rng(seed).standard_normal((theta_star.shape[0], X.shape[1]))
    return theta_star @ X + omega, omega


def make_instance(s: LaplacianSpectrum, k, n, sigma, Sigma=None, seed=0, theta_star=None) -> ModelInstance:
    """Full instance on a fixed graph.

    ``theta_star`` overrides the smooth draw (used for prior-mismatch
    experiments). ``Sigma`` defaults to ``I_k``.
    """
    Sigma = np.eye(k) if Sigma is None else np.asarray(Sigma, dtype=float)
    if theta_star is None:
        theta_star = sample_design_matrix(s, k, block_rng(seed, "theta"))
    X = sample_coefficients(Sigma, k, n, block_rng(seed, "X"))
    Y, omega = synthesize_observations(theta_star, X, sigma, block_rng(seed, "omega"))
    return ModelInstance(theta_star, X, omega, Y, float(sigma), Sigma, seed)


# Instance dump ================================================================
_MATRICES = ("theta_star", "X", "omega", "Y", "Sigma")


def _write_csv(path, a):
    with open(path, "w", newline="\n") as f:
        for row in np.atleast_2d(a):
            f.write(",".join(f"{v:.17g}" for v in row) + "\n")


def dump_instance(instance: ModelInstance, out_dir, **meta) -> None:
    """Write one CSV per matrix plus ``manifest.txt`` (``key=value`` lines).

    ``meta`` carries graph parameters (``bandwidth``, ``threshold``) that the
    instance itself does not know.
    """
    os.makedirs(out_dir, exist_ok=True)
    for name in _MATRICES:
        _write_csv(os.path.join(out_dir, f"{name}.csv"), getattr(instance, name))
    manifest = {
        "m": instance.m,
        "k": instance.k,
        "n": instance.n,
        "sigma": f"{instance.sigma:.17g}",
        "bandwidth": meta.pop("bandwidth", ""),
        "threshold": meta.pop("threshold", ""),
        "seed": instance.seed,
        **meta,
    }
    with open(os.path.join(out_dir, "manifest.txt"), "w", newline="\n") as f:
        for key, value in manifest.items():
            f.write(f"{key}={value}\n")


def load_instance(out_dir) -> tuple[ModelInstance, dict]:
    """Inverse of :func:`dump_instance`; returns the instance and the manifest."""
    manifest = {}
    with open(os.path.join(out_dir, "manifest.txt")) as f:
        for line in f:
            if "=" in line:
                key, value = line.rstrip("\n").split("=", 1)
                manifest[key] = value
    mats = {}
    for name in _MATRICES:
        a = np.loadtxt(os.path.join(out_dir, f"{name}.csv"), delimiter=",", ndmin=2)
        mats[name] = a
    seed = manifest.get("seed", "")
    inst = ModelInstance(
        mats["theta_star"], mats["X"], mats["omega"], mats["Y"],
        float(manifest["sigma"]), mats["Sigma"], int(seed) if seed not in ("", "None") else None,
    )
    return inst, manifest

"""Weighted undirected graphs, combinatorial Laplacians and their spectra.

A :class:`Graph` holds vertex coordinates in the unit square and a symmetric
nonnegative weight matrix. :func:`laplacian` turns it into a
:class:`LaplacianSpectrum` (``L = D - W`` plus its ascending
eigendecomposition), which the estimators, the samplers and the bound
calculators all consume.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericalFailureError

__all__ = [
    "Graph",
    "LaplacianSpectrum",
    "generate_geometric_graph",
    "laplacian",
    "spectrum_of",
    "identity_spectrum",
    "fiedler_value",
    "laplacian_quadratic_form",
    "edge_quadratic_form",
    "is_connected",
    "jacobi_eigh",
    "write_edge_list",
    "read_edge_list",
]

DEFAULT_ZERO_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Graph:
    """Weighted undirected graph on ``m`` vertices.

    Parameters
    ----------
    coords : (m, 2) ndarray
        Vertex positions.
    W : (m, m) ndarray
        Symmetric, nonnegative, zero-diagonal weight matrix.
    """

    coords: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        W = _frozen(self.W)
        coords = _frozen(self.coords).reshape(-1, 2)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise InvalidArgumentError(f"W must be square, got shape {W.shape}")
        if coords.shape[0] != W.shape[0]:
            raise InvalidArgumentError("coords and W disagree on the vertex count")
        if not np.array_equal(W, W.T):
            raise InvalidArgumentError("W must be symmetric")
        if np.any(np.diag(W) != 0):
            raise InvalidArgumentError("W must have a zero diagonal")
        if np.any(W < 0) or not np.all(np.isfinite(W)):
            raise InvalidArgumentError("W must be finite and nonnegative")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "coords", coords)

    @property
    def m(self) -> int:
        return self.W.shape[0]

    @classmethod
    def from_weights(cls, W) -> "Graph":
        """Graph with the given weights and all vertices at the origin."""
        W = np.asarray(W, dtype=float)
        return cls(np.zeros((W.shape[0], 2)), W)


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Laplacian matrix together with its ascending eigendecomposition.

    ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``. Eigenvalues whose
    magnitude is below ``zero_tol * max(1, lambda_max)`` are stored as exact
    zeros.
    """

    L: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        for name in ("L", "eigenvalues", "eigenvectors"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def m(self) -> int:
        return self.L.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1]) if self.m else 0.0

    @property
    def connected(self) -> bool:
        """At most one (clamped) zero eigenvalue."""
        return self.m == 1 or (self.m > 1 and self.eigenvalues[1] > 0)


def generate_geometric_graph(m, bandwidth=0.5, threshold=0.0, seed=None) -> Graph:
    """Random geometric graph with Gaussian RBF weights.

    Vertices are drawn uniformly in the unit square and joined with weight
    ``exp(-d**2 / bandwidth**2)`` whenever that weight exceeds ``threshold``.

    Parameters
    ----------
    m : int
        Number of vertices, at least 1.
    bandwidth : float
        Kernel bandwidth, strictly positive.
    threshold : float
        Weights ``<= threshold`` are dropped; must lie in ``[0, 1)``.
    seed : int, numpy.random.Generator or None
        Source of randomness.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"vertex count must be a positive integer, got {m}")
    if not bandwidth > 0:
        raise InvalidArgumentError(f"bandwidth must be positive, got {bandwidth}")
    if not 0 <= threshold < 1:
        raise InvalidArgumentError(f"threshold must lie in [0, 1), got {threshold}")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, 1.0, size=(int(m), 2))
    diff = coords[:, None, :] - coords[None, :, :]
    W = np.exp(-np.sum(diff**2, axis=-1) / bandwidth**2)
    W[W <= threshold] = 0.0
    np.fill_diagonal(W, 0.0)
    # exact symmetry regardless of floating point in the distance computation
    W = np.triu(W, 1)
    W = W + W.T
    return Graph(coords, W)


def jacobi_eigh(A, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Iterates until the off-diagonal Frobenius mass drops below
    ``tol * ||A||_F``.

    Returns
    -------
    w : (m,) ndarray
        Eigenvalues in ascending order.
    V : (m, m) ndarray
        Orthonormal eigenvectors, column ``i`` pairs with ``w[i]``.

    Raises
    ------
    NumericalFailureError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    A = np.array(A, dtype=float)
    m = A.shape[0]
    V = np.eye(m)
    scale = np.linalg.norm(A)
    target = tol * scale

    mask = ~np.eye(m, dtype=bool)

    def off(M):
        return float(np.sqrt(np.sum(M[mask] ** 2)))

    residual = off(A)
    for _ in range(max_sweeps):
        if residual <= target:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
        residual = off(A)
    else:
        if residual > target:
            raise NumericalFailureError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {residual:.3e})",
                residual,
            )
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def spectrum_of(L, zero_tol=DEFAULT_ZERO_TOL, method="lapack") -> LaplacianSpectrum:
    """Eigendecompose a symmetric positive semidefinite matrix.

    ``method`` is ``"lapack"`` (:func:`numpy.linalg.eigh`) or ``"jacobi"``
    (:func:`jacobi_eigh`).
    """
    L = np.asarray(L, dtype=float)
    m = L.shape[0]
    if m == 0:
        return LaplacianSpectrum(L, np.zeros(0), np.zeros((0, 0)), zero_tol)
    if method == "lapack":
        try:
            w, Q = np.linalg.eigh(L)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailureError(f"symmetric eigensolver failed: {exc}") from exc
    elif method == "jacobi":
        w, Q = jacobi_eigh(L)
    else:
        raise InvalidArgumentError(f"unknown eigensolver {method!r}")
    w = w.copy()
    w[np.abs(w) < zero_tol * max(1.0, w[-1])] = 0.0
    # orient the null vector of a connected graph as +1/sqrt(m)
    if w[0] == 0.0 and np.sum(Q[:, 0]) < 0:
        Q = Q.copy()
        Q[:, 0] *= -1
    return LaplacianSpectrum(L, w, Q, zero_tol)


def laplacian(g: Graph, zero_tol=DEFAULT_ZERO_TOL, method="lapack") -> LaplacianSpectrum:
    """Combinatorial Laplacian ``L = D - W`` of ``g`` with its spectrum."""
    W = g.W
    L = np.diag(W.sum(axis=1)) - W
    return spectrum_of(L, zero_tol=zero_tol, method=method)


def identity_spectrum(m, zero_tol=DEFAULT_ZERO_TOL) -> LaplacianSpectrum:
    """Spectrum of ``I_m``, the graph-free stand-in used by the ridge estimator."""
    return LaplacianSpectrum(np.eye(m), np.ones(m), np.eye(m), zero_tol)


def fiedler_value(s: LaplacianSpectrum) -> float:
    """Second smallest eigenvalue (algebraic connectivity)."""
    if s.m < 2:
        raise InvalidArgumentError("the Fiedler value needs at least two vertices")
    return float(s.eigenvalues[1])


def laplacian_quadratic_form(s, F) -> float:
    """``tr(F^T L F)`` for a signal matrix ``F`` with one row per vertex."""
    L = s.L if isinstance(s, LaplacianSpectrum) else np.asarray(s, dtype=float)
    F = np.asarray(F, dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    if F.shape[0] != L.shape[0]:
        raise InvalidArgumentError(f"signal has {F.shape[0]} rows, graph has {L.shape[0]} vertices")
    return float(np.sum(F * (L @ F)))


def edge_quadratic_form(W, F) -> float:
    """Edge-sum smoothness ``1/2 sum_ij W_ij ||F_i - F_j||^2``."""
    W = W.W if isinstance(W, Graph) else np.asarray(W, dtype=float)
    F = np.asarray(F, dtype=float)
    if F.ndim == 1:
        F = F[:, None]
    if F.shape[0] != W.shape[0]:
        raise InvalidArgumentError(f"signal has {F.shape[0]} rows, graph has {W.shape[0]} vertices")
    sq = np.sum((F[:, None, :] - F[None, :, :]) ** 2, axis=-1)
    return 0.5 * float(np.sum(W * sq))


def is_connected(g: Graph) -> bool:
    """Breadth-first connectivity test over the edges ``W_ij > 0``."""
    m = g.m
    if m <= 1:
        return True
    adj = g.W > 0
    seen = np.zeros(m, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i] & ~seen):
            seen[j] = True
            queue.append(j)
    return bool(seen.all())


# Edge-list serialization =====================================================
def write_edge_list(g: Graph, path) -> None:
    """Write ``g`` as ``m``/``v``/``e`` records (17 significant digits)."""
    lines = [f"m {g.m}"]
    for i, (x, y) in enumerate(g.coords):
        lines.append(f"v {i} {x:.17g} {y:.17g}")
    iu, ju = np.nonzero(np.triu(g.W, 1))
    for i, j in zip(iu, ju):
        lines.append(f"e {i} {j} {g.W[i, j]:.17g}")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_edge_list(path) -> Graph:
    """Inverse of :func:`write_edge_list`."""
    m = None
    coords = W = None
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            parts = raw.split()
            if not parts:
                continue
            tag = parts[0]
            try:
                if tag == "m":
                    m = int(parts[1])
                    coords = np.zeros((m, 2))
                    W = np.zeros((m, m))
                elif tag == "v":
                    coords[int(parts[1])] = float(parts[2]), float(parts[3])
                elif tag == "e":
                    i, j, w = int(parts[1]), int(parts[2]), float(parts[3])
                    W[i, j] = W[j, i] = w
                else:
                    raise ValueError(f"unknown record {tag!r}")
            except (IndexError, ValueError, TypeError) as exc:
                raise InvalidArgumentError(f"{path}:{lineno}: malformed edge list ({exc})") from exc
    if m is None:
        raise InvalidArgumentError(f"{path}: missing 'm' header")
    return Graph(coords, W)

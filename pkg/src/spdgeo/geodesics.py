"""Distances and interpolation/extrapolation paths on the PSD cone.

Four square-root constructions plus the classical affine-invariant
geometry for comparison:

* Euclidean          d(A, B) = ||A - B||_F, straight-line path (leaves the
                     cone under extrapolation).
* Cholesky           distance between upper-triangular factors S with
                     D = S^T S; path squares the linear factor path.
* Euclidean root     distance between positive square roots Q_i = D_i^(1/2);
                     path  D_H(p) = |p Q_1 + (1-p) Q_2|^2.
* Procrustes         minimal distance over all square roots,
                     min_R ||Q_1 - R Q_2||_F over orthogonal R, attained in
                     closed form at R = U^T with U the orthogonal polar
                     factor of Q_2 Q_1; path D_S(p) = |p Q_1 + (1-p) U^T Q_2|^2.
* Riemannian         ||log(D_1^(-1/2) D_2 D_1^(-1/2))||_F with the standard
                     affine-invariant geodesic.  Provided for profile
                     comparison only; defined only for strictly positive
                     definite endpoints and blows up near the cone boundary.

Path convention: the displayed formulas put weight p on Q_1, so
``path_point(spec, 1)`` returns ``endpoint_a`` and ``path_point(spec, 0)``
returns ``endpoint_b``.  The modulus-square construction keeps the
root-based paths inside the cone for every real p, which is what makes
extrapolation meaningful for them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotPSD, SingularInput
from .linalg import (
    as_sym,
    eig_sym,
    determinant,
    frobenius_norm,
    is_psd,
    matrix_function,
    polar,
    sqrt_psd,
)

__all__ = [
    "MetricKind",
    "GeodesicSpec",
    "distance",
    "path_point",
    "unscaled_polar_factor",
    "swelling_profile",
    "cholesky_upper",
]

_SINGULAR_REL_TOL = 1e-12


class MetricKind(enum.Enum):
    EUCLIDEAN = "euclidean"
    CHOLESKY = "cholesky"
    EUCLIDEAN_ROOT = "euclidean-root"
    PROCRUSTES = "procrustes"
    RIEMANNIAN = "riemannian"


def cholesky_upper(a, tol: float = 1e-9) -> np.ndarray:
    """Upper-triangular S with non-negative diagonal and A = S^T S.

    Standard outer-product factorisation extended to the semidefinite
    case: a pivot within ``tol``-scaled noise of zero produces an all-zero
    row and elimination continues, which is the continuous extension of
    the positive-definite factor to the cone boundary.  Pivots negative
    beyond the tolerance raise :class:`NotPSD`.
    """
    a = as_sym(a)
    n = a.shape[0]
    low = np.zeros_like(a)
    thr = tol * max(1.0, float(np.abs(np.diag(a)).max()))
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if pivot > thr:
            low[j, j] = math.sqrt(pivot)
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
        elif pivot >= -thr:
            low[j:, j] = 0.0
        else:
            raise NotPSD(f"pivot {pivot:.6e} at position {j}: matrix is indefinite")
    return low.T.copy()


@dataclass
class GeodesicSpec:
    """A metric plus the two PSD endpoints of a path.

    ``endpoint_a`` is reached at p = 1 and ``endpoint_b`` at p = 0.
    Endpoint factorisations are cached on first use so repeated
    evaluations along the same path stay cheap.
    """

    metric: MetricKind
    endpoint_a: np.ndarray
    endpoint_b: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.endpoint_a = as_sym(self.endpoint_a)
        self.endpoint_b = as_sym(self.endpoint_b)
        if self.endpoint_a.shape != self.endpoint_b.shape:
            raise ValueError("endpoints must have equal dimension")
        if not is_psd(self.endpoint_a) or not is_psd(self.endpoint_b):
            raise NotPSD("geodesic endpoints must be positive semidefinite")

    @property
    def dim(self) -> int:
        return self.endpoint_a.shape[0]

    def roots(self) -> tuple[np.ndarray, np.ndarray]:
        if "roots" not in self._cache:
            self._cache["roots"] = (sqrt_psd(self.endpoint_a), sqrt_psd(self.endpoint_b))
        return self._cache["roots"]

    def aligned_root_b(self) -> np.ndarray:
        """U^T Q_2: the square root of endpoint_b closest to Q_1."""
        if "aligned" not in self._cache:
            q1, q2 = self.roots()
            u = polar(q2 @ q1).orthogonal
            self._cache["aligned"] = u.T @ q2
        return self._cache["aligned"]

    def chol_factors(self) -> tuple[np.ndarray, np.ndarray]:
        if "chol" not in self._cache:
            self._cache["chol"] = (
                cholesky_upper(self.endpoint_a),
                cholesky_upper(self.endpoint_b),
            )
        return self._cache["chol"]

    def whitened(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(A^(1/2), A^(-1/2), A^(-1/2) B A^(-1/2)) for the Riemannian path."""
        if "whitened" not in self._cache:
            _require_definite(self.endpoint_a, "endpoint_a")
            _require_definite(self.endpoint_b, "endpoint_b")
            dec = eig_sym(self.endpoint_a)
            w, v = dec.eigenvalues, dec.eigenvectors
            a_half = (v * np.sqrt(w)) @ v.T
            a_ihalf = (v / np.sqrt(w)) @ v.T
            mid = as_sym(a_ihalf @ self.endpoint_b @ a_ihalf)
            self._cache["whitened"] = (a_half, a_ihalf, mid)
        return self._cache["whitened"]


def _require_definite(d: np.ndarray, label: str) -> None:
    w = eig_sym(d).eigenvalues
    if w[-1] <= _SINGULAR_REL_TOL * max(1.0, w[0]):
        raise SingularInput(
            f"{label} is numerically singular (min eigenvalue {w[-1]:.3e}); "
            "the Riemannian metric is undefined at the cone boundary"
        )


def unscaled_polar_factor(d1, d2) -> np.ndarray:
    """Orthogonal factor U of Q_2 Q_1, with Q_i the positive roots of D_i.

    Scaling Q_1 and Q_2 by positive numbers (the interpolation weights for
    p inside (0, 1)) leaves this factor unchanged, so one U serves the
    whole path.
    """
    q1 = sqrt_psd(d1)
    q2 = sqrt_psd(d2)
    return polar(q2 @ q1).orthogonal


def distance(kind: MetricKind, d1, d2) -> float:
    """Distance between two PSD matrices under the chosen metric."""
    d1 = as_sym(d1)
    d2 = as_sym(d2)
    if d1.shape != d2.shape:
        raise ValueError("matrices must have equal dimension")
    if not is_psd(d1) or not is_psd(d2):
        raise NotPSD("distance arguments must be positive semidefinite")
    if kind is MetricKind.EUCLIDEAN:
        return frobenius_norm(d1 - d2)
    if kind is MetricKind.CHOLESKY:
        return frobenius_norm(cholesky_upper(d1) - cholesky_upper(d2))
    if kind is MetricKind.EUCLIDEAN_ROOT:
        return frobenius_norm(sqrt_psd(d1) - sqrt_psd(d2))
    if kind is MetricKind.PROCRUSTES:
        q1 = sqrt_psd(d1)
        q2 = sqrt_psd(d2)
        u = polar(q2 @ q1).orthogonal
        return frobenius_norm(q1 - u.T @ q2)
    if kind is MetricKind.RIEMANNIAN:
        _require_definite(d1, "first argument")
        _require_definite(d2, "second argument")
        a_ihalf = matrix_function(d1, lambda w: 1.0 / np.sqrt(w), _spectral_floor(d1))
        mid = a_ihalf @ d2 @ a_ihalf
        w = eig_sym(mid).eigenvalues
        return float(np.sqrt(np.sum(np.log(w) ** 2)))
    raise ValueError(f"unknown metric kind: {kind!r}")


def _spectral_floor(d: np.ndarray) -> float:
    w_max = eig_sym(d).eigenvalues[0]
    return _SINGULAR_REL_TOL * max(1.0, w_max)


def path_point(spec: GeodesicSpec, p: float) -> np.ndarray:
    """Evaluate the path D(p); interpolation for p in [0, 1], extrapolation
    outside.

    Root-based paths (Euclidean root, Procrustes, Cholesky) return a PSD
    matrix for every real p by construction.  The Euclidean path can leave
    the cone under extrapolation, which raises :class:`NotPSD` rather than
    clamping.  The Riemannian path requires strictly definite endpoints.
    """
    p = float(p)
    kind = spec.metric
    if kind is MetricKind.EUCLIDEAN:
        value = p * spec.endpoint_a + (1.0 - p) * spec.endpoint_b
        if not (0.0 <= p <= 1.0) and not is_psd(value):
            raise NotPSD(f"Euclidean path leaves the PSD cone at p = {p:g}")
        return value
    if kind is MetricKind.CHOLESKY:
        s1, s2 = spec.chol_factors()
        s = p * s1 + (1.0 - p) * s2
        return as_sym(s.T @ s)
    if kind is MetricKind.EUCLIDEAN_ROOT:
        q1, q2 = spec.roots()
        m = p * q1 + (1.0 - p) * q2
        # m is symmetric, so |m|^2 = m^2
        return as_sym(m @ m)
    if kind is MetricKind.PROCRUSTES:
        q1, _ = spec.roots()
        m = p * q1 + (1.0 - p) * spec.aligned_root_b()
        return as_sym(m.T @ m)
    if kind is MetricKind.RIEMANNIAN:
        a_half, _, mid = spec.whitened()
        power = matrix_function(mid, lambda w: w ** (1.0 - p), _spectral_floor(mid))
        return as_sym(a_half @ power @ a_half)
    raise ValueError(f"unknown metric kind: {kind!r}")


def swelling_profile(spec: GeodesicSpec, steps: int) -> list[tuple[float, float]]:
    """Determinant-root profile of a path on a uniform p grid in [0, 1].

    Returns (p, det(D(p))^(1/dim)) at p = k/(steps-1); for 3x3 fields this
    is the cube root of the determinant, the usual swelling measure.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    root = 1.0 / spec.dim
    out = []
    for k in range(steps):
        p = k / (steps - 1)
        det = max(determinant(path_point(spec, p)), 0.0)
        out.append((p, det**root))
    return out

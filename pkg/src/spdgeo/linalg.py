"""Dense real linear algebra on small square matrices.

Everything downstream (means, geodesics, verification campaigns) is built
on the handful of primitives here: symmetric eigendecomposition, matrix
functions of symmetric matrices, polar decomposition, determinants and the
Frobenius norm.  Matrices are plain ``numpy`` arrays; the helpers
:func:`as_square` and :func:`as_sym` normalise and validate inputs at the
public boundaries.

The heavy lifting is delegated to LAPACK through ``numpy.linalg`` (``eigh``
for symmetric spectra, ``svd`` for the polar factor, LU-based ``det``),
which is deterministic for a fixed input and orders of magnitude faster
than a hand-rolled sweep solver at the matrix sizes used here (dim <= 8).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainViolation, NonConvergence, NotPSD

__all__ = [
    "EigenDecomposition",
    "PolarDecomposition",
    "as_square",
    "as_sym",
    "psd_tolerance",
    "eig_sym",
    "matrix_function",
    "sqrt_psd",
    "polar",
    "determinant",
    "frobenius_norm",
    "is_psd",
]


def as_square(x) -> np.ndarray:
    """Validate and return ``x`` as a finite square float matrix."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def as_sym(x) -> np.ndarray:
    """Validate ``x`` as square and return its symmetrised copy.

    Symmetrisation (``(X + X^T)/2``) makes downstream eigensolves
    well-posed when callers hand in matrices that are symmetric only up to
    rounding.
    """
    a = as_square(x)
    return 0.5 * (a + a.T)


def psd_tolerance(lam_max: float) -> float:
    """Slack allowed on eigenvalues of nominally PSD matrices.

    Rounding makes exact-zero eigenvalues come out slightly negative; the
    tolerance scales with the spectral magnitude but never collapses below
    an absolute floor.
    """
    return 1e-10 * max(1.0, abs(lam_max))


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral factorisation A = V diag(w) V^T of a symmetric matrix.

    ``eigenvalues`` are sorted non-ascending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


@dataclass(frozen=True)
class PolarDecomposition:
    """Factorisation X = U |X| with U orthogonal and |X| = (X^T X)^(1/2) PSD."""

    orthogonal: np.ndarray
    modulus: np.ndarray


def eig_sym(a) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix, eigenvalues non-ascending.

    Raises :class:`NonConvergence` if the LAPACK solver fails.  Within a
    degenerate eigenvalue cluster the eigenvector columns are an arbitrary
    orthonormal basis; every downstream quantity (means, distances,
    determinants) is basis-independent.
    """
    m = as_sym(a)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"symmetric eigensolver failed: {exc}") from exc
    # eigh returns ascending order
    return EigenDecomposition(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def matrix_function(
    a,
    f: Callable[[np.ndarray], np.ndarray],
    domain_floor: float | None = None,
) -> np.ndarray:
    """Apply a scalar function to a symmetric matrix through its spectrum.

    Returns ``V diag(f(w)) V^T``.  When ``domain_floor`` is given, the
    matrix must be PSD up to :func:`psd_tolerance`: eigenvalues inside
    ``[-tol, domain_floor)`` are clamped up to ``domain_floor`` and
    anything below ``-tol`` raises :class:`DomainViolation`.  With
    ``domain_floor=None`` the spectrum is passed through unchanged.

    ``f`` must accept a 1-D ndarray (any numpy ufunc qualifies).
    """
    dec = eig_sym(a)
    w = dec.eigenvalues
    if domain_floor is not None:
        tol = psd_tolerance(w[0] if w.size else 0.0)
        if np.any(w < -tol):
            raise DomainViolation(
                f"eigenvalue {w.min():.6e} below -{tol:.3e}; input is not PSD"
            )
        w = np.maximum(w, domain_floor)
    fw = np.asarray(f(w), dtype=float)
    v = dec.eigenvectors
    out = (v * fw) @ v.T
    return 0.5 * (out + out.T)


def sqrt_psd(a) -> np.ndarray:
    """Positive square root of a PSD matrix (unique PSD Q with Q^2 = A)."""
    return matrix_function(a, np.sqrt, 0.0)


def polar(x) -> PolarDecomposition:
    """Polar decomposition X = U |X| via the SVD.

    With X = W S V^T this returns U = W V^T and |X| = V S V^T, so
    U^T X = |X| holds by construction for any input.  For invertible X the
    orthogonal factor is unique.  For numerically singular X the SVD
    supplies a deterministic completion, adjusted to a proper rotation
    (det U = +1) by flipping a null left-singular vector if needed: a
    limit through products of positive definite factors always has
    det U = +1, so this is the completion that extends continuously from
    the invertible case.  (An unadjusted completion with det U = -1 can
    flip the sign of determinants built from U.)
    """
    m = as_square(x)
    try:
        w, s, vt = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"SVD failed: {exc}") from exc
    u = w @ vt
    if s[-1] <= 1e-12 * max(1.0, s[0]) and np.linalg.det(u) < 0.0:
        w[:, -1] = -w[:, -1]
        u = w @ vt
    modulus = (vt.T * s) @ vt
    return PolarDecomposition(orthogonal=u, modulus=0.5 * (modulus + modulus.T))


def determinant(x) -> float:
    """Determinant via LU with partial pivoting; singular inputs give 0."""
    return float(np.linalg.det(as_square(x)))


def frobenius_norm(x) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(as_square(x), "fro"))


def is_psd(a, tol: float = 1e-10) -> bool:
    """True iff the smallest eigenvalue is >= -tol * max(1, largest)."""
    w = eig_sym(a).eigenvalues
    return bool(w[-1] >= -tol * max(1.0, w[0]))

"""Matrix geometric mean and its characterising properties.

The mean of PSD matrices A and B is

    A # B = A^(1/2) (A^(-1/2) B A^(-1/2))^(1/2) A^(1/2),

extended to rank-deficient inputs by evaluating (A + eI) # (B + eI) down a
decreasing ladder of regularisation strengths.  Alongside the mean itself,
this module exposes the "naive" product-of-roots mean sqrt(A) sqrt(B), the
block-matrix maximality predicate and the power-contraction predicate
(A#B <= I implies A^r # B^r <= I for r >= 1), which the verification
campaigns exercise on random ensembles.

Key algebraic facts used here and in the verifier:

* symmetry:          A # B = B # A
* scaling:           (aA) # (bB) = sqrt(ab) (A # B)
* determinants:      det(A # B) = sqrt(det A det B)
* commuting case:    A # B = V diag(sqrt(a_i b_i)) V^T
* spectrum of the naive mean: lambda(sqrt(A) sqrt(B)) equals the spectrum
  of the symmetric matrix B^(1/4) A^(1/2) B^(1/4) for *all* PSD A, B,
  because lambda(XY) = lambda(YX) for any square X, Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisViolated, NotPSD
from .linalg import (
    EigenDecomposition,
    as_sym,
    eig_sym,
    is_psd,
    matrix_function,
    sqrt_psd,
)

__all__ = [
    "GeoMeanConfig",
    "geometric_mean",
    "geometric_mean_limit",
    "naive_geometric_mean",
    "naive_mean_eigenvalues",
    "check_block_maximality",
    "check_hiai_power",
]


@dataclass(frozen=True)
class GeoMeanConfig:
    """Controls the rank-deficient limiting procedure.

    ``regularisation_eps`` is the relative spectral-gap threshold below
    which an input counts as rank-deficient; ``eps_ladder`` holds the
    relative regularisation strengths walked down when it is.
    """

    regularisation_eps: float = 1e-10
    eps_ladder: tuple[float, ...] = (1e-6, 1e-8, 1e-10)

    def __post_init__(self):
        if self.regularisation_eps <= 0.0:
            raise ValueError("regularisation_eps must be positive")
        ladder = tuple(self.eps_ladder)
        if not ladder or any(e <= 0.0 for e in ladder):
            raise ValueError("eps_ladder entries must be positive")
        if any(a <= b for a, b in zip(ladder, ladder[1:])):
            raise ValueError("eps_ladder must be strictly decreasing")
        object.__setattr__(self, "eps_ladder", ladder)


_DEFAULT_CFG = GeoMeanConfig()


def _check_psd_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if not is_psd(a):
        raise NotPSD("first argument is not positive semidefinite")
    if not is_psd(b):
        raise NotPSD("second argument is not positive semidefinite")


def _mean_direct(dec_a: EigenDecomposition, b: np.ndarray) -> np.ndarray:
    """A # B with A given by its (strictly positive) eigendecomposition."""
    w, v = dec_a.eigenvalues, dec_a.eigenvectors
    rw = np.sqrt(w)
    a_half = (v * rw) @ v.T
    a_ihalf = (v / rw) @ v.T
    inner = a_ihalf @ b @ a_ihalf
    inner_root = sqrt_psd(inner)
    out = a_half @ inner_root @ a_half
    return 0.5 * (out + out.T)


def _clamp_psd(a: np.ndarray) -> np.ndarray:
    """Project tiny negative eigenvalues (rounding noise) up to zero."""
    return matrix_function(a, lambda w: w, 0.0)


def geometric_mean_limit(a, b, cfg: GeoMeanConfig = _DEFAULT_CFG) -> tuple[np.ndarray, float]:
    """Regularised mean via the eps ladder.

    Evaluates (A + eI) # (B + eI) at each relative strength in
    ``cfg.eps_ladder`` (scaled by ``1 + max spectral radius``) and returns
    the last rung together with the Frobenius gap between the last two
    rungs, which serves as the accuracy estimate of the limit.
    """
    a = as_sym(a)
    b = as_sym(b)
    _check_psd_pair(a, b)
    a = _clamp_psd(a)
    b = _clamp_psd(b)
    scale = 1.0 + max(eig_sym(a).eigenvalues[0], eig_sym(b).eigenvalues[0])
    eye = np.eye(a.shape[0])
    prev = None
    gap = np.inf
    for rel_eps in cfg.eps_ladder:
        eps = rel_eps * scale
        a_reg = a + eps * eye
        value = _mean_direct(eig_sym(a_reg), b + eps * eye)
        if prev is not None:
            gap = float(np.linalg.norm(value - prev, "fro"))
        prev = value
    return prev, gap


def geometric_mean(a, b, cfg: GeoMeanConfig = _DEFAULT_CFG) -> np.ndarray:
    """Geometric mean A # B of two PSD matrices.

    The factor with the larger smallest eigenvalue is the one inverted
    (using symmetry of the mean), for conditioning.  If even that factor
    is rank-deficient relative to ``cfg.regularisation_eps``, the limiting
    procedure of :func:`geometric_mean_limit` is used.
    """
    a = as_sym(a)
    b = as_sym(b)
    _check_psd_pair(a, b)
    dec_a = eig_sym(a)
    dec_b = eig_sym(b)
    if dec_a.eigenvalues[-1] < dec_b.eigenvalues[-1]:
        a, b = b, a
        dec_a = dec_b
    w = dec_a.eigenvalues
    if w[-1] > cfg.regularisation_eps * w[0]:
        return _mean_direct(dec_a, b)
    value, _ = geometric_mean_limit(a, b, cfg)
    return value


def naive_geometric_mean(a, b) -> np.ndarray:
    """Product of the positive square roots, sqrt(A) sqrt(B).

    Generally non-symmetric, but always has real non-negative eigenvalues:
    it shares its spectrum with the PSD matrix B^(1/4) A^(1/2) B^(1/4).
    """
    a = as_sym(a)
    b = as_sym(b)
    _check_psd_pair(a, b)
    return sqrt_psd(a) @ sqrt_psd(b)


def naive_mean_eigenvalues(a, b) -> np.ndarray:
    """Eigenvalues of sqrt(A) sqrt(B), sorted non-ascending.

    Computed as the spectrum of the symmetric matrix
    B^(1/4) A^(1/2) B^(1/4), which is exact for all PSD inputs (including
    singular ones) by cyclic invariance of eigenvalues under the swap
    lambda(XY) = lambda(YX); no symmetrised eigensolve of a non-symmetric
    product is ever needed.  Tiny negative values from rounding are
    clamped to zero.
    """
    a = as_sym(a)
    b = as_sym(b)
    _check_psd_pair(a, b)
    b_quarter = matrix_function(b, lambda w: w**0.25, 0.0)
    sym = b_quarter @ sqrt_psd(a) @ b_quarter
    return np.maximum(eig_sym(sym).eigenvalues, 0.0)


def check_block_maximality(a, b, x, tol: float) -> bool:
    """True iff the 2n x 2n block matrix [[A, X], [X, B]] is PSD within tol.

    The set of PSD X for which this holds has A # B as its maximum in the
    PSD order, so X = A # B sits exactly on the boundary.
    """
    a = as_sym(a)
    b = as_sym(b)
    x = as_sym(x)
    block = np.block([[a, x], [x, b]])
    return is_psd(block, tol)


def check_hiai_power(a, b, r: float, tol: float) -> bool:
    """Power contraction: if A # B <= I then A^r # B^r <= I, for r >= 1.

    Raises :class:`HypothesisViolated` when the premise fails; callers
    normalise with the scaling identity (divide both inputs by the top
    eigenvalue of A # B) to put themselves in the hypothesis.
    """
    if r < 1.0:
        raise ValueError(f"power must be >= 1, got {r}")
    a = as_sym(a)
    b = as_sym(b)
    mean = geometric_mean(a, b)
    top = eig_sym(mean).eigenvalues[0]
    if top > 1.0 + tol:
        raise HypothesisViolated(
            f"largest eigenvalue of the mean is {top:.12g} > 1 + {tol:g}"
        )
    a_pow = matrix_function(a, lambda w: w**r, 0.0)
    b_pow = matrix_function(b, lambda w: w**r, 0.0)
    top_pow = eig_sym(geometric_mean(a_pow, b_pow)).eigenvalues[0]
    return bool(top_pow <= 1.0 + tol)

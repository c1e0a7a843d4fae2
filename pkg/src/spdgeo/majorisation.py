"""Vector domination orders, the softplus test function, and compound
matrices.

Write x^ for x sorted non-ascending.  Then

* x weakly majorises y      iff every top-k partial sum of y^ is dominated
                            by the one of x^;
* x majorises y             additionally requires equal totals;
* x weakly log-majorises y  iff every top-k partial *product* is dominated
                            (entries must be non-negative);
* x log-majorises y         additionally requires equal total products.

The separable softplus sum Phi(x) = sum_i log(1 + exp(x_i)) is isotone: it
carries majorisation into plain inequality of values, which is exactly the
step that turns an eigenvalue log-majorisation into a determinant bound.
Its isotony is certified by permutation symmetry together with the pairwise
gradient condition (x_i - x_j)(dPhi/dx_i - dPhi/dx_j) >= 0.

Compound matrices: for |subsets| = k the matrix of all k x k minors in
lexicographic subset order.  Its top eigenvalue for PSD input is the
product of the top k eigenvalues, and it distributes over products and
fractional powers, hence over the geometric mean as well.  Minors are
evaluated by direct Laplace expansion, independent of the LU determinant
elsewhere in the package, so the top compound doubles as a determinant
cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrder, LengthMismatch, NegativeEntry
from .linalg import as_square

__all__ = [
    "MajorisationVerdict",
    "sort_desc",
    "weakly_majorises",
    "majorises",
    "log_majorises",
    "phi_isotone",
    "phi_isotone_gradient",
    "compound_matrix",
    "random_majorisation_pair",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class MajorisationVerdict:
    """Outcome of a domination check.

    ``worst_margin`` is the smallest normalised partial-sum (or product)
    slack over all prefix lengths; the relation holds iff it is at least
    ``-tol``.  ``violating_k`` names the prefix length achieving a
    violating margin, if any.
    """

    relation_holds: bool
    worst_margin: float
    violating_k: int | None = None


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float).ravel()
    if v.size < 1:
        raise ValueError("vectors must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    xv = _as_vector(x)
    yv = _as_vector(y)
    if xv.size != yv.size:
        raise LengthMismatch(f"lengths differ: {xv.size} vs {yv.size}")
    return xv, yv


def sort_desc(x) -> np.ndarray:
    """Entries of x sorted non-ascending."""
    return np.sort(_as_vector(x))[::-1].copy()


def _verdict(slacks: np.ndarray, tol: float) -> MajorisationVerdict:
    worst = int(np.argmin(slacks))
    margin = float(slacks[worst])
    holds = margin >= -tol
    return MajorisationVerdict(holds, margin, None if holds else worst + 1)


def weakly_majorises(x, y, tol: float = DEFAULT_TOL) -> MajorisationVerdict:
    """Does x weakly majorise y (top-k sums of x dominate those of y)?"""
    xv, yv = _check_pair(x, y)
    cx = np.cumsum(sort_desc(xv))
    cy = np.cumsum(sort_desc(yv))
    slacks = (cx - cy) / (1.0 + np.abs(cx))
    return _verdict(slacks, tol)


def majorises(x, y, tol: float = DEFAULT_TOL) -> MajorisationVerdict:
    """Does x majorise y (weak domination plus equal totals)?"""
    xv, yv = _check_pair(x, y)
    cx = np.cumsum(sort_desc(xv))
    cy = np.cumsum(sort_desc(yv))
    scale = 1.0 + np.abs(cx)
    slacks = (cx - cy) / scale
    # equal totals <=> the final slack holds in both directions
    reversed_total = (cy[-1] - cx[-1]) / scale[-1]
    return _verdict(np.append(slacks, reversed_total), tol)


def log_majorises(x, y, tol: float = DEFAULT_TOL, weak: bool = False) -> MajorisationVerdict:
    """Does x (weakly, if ``weak``) log-majorise y?

    Entries must be non-negative.  With strictly positive entries the
    comparison runs on logarithms; if any entry is zero the partial
    products are compared directly, with the tolerance applied relative to
    the running product scale (eigenvalue vectors of rank-deficient
    matrices legitimately contain zeros).
    """
    xv, yv = _check_pair(x, y)
    if np.any(xv < 0.0) or np.any(yv < 0.0):
        raise NegativeEntry("log-domination requires non-negative entries")
    xs = sort_desc(xv)
    ys = sort_desc(yv)
    if xs[-1] > 0.0 and ys[-1] > 0.0:
        cx = np.cumsum(np.log(xs))
        cy = np.cumsum(np.log(ys))
        scale = 1.0 + np.abs(cx)
        slacks = (cx - cy) / scale
        if not weak:
            slacks = np.append(slacks, (cy[-1] - cx[-1]) / scale[-1])
        return _verdict(slacks, tol)
    px = np.cumprod(xs)
    py = np.cumprod(ys)
    scale = np.maximum(np.maximum(px, py), 0.0)
    scale[scale == 0.0] = 1.0
    slacks = (px - py) / scale
    if not weak:
        slacks = np.append(slacks, (py[-1] - px[-1]) / scale[-1])
    return _verdict(slacks, tol)


def phi_isotone(x) -> float:
    """Softplus sum: sum_i log(1 + exp(x_i)), overflow-safe.

    ``logaddexp(0, t)`` evaluates log(1 + exp(t)) as t + log1p(exp(-t))
    for large t, so huge entries contribute their own value instead of
    overflowing.
    """
    return float(np.logaddexp(0.0, _as_vector(x)).sum())


def phi_isotone_gradient(x) -> np.ndarray:
    """Gradient of :func:`phi_isotone`: the logistic function per entry."""
    v = _as_vector(x)
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ev = np.exp(v[~pos])
    out[~pos] = ev / (1.0 + ev)
    return out


def _laplace_det(m: np.ndarray) -> float:
    """Determinant via first-row Laplace expansion (independent of LU)."""
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    if n == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    total = 0.0
    sign = 1.0
    cols = np.arange(n)
    for j in range(n):
        sub = m[1:, cols != j]
        total += sign * m[0, j] * _laplace_det(sub)
        sign = -sign
    return total


def compound_matrix(a, k: int) -> np.ndarray:
    """k-th compound: the C(n,k) x C(n,k) matrix of k x k minors.

    Rows and columns are indexed by lexicographically ordered k-subsets.
    The first compound is the matrix itself and the n-th is the 1x1 matrix
    holding the determinant.
    """
    m = as_square(a)
    n = m.shape[0]
    if not 1 <= k <= n:
        raise InvalidOrder(f"compound order must be in 1..{n}, got {k}")
    subsets = list(itertools.combinations(range(n), k))
    size = len(subsets)
    out = np.empty((size, size))
    for i, rows in enumerate(subsets):
        block = m[list(rows), :]
        for j, cols in enumerate(subsets):
            out[i, j] = _laplace_det(block[:, list(cols)])
    return out


def random_majorisation_pair(x, rng: np.random.Generator, pinches: int | None = None) -> np.ndarray:
    """Return y majorised by x, built from random pinches.

    Each pinch averages two coordinates with a random mixing weight (a
    T-transform), which provably moves the vector down the majorisation
    order; composing several keeps y majorised by x, giving ground-truth
    pairs without an external oracle.
    """
    y = _as_vector(x).copy()
    n = y.size
    if n == 1:
        return y
    count = 2 * n if pinches is None else pinches
    for _ in range(count):
        i, j = rng.choice(n, size=2, replace=False)
        lam = rng.uniform(0.0, 1.0)
        yi, yj = y[i], y[j]
        y[i] = lam * yi + (1.0 - lam) * yj
        y[j] = (1.0 - lam) * yi + lam * yj
    return y

"""Dense symmetric-matrix primitives: Cholesky/log-det, inversion, submatrices.

All functions take and return plain ``numpy`` arrays.  Matrices are assumed
symmetric; ``sym`` can be used to enforce exact symmetry after operations
that may break it in the last bits.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import DimensionTooSmallError, NotPositiveDefiniteError

# Relative pivot tolerance for declaring a Cholesky pivot positive.
PIVOT_RTOL = 1e-12


class Definiteness(Enum):
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class DefinitenessReport:
    status: Definiteness
    smallest_eigenvalue_estimate: float


def sym(a):
    """Return the exactly symmetric part (a + a.T) / 2."""
    a = np.asarray(a, dtype=float)
    return (a + a.T) / 2.0


def check_square_symmetric(a, atol=1e-9):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=atol, rtol=0.0):
        raise ValueError("matrix is not symmetric")
    return sym(a)


def _pivot_tolerance(a):
    diag_max = float(np.max(np.abs(np.diag(a)))) if a.shape[0] else 0.0
    return PIVOT_RTOL * max(diag_max, 1.0e-300)


def cholesky_logdet(a):
    """Lower Cholesky factor and log-determinant of a PD matrix.

    Raises NotPositiveDefiniteError (with the failing pivot index) when the
    matrix is not positive definite at the relative pivot tolerance.
    """
    a = np.asarray(a, dtype=float)
    tol = _pivot_tolerance(a)
    try:
        factor = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError(pivot_index=_first_bad_pivot(a, tol)) from None
    piv = np.diag(factor)
    bad = np.nonzero(piv * piv <= tol)[0]
    if bad.size:
        raise NotPositiveDefiniteError(pivot_index=int(bad[0]))
    logdet = 2.0 * float(np.sum(np.log(piv)))
    return factor, logdet


def _first_bad_pivot(a, tol):
    # Unblocked Cholesky just to locate the first nonpositive pivot.
    a = a.copy()
    d = a.shape[0]
    for j in range(d):
        pivot = a[j, j] - np.dot(a[j, :j], a[j, :j])
        if pivot <= tol:
            return j
        a[j, j] = np.sqrt(pivot)
        if j + 1 < d:
            a[j + 1:, j] = (a[j + 1:, j] - a[j + 1:, :j] @ a[j, :j]) / a[j, j]
    return None


def logdet_pd(a):
    return cholesky_logdet(a)[1]


def is_positive_definite(a):
    try:
        cholesky_logdet(a)
        return True
    except NotPositiveDefiniteError:
        return False


def definiteness(a, semidefinite_tol=1e-10):
    """Classify a symmetric matrix by its smallest eigenvalue."""
    a = np.asarray(a, dtype=float)
    eigmin = float(np.min(scipy.linalg.eigvalsh(a)))
    if is_positive_definite(a):
        status = Definiteness.POSITIVE_DEFINITE
    elif eigmin >= -semidefinite_tol * max(1.0, float(np.max(np.abs(a)))):
        status = Definiteness.POSITIVE_SEMIDEFINITE
    else:
        status = Definiteness.INDEFINITE
    return DefinitenessReport(status, eigmin)


def invert_pd(a):
    """Inverse of a positive definite matrix via Cholesky; exactly symmetric."""
    factor, _ = cholesky_logdet(a)
    inv = scipy.linalg.cho_solve((factor, True), np.eye(a.shape[0]))
    return sym(inv)


def solve_pd(a, b):
    """Solve a @ x = b for positive definite a."""
    factor, _ = cholesky_logdet(a)
    return scipy.linalg.cho_solve((factor, True), b)


def principal_submatrix_drop(a, j):
    """Remove row and column ``j`` (0-based), preserving the other indices."""
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    if d < 2:
        raise DimensionTooSmallError("cannot drop a row/column from a 1x1 matrix")
    if not 0 <= j < d:
        raise IndexError(f"index {j} out of range for dimension {d}")
    keep = np.r_[0:j, j + 1:d]
    return a[np.ix_(keep, keep)]


def is_m_matrix(k, tol=0.0):
    """True iff k is positive definite with all off-diagonal entries <= tol."""
    k = np.asarray(k, dtype=float)
    off = k - np.diag(np.diag(k))
    if np.any(off > tol):
        return False
    return is_positive_definite(k)

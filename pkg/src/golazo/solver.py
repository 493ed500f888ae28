"""Block-coordinate descent on the dual of the (L, U)-penalized likelihood.

The primal problem is

    minimize  -log det K + tr(S K) + |K|_LU      over K positive definite

whose dual is

    maximize  log det Sigma + d     subject to  S + L <= Sigma <= S + U.

The solver keeps a dually feasible Sigma, sweeps its rows cyclically, and
for each row solves a box-constrained QP in the off-diagonal entries.  The
duality gap tr(S K) - d + |K|_LU (with K = Sigma^{-1}) certifies optimality.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .boxqp import BoxQP, solve_boxqp
from .errors import (
    DegenerateCorrelationError,
    BoundsNotStrictError,
    InfeasibleBoundsError,
    MaxSweepsExceededError,
    NoFeasibleStartError,
    NotUnitDiagonalError,
)
from .penalty import PenaltyBounds, clip_to_finite, golazo_norm

# An entry of K counts as a nonzero edge when its magnitude exceeds this.
EDGE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    dual_gap_tol: float = 1e-8
    max_sweeps: int = 1000
    verbose: bool = False

    def __post_init__(self):
        if self.dual_gap_tol <= 0:
            raise ValueError("dual_gap_tol must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")


@dataclass(frozen=True)
class FitResult:
    khat: np.ndarray
    sigma_hat: np.ndarray
    dual_gap: float
    sweeps: int
    gap_trace: list
    sign_pattern: np.ndarray
    clipped_bounds: PenaltyBounds
    isolated_rows: tuple = ()
    forced_zero_pairs: tuple = ()

    @property
    def edge_count(self):
        return int(np.count_nonzero(np.triu(self.sign_pattern, 1)))

    def edges(self):
        d = self.khat.shape[0]
        return [(i, j) for i in range(d) for j in range(i + 1, d)
                if self.sign_pattern[i, j] != 0]


def duality_gap(s, k, bounds):
    """tr(S K) - d + |K|_LU; bounds should already be clipped to finite."""
    s = np.asarray(s, dtype=float)
    k = np.asarray(k, dtype=float)
    return float(np.sum(s * k)) - s.shape[0] + golazo_norm(k, bounds)


def kkt_residuals(s, result, edge_threshold=EDGE_THRESHOLD):
    """Per-pair violation of the optimality certificate.

    At the optimum, Sigma_ij - S_ij lies at L_ij when K_ij < 0, at U_ij when
    K_ij > 0, and anywhere in [L_ij, U_ij] when K_ij = 0.  Entries of K are
    branched by sign at ``edge_threshold``.  Uses the clipped bounds stored
    on the result.  Returns a symmetric matrix of residuals, zero diagonal.
    """
    s = np.asarray(s, dtype=float)
    k = result.khat
    diff = result.sigma_hat - s
    lo = result.clipped_bounds.lower
    hi = result.clipped_bounds.upper
    res = np.where(k < -edge_threshold, np.abs(diff - lo),
                   np.where(k > edge_threshold, np.abs(diff - hi),
                            np.maximum(lo - diff, 0.0) + np.maximum(diff - hi, 0.0)))
    np.fill_diagonal(res, 0.0)
    return res


def single_linkage_matrix(r):
    """Max-min path closure of the positive part of a unit-diagonal matrix.

    Z_ij is the best bottleneck over all paths that only use strictly
    positive entries of r; zero when no such path connects i and j.
    Computed by a Floyd-Warshall-style closure, which is exact (entries of
    the result are entries of r, only comparisons are performed).
    """
    r = np.asarray(r, dtype=float)
    if np.any(np.diag(r) != 1.0):
        raise NotUnitDiagonalError("input must have unit diagonal")
    z = np.where(r > 0.0, r, 0.0)
    np.fill_diagonal(z, 1.0)
    d = r.shape[0]
    for k in range(d):
        via_k = np.minimum.outer(z[:, k], z[k, :])
        z = np.maximum(z, via_k)
    np.fill_diagonal(z, 1.0)
    return z


def single_linkage_matrix_cov(s):
    """Single-linkage matrix on covariance scale: closure of the correlation
    matrix rescaled back by sqrt(S_ii S_jj)."""
    s = np.asarray(s, dtype=float)
    scale = np.sqrt(np.diag(s))
    r = s / np.outer(scale, scale)
    np.fill_diagonal(r, 1.0)
    return single_linkage_matrix(r) * np.outer(scale, scale)


def starting_point_interior(s, bounds):
    """Diagonal blend (1-t) S + t diag(S), feasible when L < 0 < U strictly."""
    s = np.asarray(s, dtype=float)
    if linalg.is_positive_definite(s):
        return s.copy()
    d = s.shape[0]
    off = ~np.eye(d, dtype=bool)
    if np.any(bounds.lower[off] == 0.0) or np.any(bounds.upper[off] == 0.0):
        raise BoundsNotStrictError("diagonal-blend start needs L < 0 < U off-diagonal")
    t = 1.0
    for i in range(d):
        for j in range(d):
            if i == j or s[i, j] == 0.0:
                continue
            if s[i, j] > 0:
                t = min(t, -bounds.lower[i, j] / s[i, j])
            else:
                t = min(t, bounds.upper[i, j] / (-s[i, j]))
    sigma0 = (1.0 - t) * s + t * np.diag(np.diag(s))
    if not linalg.is_positive_definite(sigma0):
        raise NoFeasibleStartError("diagonal-blend starting point is not positive definite")
    return sigma0


def starting_point_single_linkage(s, bounds):
    """Blend of S with its single-linkage matrix; feasible for L = 0 bounds."""
    s = np.asarray(s, dtype=float)
    d = s.shape[0]
    diag = np.diag(s)
    root = np.sqrt(np.outer(diag, diag))
    for i in range(d):
        for j in range(i + 1, d):
            if s[i, j] >= root[i, j]:
                raise DegenerateCorrelationError(i, j)
            if bounds.upper[i, j] == 0.0:
                raise InfeasibleBoundsError(
                    f"single-linkage start needs U > 0 off-diagonal; U[{i},{j}] = 0"
                )
    if linalg.is_positive_definite(s):
        return s.copy()
    z = single_linkage_matrix_cov(s)
    delta = float(np.max(np.abs(z - s)))
    if delta == 0.0:
        return z
    off = ~np.eye(d, dtype=bool)
    rho = float(np.min(bounds.upper[off]))
    t = min(1.0, rho / delta)
    sigma0 = (1.0 - t) * s + t * z
    if not linalg.is_positive_definite(sigma0):
        raise NoFeasibleStartError("single-linkage starting point is not positive definite")
    return sigma0


def _default_start(s, bounds):
    d = s.shape[0]
    off = ~np.eye(d, dtype=bool)
    if linalg.is_positive_definite(s):
        return np.asarray(s, dtype=float).copy()
    if np.all(bounds.lower[off] < 0.0) and np.all(bounds.upper[off] > 0.0):
        return starting_point_interior(s, bounds)
    if np.all(bounds.upper[off] > 0.0):
        return starting_point_single_linkage(s, bounds)
    raise NoFeasibleStartError(
        "S is rank deficient and the bounds admit no generic starting point"
    )


def _isolated_rows(s, clipped):
    """Rows j with S + L <= 0 <= S + U on every off-diagonal entry: the
    optimum has Sigma_{j,-j} = K_{j,-j} = 0 and the row can be skipped."""
    d = s.shape[0]
    lo = s + clipped.lower
    hi = s + clipped.upper
    rows = []
    for j in range(d):
        mask = np.arange(d) != j
        if np.all(lo[j, mask] <= 0.0) and np.all(hi[j, mask] >= 0.0):
            rows.append(j)
    return rows


def _forced_zero_pairs(s, bounds):
    """Pairs where both one-sided conditions hold, forcing K_ij = 0."""
    d = s.shape[0]
    diag = np.diag(s)
    root = np.sqrt(np.outer(diag, diag))
    pairs = []
    for i in range(d):
        for j in range(i + 1, d):
            if (bounds.lower[i, j] <= -s[i, j] - root[i, j]
                    and bounds.upper[i, j] >= -s[i, j] + root[i, j]):
                pairs.append((i, j))
    return pairs


def _check_feasible(sigma, s, clipped, slack=1e-9):
    scale = 1.0 + float(np.max(np.abs(s)))
    return (np.all(sigma - s >= clipped.lower - slack * scale)
            and np.all(sigma - s <= clipped.upper + slack * scale))


def fit(s, bounds, config=None, sigma0=None, screen=True, qp_tol=1e-10):
    """Run the block-coordinate dual ascent to the requested duality gap.

    ``sigma0`` optionally supplies a dually feasible starting point; when
    omitted one is constructed (S itself if positive definite, else the
    diagonal blend for strict bounds, else the single-linkage blend).
    ``screen=False`` disables the isolated-row shortcut (used in tests).
    """
    config = config or SolverConfig()
    s = linalg.check_square_symmetric(s)
    d = s.shape[0]
    clipped = clip_to_finite(bounds, s)

    if d == 1:
        k = np.array([[1.0 / s[0, 0]]])
        return FitResult(k, s.copy(), 0.0, 0, [0.0], np.zeros((1, 1)), clipped)

    isolated = _isolated_rows(s, clipped) if screen else []
    forced = _forced_zero_pairs(s, bounds)

    if sigma0 is None:
        sigma = _default_start(s, bounds)
    else:
        sigma = linalg.check_square_symmetric(sigma0)
        if not _check_feasible(sigma, s, clipped):
            raise NoFeasibleStartError("supplied sigma0 is not dually feasible")
    sigma = sigma.copy()
    for j in isolated:
        sigma[j, :] = 0.0
        sigma[:, j] = 0.0
        sigma[j, j] = s[j, j]

    pinned = np.zeros(d, dtype=bool)
    pinned[isolated] = True
    active = [j for j in range(d) if not pinned[j]]
    lo = s + clipped.lower
    hi = s + clipped.upper

    gap_trace = []
    sweeps = 0
    k = linalg.invert_pd(sigma)
    gap = duality_gap(s, k, clipped)
    gap_trace.append(gap)

    while gap > config.dual_gap_tol and sweeps < config.max_sweeps:
        for j in active:
            keep = np.r_[0:j, j + 1:d]
            w = linalg.invert_pd(sigma[np.ix_(keep, keep)])
            l_j = lo[j, keep].copy()
            u_j = hi[j, keep].copy()
            pin = pinned[keep]
            l_j[pin] = 0.0
            u_j[pin] = 0.0
            y = solve_boxqp(BoxQP(w, l_j, u_j), tol=qp_tol, y0=sigma[j, keep])
            sigma[j, keep] = y
            sigma[keep, j] = y
        sweeps += 1
        k = linalg.invert_pd(sigma)
        gap = duality_gap(s, k, clipped)
        gap_trace.append(gap)
        if config.verbose:
            print(f"sweep {sweeps}: duality gap {gap:.3e}")

    sign = np.sign(k) * (np.abs(k) > EDGE_THRESHOLD)
    np.fill_diagonal(sign, 0)
    result = FitResult(
        khat=linalg.sym(k),
        sigma_hat=sigma,
        dual_gap=gap,
        sweeps=sweeps,
        gap_trace=gap_trace,
        sign_pattern=sign.astype(int),
        clipped_bounds=clipped,
        isolated_rows=tuple(isolated),
        forced_zero_pairs=tuple(forced),
    )
    if gap > config.dual_gap_tol:
        raise MaxSweepsExceededError(result)
    return result

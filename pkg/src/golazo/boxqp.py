"""Box-constrained quadratic program  min y' W y  s.t.  l <= y <= u.

W is positive definite; box ends may be infinite (absent constraints).
Solved with a primal active-set method: at each step the problem is solved
exactly on the current face, then either a blocking bound is added or the
bound with the most negative multiplier is released.
"""
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import MaxIterationsExceededError, NotPositiveDefiniteError

AT_LOWER = -1
FREE = 0
AT_UPPER = 1


@dataclass(frozen=True)
class BoxQP:
    w: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        lower = np.asarray(self.lower, dtype=float).ravel()
        upper = np.asarray(self.upper, dtype=float).ravel()
        if w.shape != (lower.size, upper.size):
            raise ValueError("dimension mismatch between W and the box")
        if np.any(lower > upper):
            raise ValueError("empty box: some l_i > u_i")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)


def _feasible_seed(problem, y0):
    lower, upper = problem.lower, problem.upper
    if y0 is None:
        y0 = np.zeros(lower.size)
    y = np.clip(np.asarray(y0, dtype=float).ravel(), lower, upper)
    # Infinite ends clip to +-inf-free values; replace any residue.
    y = np.where(np.isfinite(y), y, np.where(np.isfinite(lower), lower, 0.0))
    return np.clip(y, lower, upper)


def _solve_face(w, state, lower, upper, ridge_scale):
    """Minimizer of y'Wy with the active coordinates pinned at their bounds."""
    n = state.size
    y = np.where(state == AT_LOWER, lower, 0.0) + np.where(state == AT_UPPER, upper, 0.0)
    free = np.nonzero(state == FREE)[0]
    if free.size:
        fixed = np.nonzero(state != FREE)[0]
        rhs = -w[np.ix_(free, fixed)] @ y[fixed] if fixed.size else np.zeros(free.size)
        wff = w[np.ix_(free, free)]
        try:
            y[free] = linalg.solve_pd(wff, rhs)
        except NotPositiveDefiniteError:
            # Ridge fail-over for (near-)singular principal blocks.
            eps = ridge_scale
            y[free] = linalg.solve_pd(wff + eps * np.eye(free.size), rhs)
    return y


def solve_boxqp(problem, tol=1e-10, y0=None, max_iter=None):
    """Solve the box QP to the stated KKT tolerance.

    Returns the optimal vector.  The KKT conditions at the solution are, with
    g = 2 W y:  g_i >= -tol at an active lower bound, g_i <= tol at an active
    upper bound, |g_i| <= tol on free coordinates.
    """
    w, lower, upper = problem.w, problem.lower, problem.upper
    n = lower.size
    if n == 0:
        return np.zeros(0)
    ridge_scale = 1e-10 * float(np.trace(w)) / n
    if max_iter is None:
        max_iter = 50 * (n + 5)

    y = _feasible_seed(problem, y0)
    state = np.full(n, FREE, dtype=int)
    state[y <= lower] = AT_LOWER
    state[y >= upper] = AT_UPPER
    state[(lower == upper)] = AT_LOWER

    for _ in range(max_iter):
        target = _solve_face(w, state, lower, upper, ridge_scale)
        step = target - y
        # Largest feasible fraction of the step before a bound blocks it.
        alpha = 1.0
        blocker = -1
        blocker_side = FREE
        for i in np.nonzero(state == FREE)[0]:
            if step[i] > 0 and np.isfinite(upper[i]):
                a = (upper[i] - y[i]) / step[i]
                if a < alpha - 1e-15:
                    alpha, blocker, blocker_side = a, i, AT_UPPER
            elif step[i] < 0 and np.isfinite(lower[i]):
                a = (lower[i] - y[i]) / step[i]
                if a < alpha - 1e-15:
                    alpha, blocker, blocker_side = a, i, AT_LOWER
        alpha = max(alpha, 0.0)
        y = y + alpha * step
        y = np.clip(y, lower, upper)

        if blocker >= 0 and alpha < 1.0:
            state[blocker] = blocker_side
            continue

        # On the face optimum: check multipliers of the active bounds.
        grad = 2.0 * (w @ y)
        release = -1
        worst = tol
        for i in np.nonzero(state != FREE)[0]:
            if lower[i] == upper[i]:
                continue  # equality-pinned coordinate, never released
            viol = -grad[i] if state[i] == AT_LOWER else grad[i]
            if viol > worst:
                worst, release = viol, i
        if release < 0:
            return y
        state[release] = FREE

    raise MaxIterationsExceededError(y)

"""Independent reference implementations used only to cross-check the
package.  Each oracle deliberately uses a different algorithm than the code
under test (brute force, projected gradient, proximal gradient, iterative
proportional scaling, path enumeration).
"""
import itertools

import numpy as np


def bruteforce_det(a):
    """Determinant by cofactor expansion along the first row."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a[0, 0]
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += ((-1.0) ** j) * a[0, j] * bruteforce_det(minor)
    return total


def projected_gradient_boxqp(w, lower, upper, iters=100_000):
    """min y'Wy on the box by projected gradient with step 1/(2 lambda_max)."""
    w = np.asarray(w, dtype=float)
    lam = float(np.max(np.linalg.eigvalsh(w)))
    step = 1.0 / (2.0 * lam)
    y = np.clip(np.zeros(w.shape[0]), lower, upper)
    for _ in range(iters):
        y = np.clip(y - step * 2.0 * (w @ y), lower, upper)
    return y


def _soft_threshold_offdiag(a, t):
    out = np.sign(a) * np.maximum(np.abs(a) - t, 0.0)
    np.fill_diagonal(out, np.diag(a))
    return out


def glasso_kkt_residual(s, k, rho, zero_tol=1e-10, grad=None):
    """Max subgradient-condition violation of the primal lasso-penalized
    likelihood at k."""
    if grad is None:
        grad = np.asarray(s, dtype=float) - np.linalg.inv(k)
    pos = np.abs(grad + rho) * (k > zero_tol)
    neg = np.abs(grad - rho) * (k < -zero_tol)
    zero = np.maximum(np.abs(grad) - rho, 0.0) * (np.abs(k) <= zero_tol)
    off = pos + neg + zero
    np.fill_diagonal(off, 0.0)
    return max(float(np.max(np.abs(np.diag(grad)))), float(np.max(off)))


def prox_gradient_glasso(s, rho, max_iter=200_000, kkt_tol=1e-9):
    """Primal proximal-gradient (ISTA with backtracking) solver for

        min -log det K + tr(S K) + rho * sum_{i != j} |K_ij|

    used as an independent check of the dual block-coordinate solver.
    Terminates on the subgradient optimality residual, so its accuracy does
    not depend on the step size.
    """
    s = np.asarray(s, dtype=float)
    d = s.shape[0]
    k = np.linalg.inv(s + rho * np.eye(d))
    z = k.copy()
    theta = 1.0
    lips = float(np.max(np.linalg.eigvalsh(s + rho * np.eye(d))) ** 2)
    t = 1.0 / lips

    def smooth(km):
        sign, logdet = np.linalg.slogdet(km)
        if sign <= 0:
            return np.inf
        return -logdet + float(np.sum(s * km))

    for _ in range(max_iter):
        grad_k = s - np.linalg.inv(k)
        if glasso_kkt_residual(s, k, rho, grad=grad_k) < kkt_tol:
            break
        grad = s - np.linalg.inv(z) if theta > 1.0 else grad_k
        f_z = smooth(z)
        while True:
            cand = _soft_threshold_offdiag(z - t * grad, t * rho)
            cand = (cand + cand.T) / 2.0
            f_cand = smooth(cand)
            quad = (f_z + np.sum(grad * (cand - z))
                    + np.sum((cand - z) ** 2) / (2.0 * t))
            if np.isfinite(f_cand) and f_cand <= quad + 1e-13:
                break
            t *= 0.5
        theta_new = (1.0 + np.sqrt(1.0 + 4.0 * theta * theta)) / 2.0
        momentum = (theta - 1.0) / theta_new
        z = cand + momentum * (cand - k)
        if np.sum(grad * (cand - k)) > 0:  # adaptive restart
            z = cand.copy()
            theta_new = 1.0
        k = cand
        theta = theta_new
    return k


def ips_ggm(s, edges, d, max_iter=20_000, tol=1e-12):
    """Iterative proportional scaling over edge and vertex marginals for the
    Gaussian model with zero precision entries off the edge set."""
    s = np.asarray(s, dtype=float)
    k = np.diag(1.0 / np.diag(s))
    cliques = [list(e) for e in edges] + [[v] for v in range(d)]
    for _ in range(max_iter):
        sigma = np.linalg.inv(k)
        worst = 0.0
        for c in cliques:
            idx = np.ix_(c, c)
            worst = max(worst, float(np.max(np.abs(sigma[idx] - s[idx]))))
        if worst < tol:
            break
        for c in cliques:
            idx = np.ix_(c, c)
            sigma = np.linalg.inv(k)
            k[idx] += np.linalg.inv(s[idx]) - np.linalg.inv(sigma[idx])
    return (k + k.T) / 2.0


def bruteforce_single_linkage(r):
    """Max over all simple paths of the minimum positive edge weight."""
    r = np.asarray(r, dtype=float)
    d = r.shape[0]
    z = np.eye(d)
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            best = 0.0
            inner = [v for v in range(d) if v not in (i, j)]
            for count in range(len(inner) + 1):
                for mid in itertools.permutations(inner, count):
                    path = (i, *mid, j)
                    weights = [r[a, b] for a, b in zip(path, path[1:])]
                    if all(w > 0 for w in weights):
                        best = max(best, min(weights))
            z[i, j] = best
    np.fill_diagonal(z, 1.0)
    return z


def random_pd(rng, d, extra=0.0):
    a = rng.standard_normal((d, 2 * d))
    return a @ a.T / (2 * d) + extra * np.eye(d)


def random_correlation(rng, d, extra=0.05):
    s = random_pd(rng, d, extra)
    scale = np.sqrt(np.diag(s))
    r = s / np.outer(scale, scale)
    np.fill_diagonal(r, 1.0)
    return (r + r.T) / 2.0


def random_graph(rng, d, p=0.5):
    edges = [(i, j) for i in range(d) for j in range(i + 1, d) if rng.random() < p]
    return edges

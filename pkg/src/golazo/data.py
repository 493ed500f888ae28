"""Data ingestion and statistics: sample covariance/correlation, rank-based
(sine-transformed Kendall) correlation, synthetic generators, and the CSV /
edge-list file formats used by the command-line tool.
"""
import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    ConstantColumnWarning,
    GenerationFailedError,
    NonpositiveDiagonalError,
)
from .estimators import GraphSpec, ggm_mle, is_locally_associated, is_markov


def _rng(seed):
    # Counter-based generator: seeded streams are reproducible regardless of
    # how work is split across threads.
    return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class DataMatrix:
    values: np.ndarray
    column_names: tuple = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.size == 0:
            raise ValueError("data must be a nonempty 2-d array")
        if np.any(~np.isfinite(values)):
            raise ValueError("data contains missing or non-finite values")
        object.__setattr__(self, "values", values)
        if self.column_names is not None:
            names = tuple(self.column_names)
            if len(names) != values.shape[1]:
                raise ValueError("column_names length does not match data width")
            object.__setattr__(self, "column_names", names)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]


def sample_covariance(x, centered=True):
    """X'X / n, after subtracting column means when ``centered``."""
    if isinstance(x, DataMatrix):
        x = x.values
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if centered:
        x = x - x.mean(axis=0)
    s = linalg.sym(x.T @ x / n)
    const = np.nonzero(np.diag(s) <= 0)[0]
    for i in const:
        warnings.warn(f"column {i} is constant (zero variance)", ConstantColumnWarning)
    return s


def to_correlation(s):
    """Rescale a covariance matrix to unit diagonal."""
    s = np.asarray(s, dtype=float)
    diag = np.diag(s)
    for i, sii in enumerate(diag):
        if sii <= 0:
            raise NonpositiveDiagonalError(i)
    scale = np.sqrt(diag)
    r = s / np.outer(scale, scale)
    np.fill_diagonal(r, 1.0)
    return linalg.sym(r)


def kendall_tau_matrix(x, variant="a"):
    """Pairwise Kendall correlation by direct pair enumeration.

    ``variant='a'`` divides the concordant-discordant balance by n(n-1)/2,
    counting tied pairs as zero; ``variant='b'`` divides by the geometric
    mean of the untied pair counts in each column.
    """
    if isinstance(x, DataMatrix):
        x = x.values
    x = np.asarray(x, dtype=float)
    n, d = x.shape
    if n < 2:
        raise ValueError("Kendall correlation needs at least two observations")
    signs = [np.sign(x[:, None, j] - x[None, :, j]) for j in range(d)]
    tau = np.eye(d)
    for i in range(d):
        for j in range(i + 1, d):
            agree = float(np.sum(signs[i] * signs[j]))  # 2 * (concordant - discordant)
            if variant == "a":
                denom = n * (n - 1)
            elif variant == "b":
                ti = float(np.sum(np.abs(signs[i])))
                tj = float(np.sum(np.abs(signs[j])))
                denom = np.sqrt(ti * tj) if ti > 0 and tj > 0 else np.inf
            else:
                raise ValueError("variant must be 'a' or 'b'")
            tau[i, j] = tau[j, i] = agree / denom
    return tau


def skeptic_correlation(x, variant="a"):
    """Rank-based correlation estimate sin(pi/2 * tau); entries in [-1, 1],
    unit diagonal.  The result need not be positive semidefinite."""
    tau = kendall_tau_matrix(x, variant=variant)
    r = np.sin(0.5 * np.pi * tau)
    np.fill_diagonal(r, 1.0)
    return linalg.sym(r)


def nearest_correlation(r, eig_floor=1e-6):
    """Project to the nearest correlation matrix by clipping eigenvalues at
    ``eig_floor`` and rescaling to unit diagonal."""
    r = linalg.sym(r)
    vals, vecs = np.linalg.eigh(r)
    vals = np.maximum(vals, eig_floor)
    fixed = (vecs * vals) @ vecs.T
    return to_correlation(linalg.sym(fixed))


@dataclass(frozen=True)
class DagSpec:
    """DAG on vertices 0..d-1 whose index order is a topological order:
    every edge (parent, child) has parent < child."""

    d: int
    loadings: dict        # (parent, child) -> loading
    noise_vars: np.ndarray

    def __post_init__(self):
        noise = np.asarray(self.noise_vars, dtype=float).ravel()
        if noise.size != self.d or np.any(noise <= 0):
            raise ValueError("noise variances must be d positive reals")
        for (p, c) in self.loadings:
            if not (0 <= p < c < self.d):
                raise ValueError(f"edge ({p}, {c}) violates the topological order")
        object.__setattr__(self, "noise_vars", noise)
        object.__setattr__(self, "loadings", dict(self.loadings))

    def loading_matrix(self):
        lam = np.zeros((self.d, self.d))
        for (p, c), v in self.loadings.items():
            lam[c, p] = v
        return lam


def dag_covariance(spec):
    """Exact covariance (I - Lambda)^{-1} Omega (I - Lambda)^{-T} of the
    linear structural model Y_c = sum_p lambda_cp Y_p + eps_c."""
    lam = spec.loading_matrix()
    a = np.linalg.inv(np.eye(spec.d) - lam)
    return linalg.sym(a @ np.diag(spec.noise_vars) @ a.T)


def sample_positive_dag(spec, n, seed, require_nonnegative=True):
    """Draw n rows from the zero-mean Gaussian of the structural model.

    With nonnegative loadings the covariance is entrywise nonnegative and
    the distribution is associated; ``require_nonnegative`` enforces that
    generator mode.
    """
    if require_nonnegative and any(v < 0 for v in spec.loadings.values()):
        raise ValueError("negative loading in nonnegative-generator mode")
    rng = _rng(seed)
    eps = rng.standard_normal((n, spec.d)) * np.sqrt(spec.noise_vars)
    lam = spec.loading_matrix()
    y = np.empty((n, spec.d))
    for c in range(spec.d):
        y[:, c] = eps[:, c] + y[:, :c] @ lam[c, :c]
    return DataMatrix(y)


def _perfect_elimination_dag(graph, rng):
    """For a chordal graph, orient edges along a perfect elimination ordering
    and draw nonnegative loadings; the resulting covariance is Markov to the
    graph and entrywise nonnegative."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(graph.d))
    g.add_edges_from(graph.edges)
    if not nx.is_chordal(g):
        return None
    # A perfect elimination ordering, reversed, gives a vertex order in which
    # each vertex's earlier neighbors form a clique, so orienting every edge
    # forward yields a DAG whose moral graph is the graph itself.
    peo = _perfect_elimination_ordering(g)
    pos = {v: idx for idx, v in enumerate(reversed(peo))}
    loadings = {}
    for i, j in graph.edges:
        a, b = sorted((pos[i], pos[j]))
        loadings[(a, b)] = rng.uniform(0.1, 0.6)
    noise = rng.uniform(0.5, 1.5, size=graph.d)
    cov_pos = dag_covariance(DagSpec(graph.d, loadings, noise))
    # Map position-space rows/columns back to the original vertex ids.
    posvec = np.array([pos[v] for v in range(graph.d)])
    return cov_pos[np.ix_(posvec, posvec)]


def _perfect_elimination_ordering(g):
    import networkx as nx

    order = []
    h = g.copy()
    while h.number_of_nodes():
        for v in sorted(h.nodes):
            nbrs = list(h.neighbors(v))
            if all(h.has_edge(a, b) for k, a in enumerate(nbrs) for b in nbrs[k + 1:]):
                order.append(v)
                h.remove_node(v)
                break
        else:  # pragma: no cover - cannot happen for chordal graphs
            raise GenerationFailedError("no simplicial vertex found")
    return order


def sample_locally_associated(graph, seed, max_tries=1000, tol=1e-9):
    """Random PD covariance that is Markov to the graph and has nonnegative
    covariance on its edges.

    Chordal graphs use a nonnegative-loading structural model along a
    perfect elimination ordering; other graphs draw random covariances,
    project onto the graph model by the graph-constrained MLE, and reject
    until the edge covariances are nonnegative.
    """
    rng = _rng(seed)
    cov = _perfect_elimination_dag(graph, rng)
    if cov is not None and is_locally_associated(cov, graph, tol=tol):
        return cov
    d = graph.d
    for _ in range(max_tries):
        a = rng.standard_normal((d, 2 * d))
        raw = a @ a.T / (2 * d) + 0.1 * np.eye(d)
        # Bias towards positive dependence to make acceptance likely.
        raw = np.abs(raw) + 0.05
        raw = linalg.sym(raw)
        if not linalg.is_positive_definite(raw):
            continue
        try:
            sigma = ggm_mle(raw, graph).sigma_hat
        except Exception:
            continue
        if is_locally_associated(sigma, graph, tol=tol) and is_markov(
                np.linalg.inv(sigma), graph, tol=tol):
            return sigma
    raise GenerationFailedError(
        f"no valid instance for the given graph after {max_tries} tries")


# --- file formats -----------------------------------------------------------

def read_csv_data(path, header=False):
    """Read an n x d data CSV (comma separator, '.' decimal point)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    names = None
    if header and rows:
        names = tuple(c.strip() for c in rows[0])
        rows = rows[1:]
    values = np.array([[_parse_number(c) for c in row] for row in rows if row])
    return DataMatrix(values, column_names=names)


def read_csv_matrix(path, header=False, sym_tol=1e-9):
    """Read a square symmetric matrix CSV; symmetrized by averaging after a
    symmetry check at ``sym_tol``.  Unlike data CSVs, 'inf' / '-inf' entries
    are allowed (penalty-bound matrices use them)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if header and rows:
        rows = rows[1:]
    a = np.array([[_parse_number(c) for c in row] for row in rows if row])
    if np.any(np.isnan(a)):
        raise ValueError("matrix CSV contains missing values")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix CSV must be square, got {a.shape}")
    finite = np.isfinite(a)
    if not np.array_equal(finite, finite.T) or np.any(a[~finite] != a.T[~finite]):
        raise ValueError("matrix CSV is not symmetric within tolerance")
    with np.errstate(invalid="ignore"):
        asym = np.abs(np.where(finite, a, 0.0) - np.where(finite, a, 0.0).T)
    if np.max(asym) > sym_tol:
        raise ValueError("matrix CSV is not symmetric within tolerance")
    return linalg.sym(np.where(finite, (a + a.T) / 2.0, a))


def _parse_number(token):
    token = token.strip().lower()
    if token in ("inf", "+inf"):
        return np.inf
    if token == "-inf":
        return -np.inf
    return float(token)


def write_csv_matrix(path, a, fmt="%.17g"):
    np.savetxt(path, np.asarray(a, dtype=float), delimiter=",", fmt=fmt)


def read_edge_list(path, d=None):
    """Edge-list file, one '1-based-i 1-based-j' pair per line."""
    edges = []
    max_v = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, j = (int(t) for t in line.split())
            edges.append((i - 1, j - 1))
            max_v = max(max_v, i, j)
    if d is None:
        d = max_v
    return GraphSpec(d, edges)


def write_edge_list(path, graph):
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in graph.sorted_edges():
            fh.write(f"{i + 1} {j + 1}\n")


def write_graphml(path, khat, threshold=1e-6):
    """GraphML export with a 'partialCorrelation' attribute per edge."""
    import networkx as nx

    k = np.asarray(khat, dtype=float)
    d = k.shape[0]
    g = nx.Graph()
    g.add_nodes_from(range(1, d + 1))
    for i in range(d):
        for j in range(i + 1, d):
            if abs(k[i, j]) > threshold:
                pcor = -k[i, j] / np.sqrt(k[i, i] * k[j, j])
                g.add_edge(i + 1, j + 1, partialCorrelation=float(pcor))
    nx.write_graphml(g, path)

"""Linear complementarity baseline for the contact solve.

The contact step can equally be posed as the LCP

    w = M z + q,   w >= 0,   z >= 0,   w . z = 0

with M the contact matrix and q the drift vector; z are the wheel forces and
w the predicted gaps.  This module implements Lemke's complementary pivoting
with a covering vector of ones and lexicographic tie-breaking, which is the
classical way to solve it, and exists as a correctness and performance
yardstick for the pseudo-inverse path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

SOLVED = "solved"
RAY_TERMINATION = "ray_termination"
ITERATION_LIMIT = "iteration_limit"

# Pivot budget per problem dimension.
PIVOT_FACTOR = 50

# Relative weight of the Tikhonov term used to resolve degenerate contact
# matrices: rank-deficient problems have a whole family of complementary
# force splits, and the regularised problem picks the least-norm one, which
# is the same split the pseudo-inverse path returns.  The weight must sit
# well above the pivoting arithmetic's resolution or Lemke terminates on a
# vertex of the family instead; 1e-6 is reliably resolved up to p = 24 while
# biasing the forces by only O(1e-6) relative.
DEFAULT_REGULARIZATION = 1e-6


@dataclass(frozen=True)
class LcpProblem:
    M: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.M, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != q.shape[0]:
            raise ValueError(f"need square M matching q, got {m.shape} and {q.shape}")
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "q", q)

    @property
    def size(self):
        return self.q.shape[0]


@dataclass(frozen=True)
class LcpSolution:
    z: np.ndarray
    w: np.ndarray
    status: str
    pivots: int


def _lexico_min_row(tableau, rows, col, p):
    """Row index minimising (rhs, inverse-basis row) / pivot lexicographically."""
    piv = tableau[rows, col][:, None]
    keys = np.hstack([tableau[rows, -1:], tableau[rows, :p]]) / piv
    # lexsort's last key is the primary one; feed columns reversed.
    order = np.lexsort(keys.T[::-1])
    return rows[order[0]]


def lemke_solve(prob: LcpProblem, max_pivots: int | None = None) -> LcpSolution:
    """Solve the LCP by Lemke's method.

    Returns a solution with status ``solved``, ``ray_termination`` (no
    complementary solution found along the pivot path) or
    ``iteration_limit``.
    """
    p = prob.size
    if p == 0:
        return LcpSolution(z=np.zeros(0), w=np.zeros(0), status=SOLVED, pivots=0)
    if max_pivots is None:
        max_pivots = PIVOT_FACTOR * p
    q = prob.q
    if (q >= 0.0).all():
        return LcpSolution(z=np.zeros(p), w=q.copy(), status=SOLVED, pivots=0)

    m = prob.M
    # Pivot admissibility must be judged against the matrix block alone: the
    # rhs can be orders of magnitude larger, and folding it into the scale
    # would swallow genuinely small pivot entries, break the min-ratio
    # invariant and return infeasible bases as "solved".
    tol = 1e-11 * max(float(np.abs(m).max()), 1.0)
    tol_q = 1e-11 * max(float(np.abs(q).max()), 1.0)
    # Columns: w_0..w_{p-1}, z_0..z_{p-1}, auxiliary, rhs.
    aux_col = 2 * p
    tableau = np.hstack([np.eye(p), -m, -np.ones((p, 1)), q[:, None]])
    basis = list(range(p))

    # The auxiliary variable enters first; the most negative rhs row leaves.
    candidates = np.flatnonzero(q <= q.min() + tol_q)
    if candidates.size > 1:
        keys = np.hstack([tableau[candidates, -1:], tableau[candidates, :p]])
        candidates = candidates[[np.lexsort(keys.T[::-1])[0]]]
    row = int(candidates[0])
    entering = aux_col

    pivots = 0
    while True:
        pivots += 1
        if pivots > max_pivots:
            return LcpSolution(z=np.zeros(p), w=q.copy(), status=ITERATION_LIMIT, pivots=pivots - 1)
        # Pivot: entering variable replaces basis[row].
        pivot = tableau[row, entering]
        if abs(pivot) <= tol:
            return LcpSolution(z=np.zeros(p), w=q.copy(), status=RAY_TERMINATION, pivots=pivots)
        tableau[row] /= pivot
        other = np.arange(p) != row
        tableau[other] -= np.outer(tableau[other, entering], tableau[row])
        leaving = basis[row]
        basis[row] = entering
        if leaving == aux_col:
            break
        # Complementary rule: the partner of the leaving variable enters next.
        entering = leaving + p if leaving < p else leaving - p
        candidates = np.flatnonzero(tableau[:, entering] > tol)
        if candidates.size == 0:
            return LcpSolution(z=np.zeros(p), w=q.copy(), status=RAY_TERMINATION, pivots=pivots)
        row = int(_lexico_min_row(tableau, candidates, entering, p))

    z = np.zeros(p)
    for i, var in enumerate(basis):
        if p <= var < 2 * p:
            z[var - p] = tableau[i, -1]
    z = np.maximum(z, 0.0)
    w = m @ z + q
    return LcpSolution(z=z, w=w, status=SOLVED, pivots=pivots)


def lcp_contact_forces(prob, max_pivots: int | None = None,
                       regularization: float = DEFAULT_REGULARIZATION) -> np.ndarray:
    """Contact forces via the LCP route, for cross-checking ``solve_forces``.

    Maps a :class:`~terrapose.contact.ContactProblem` to M = A, q = b (so
    w is the predicted gap vector), normalises the scale, and adds the small
    Tikhonov term described above unless ``regularization`` is 0.
    """
    p = prob.size
    if p == 0:
        return np.zeros(0)
    # Balance both axes so the whole tableau stays O(1): matrix entries are
    # divided by max|A| and the forces are solved in units of max|b|/max|A|.
    # Without this the rhs column dwarfs the matrix block and the pivoting
    # arithmetic cannot resolve regularization-sized entries.
    scale_a = float(np.abs(prob.A).max()) or 1.0
    scale_b = float(np.abs(prob.b).max()) or 1.0
    m = prob.A / scale_a
    if regularization:
        m = m + regularization * np.eye(p)
    solution = lemke_solve(LcpProblem(M=m, q=prob.b / scale_b), max_pivots=max_pivots)
    if solution.status != SOLVED:
        raise SolverError(f"Lemke pivoting failed: {solution.status}")
    return solution.z * (scale_b / scale_a)

"""Contact force resolution by pseudo-inversion.

One integrator step couples the unknown contact forces f to the next gap
vector through d_next = A f + b with

    A = dt^2 . Wt . Minv . W          (symmetric PSD, p x p)
    b = d_prev + dt . Wt . (v_prev + dt . Minv . g_wrench)

Demanding d_next = 0 on the active wheels and inverting A by a
singular-value-thresholded pseudo-inverse gives f = -pinv(A) b; A is rank 3
at most for more than three contacts, and the pseudo-inverse then selects the
minimum-norm force split.  Wheels whose solved force comes out negative are
pulling, which a contact cannot do; a non-negative active-set iteration walks
them out of the support and lets a dropped wheel re-enter if its predicted
gap dips below zero, so the returned split is feasible on every wheel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

DEFAULT_SVD_EPSILON = 1e-10


def _check_epsilon(eps):
    if not (0.0 < eps < 1.0):
        raise ValueError(f"svd epsilon must lie in (0, 1), got {eps}")
    return float(eps)


@dataclass(frozen=True)
class ContactProblem:
    """Linearised contact subproblem for the currently active wheels.

    ``active`` keeps the wheel indices so solved forces can be scattered back
    into full k-vectors.
    """

    A: np.ndarray
    b: np.ndarray
    active: tuple

    @property
    def size(self):
        return self.b.shape[0]


def assemble(wrench, mass_diagonal, v_prev, d_prev, dt, active=None) -> ContactProblem:
    """Build the step's contact problem from the wrench map and state.

    ``d_prev`` carries the gaps of the active wheels as the estimator wants
    them treated (it zeroes sub-threshold gaps).  ``active`` optionally
    records which wheel each wrench column belongs to; it defaults to the
    column order.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    w = wrench.columns
    minv = 1.0 / np.asarray(mass_diagonal, dtype=float)
    scaled = w * minv[:, None]  # Minv . W
    a = (dt * dt) * (w.T @ scaled)
    a = 0.5 * (a + a.T)  # exact symmetry despite rounding
    b = np.asarray(d_prev, dtype=float) + dt * (w.T @ (v_prev + dt * (wrench.gravity * minv)))
    if active is None:
        active = range(w.shape[1])
    return ContactProblem(A=a, b=b, active=tuple(int(i) for i in active))


def pseudo_inverse(a: np.ndarray, eps: float = DEFAULT_SVD_EPSILON) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with a relative singular value cutoff.

    Singular values below ``eps`` times the largest are treated as exact
    zeros, which is what turns the rank-deficient contact matrix into the
    minimum-norm force selector.
    """
    eps = _check_epsilon(eps)
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return np.zeros(a.shape[::-1])
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if not np.isfinite(s).all():
        raise SolverError("singular value decomposition produced non-finite values")
    cutoff = eps * s[0] if s.size else 0.0
    large = s > cutoff
    inv = np.divide(1.0, s, out=np.zeros_like(s), where=large)
    return vt.T @ (inv[:, None] * u.T)


def _min_norm_forces(a, b, eps):
    return -(pseudo_inverse(a, eps) @ b)


def clamp_active_set(prob: ContactProblem, forces: np.ndarray, eps: float = DEFAULT_SVD_EPSILON):
    """Project the raw solve onto non-negative forces, support by support.

    Non-negative active-set iteration in the Lawson-Hanson style: starting
    from the zero force vector, a candidate with pulling wheels is approached
    along a straight segment only until the first force crosses zero, that
    wheel leaves the support and the reduced problem is re-solved; once the
    candidate is feasible, any dropped wheel whose predicted gap has gone
    negative re-enters and the loop repeats.  A removal-only clamp can strand
    a wheel below the surface; the re-entry pass is what makes the split
    agree with the complementarity baseline.  Inner equality solves reuse the
    pseudo-inverse, so rank-deficient supports keep the minimum-norm split.

    Returns the force vector in the problem's original arity (dropped wheels
    at exactly 0) and the surviving subset of ``prob.active``.
    """
    p = prob.size
    if p == 0:
        return np.zeros(0), ()
    a = prob.A
    b = prob.b
    f = np.zeros(p)
    in_support = np.ones(p, dtype=bool)
    s = np.zeros(p)
    s[:] = np.asarray(forces, dtype=float)
    slack_tol = 1e-9 * max(float(np.abs(b).max()), 1e-30)
    limit = 30 * (p + 1)
    rounds = 0
    while True:
        # Shrink the support until the candidate is non-negative on it.
        while True:
            rounds += 1
            if rounds > limit:
                raise SolverError("active-set clamp failed to converge")
            sup = np.flatnonzero(in_support)
            if sup.size == 0:
                f[:] = 0.0
                break
            scale = max(1.0, float(np.abs(s[sup]).max()))
            neg = sup[s[sup] < -1e-10 * scale]
            if neg.size == 0:
                f[:] = 0.0
                f[sup] = np.maximum(s[sup], 0.0)  # crush rounding negatives
                break
            steps = f[neg] / (f[neg] - s[neg])
            alpha = float(steps.min())
            blockers = neg[steps <= alpha * (1.0 + 1e-12)]
            f[sup] += alpha * (s[sup] - f[sup])
            f[blockers] = 0.0
            in_support[blockers] = False
            sup = np.flatnonzero(in_support)
            s[:] = 0.0
            if sup.size:
                s[sup] = _min_norm_forces(a[np.ix_(sup, sup)], b[sup], eps)
        # Re-admit the worst-penetrating dropped wheel, if any.
        out = np.flatnonzero(~in_support)
        if out.size == 0:
            break
        slack = a @ f + b
        worst = out[int(slack[out].argmin())]
        if slack[worst] >= -slack_tol:
            break
        in_support[worst] = True
        sup = np.flatnonzero(in_support)
        s[:] = 0.0
        s[sup] = _min_norm_forces(a[np.ix_(sup, sup)], b[sup], eps)
    active = tuple(prob.active[i] for i in np.flatnonzero(in_support))
    return f, active


def solve_forces(prob: ContactProblem, eps: float = DEFAULT_SVD_EPSILON) -> np.ndarray:
    """Non-negative contact forces for one step, length ``prob.size``."""
    if prob.size == 0:
        return np.zeros(0)
    f = _min_norm_forces(prob.A, prob.b, eps)
    f, _ = clamp_active_set(prob, f, eps)
    return f

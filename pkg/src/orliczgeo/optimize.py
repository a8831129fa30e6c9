"""Small first-order optimizer used by the shape functionals.

Minimizes a smooth objective over ``x`` in R^m with a projection step that is
applied after every accepted move.  Directions come from limited-memory BFGS
on diagonally preconditioned gradients, falling back to the preconditioned
gradient when the quasi-Newton direction is not a descent direction.  Every
trial point is projected before it is evaluated, so every recorded value
belongs to a feasible shape.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

# a step shrunk 2^-30 times below the trust cap no longer moves the objective
MAX_HALVINGS = 30


@dataclass
class OptimizeResult:
    x: np.ndarray
    value: float
    iterations: int
    grad_norm: float
    converged: bool
    evaluations: int


def minimize(
    fun: Callable[[np.ndarray], tuple],
    x0: np.ndarray,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    precond: Optional[np.ndarray] = None,
    max_iter: int = 5000,
    rel_tol: float = 1e-9,
    memory: int = 10,
    armijo: float = 1e-4,
    max_step: float = np.inf,
) -> OptimizeResult:
    """Projected quasi-Newton descent with Armijo backtracking.

    ``fun(x)`` returns ``(value, gradient)`` and may return ``inf`` for
    infeasible points, which the line search rejects.  ``max_step`` caps the
    largest coordinate change of a trial move.
    """
    proj = project if project is not None else (lambda z: z)
    x = proj(np.asarray(x0, dtype=float))
    f, g = fun(x)
    nev = 1
    if not np.isfinite(f):
        raise FloatingPointError("initial point has a non-finite objective")
    d_inv = 1.0 / precond if precond is not None else np.ones_like(x)
    hist: deque = deque(maxlen=memory)
    step = 1.0
    converged = False
    it = 0
    small = 0
    for it in range(1, max_iter + 1):
        direction = -_two_loop(g, hist, d_inv)
        slope = float(g @ direction)
        if not slope < 0:
            hist.clear()
            direction = -d_inv * g
            slope = float(g @ direction)
            if not slope < 0:
                converged = True
                break
        alpha = step
        big = float(np.max(np.abs(direction)))
        if alpha * big > max_step:
            alpha = max_step / big
        accepted = False
        for _ in range(MAX_HALVINGS):
            x_new = proj(x + alpha * direction)
            f_new, g_new = fun(x_new)
            nev += 1
            if np.isfinite(f_new) and f_new <= f + armijo * float(g @ (x_new - x)) and f_new <= f:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            if hist:
                hist.clear()
                continue
            converged = True
            break
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y) and float(y @ (d_inv * y)) > 0:
            hist.append((s, y))
        decrease = f - f_new
        x, f, g = x_new, f_new, g_new
        step = min(alpha * 2.0, 1.0 if hist else 1e3)
        if decrease <= rel_tol * abs(f):
            small += 1
            if small >= 5:
                converged = True
                break
        else:
            small = 0
    return OptimizeResult(x, float(f), it, float(np.linalg.norm(d_inv * g)), converged, nev)


def _two_loop(g, hist, d_inv):
    if not hist:
        return d_inv * g
    q = g.copy()
    alphas = []
    for s, y in reversed(hist):
        rho = 1.0 / float(y @ s)
        a = rho * float(s @ q)
        alphas.append((a, rho, s, y))
        q -= a * y
    s, y = hist[-1]
    gamma = float(s @ y) / float(y @ (d_inv * y))
    r = gamma * d_inv * q
    for a, rho, s, y in reversed(alphas):
        b = rho * float(y @ r)
        r += (a - b) * s
    return r

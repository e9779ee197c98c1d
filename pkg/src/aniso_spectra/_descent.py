"""Shared descent engine for Rayleigh-quotient minimization.

Both the 1D oracle and the 2D solver minimize a scale-invariant quotient
R(u) = E(u) / M(u) over a pinned nodal space, with continuation over a
smoothing parameter delta and a final exact-subgradient polish (delta = 0).

Directions are preconditioned nonlinear conjugate gradients (Polak-Ribiere+
with automatic restart): the gradient is mapped through a fixed H^1-type
inner product (supplied as a linear solve) and combined with the previous
direction.  Plain preconditioned descent crawls along the curved low-energy
valleys these quotients develop for strongly one-sided weights; the CG
recurrence fixes that while every accepted step still strictly decreases the
quotient (Armijo with quadratic-interpolation backtracking), so descent logs
stay monotone.  Iterates are renormalized to unit p-norm after every step;
the quotient is invariant, making this a pure conditioning device.

Stage stopping follows the relative-decrease-over-a-window rule; smoothed
stages use a looser tolerance, the final polish keeps the strict window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ARMIJO_C = 0.25
STEP_GROW = 2.0
MAX_BACKTRACKS = 60


@dataclass
class DescentOutcome:
    u: np.ndarray
    iterations: int
    converged: bool
    final_relative_decrease: float
    stage_logs: list  # one array of accepted-step quotients per stage


def minimize_quotient(
    u0,
    stages,
    quotient_and_grad,
    quotient,
    precondition,
    pnorm,
    tol=1e-10,
    window=50,
    max_iters=50_000,
    intermediate_window=20,
    intermediate_tol_factor=1e4,
):
    """Run the staged descent.  Callables:

    quotient_and_grad(u, delta) -> (R, grad)   grad zero at pinned nodes
    quotient(u, delta)          -> R
    precondition(grad)          -> direction    (zero at pinned nodes)
    pnorm(u)                    -> ||u||_p      for renormalization
    """
    u = np.array(u0, dtype=float)
    u /= pnorm(u)
    iterations = 0
    step = 1.0
    last_drop = np.inf
    converged = True
    stage_logs = []

    stage_list = list(stages)
    for idx, delta in enumerate(stage_list):
        final = idx == len(stage_list) - 1
        win = window if final else intermediate_window
        stage_tol = tol if final else tol * intermediate_tol_factor
        history = []
        flat_run = 0
        stage_done = False
        g_prev = None
        d_prev = None
        zg_prev = None
        while iterations < max_iters:
            quot, grad = quotient_and_grad(u, delta)
            history.append(quot)
            if len(history) > win:
                drop = (history[-win - 1] - quot) / max(abs(quot), 1e-300)
                last_drop = drop
                if drop < stage_tol * win / window:
                    stage_done = True
                    break
            z = precondition(grad)
            zg = float(z @ grad)
            if d_prev is None or zg_prev is None or zg_prev <= 0.0:
                direction = z
            else:
                beta = max(0.0, float(z @ (grad - g_prev)) / zg_prev)
                direction = z + beta * d_prev
                if float(grad @ direction) <= 0.0:
                    direction = z  # restart: CG direction lost descent
            slope = float(grad @ direction)
            if slope <= 0.0:
                stage_done = True
                break
            t = step
            accepted = False
            for _ in range(MAX_BACKTRACKS):
                trial = u - t * direction
                tq = quotient(trial, delta)
                if np.isfinite(tq) and tq <= quot - ARMIJO_C * t * slope:
                    u = trial / pnorm(trial)
                    step = min(t * STEP_GROW, 1e8)
                    accepted = True
                    break
                # quadratic model through (0, quot), slope, (t, tq)
                denom = 2.0 * (tq - quot + t * slope)
                t_new = slope * t * t / denom if denom > 0.0 else 0.5 * t
                t = min(max(t_new, 0.1 * t), 0.5 * t)
            iterations += 1
            if not accepted:
                stage_done = True  # no descent along the preconditioned direction
                break
            g_prev = grad
            d_prev = direction
            zg_prev = zg
            decrease = (quot - tq) / max(abs(quot), 1e-300)
            flat_run = flat_run + 1 if decrease < 1e-12 else 0
            if flat_run >= 8:
                stage_done = True
                break
        if not stage_done:
            converged = False
        stage_logs.append(np.array(history))

    return DescentOutcome(u, iterations, converged, last_drop, stage_logs)

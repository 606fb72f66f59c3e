"""Randomized row- and column-action solvers for a single system A @ beta = y.

Four methods, all sampling indices proportionally to squared norms:

rk    randomized Kaczmarz.  Draw row i, project the iterate onto the
      hyperplane of equation i:
          beta <- beta + (y_i - A^i beta) / ||A^i||^2 * (A^i)*
      Converges to the unique / least-norm solution of consistent
      systems; stalls at a residual-dependent horizon on inconsistent
      ones.

rek   randomized extended Kaczmarz.  Keeps a residual estimate z
      (z starts at y) and interlaces a column projection with a row
      update against the de-noised right-hand side:
          z    <- z - <A_(j), z> / ||A_(j)||^2 * A_(j)
          beta <- beta + (y_i - z_i - A^i beta) / ||A^i||^2 * (A^i)*
      z converges to the component of y outside range(A), so beta
      converges to the least-squares solution even when the system is
      inconsistent.  Row and column indices are drawn independently,
      row first; the row update reads the just-updated z.

rgs   randomized Gauss-Seidel (coordinate descent on the normal
      equations).  Draw column j and minimize the residual along e_j:
          gamma = A_(j)* res / ||A_(j)||^2,  beta_j += gamma
      The residual res = y - A beta is maintained incrementally
      (res -= gamma * A_(j)); no step performs a full matvec.
      Converges to the least-squares solution of overdetermined
      systems but not to the least-norm solution of underdetermined
      ones.

regs  randomized extended Gauss-Seidel.  The rgs coordinate update
      plus a correction vector z updated by projecting out the drawn
      row:
          w = z + (beta_t - beta_{t-1});  z <- w - A^i w / ||A^i||^2 * (A^i)*
      The reported estimate is beta - z, which converges to the
      least-norm (least-squares) solution in all regimes.  Indices are
      drawn as in rek: row first, then column, independently.

Each step consumes a fixed number of uniforms from the caller's
generator (rk: 1 row draw; rgs: 1 column draw; rek and regs: row then
column), which is what makes trial streams reproducible.

Step costs follow a fixed flop model so trajectories-vs-flops are
bit-reproducible: a row action on a length-n row costs 4n + 2 (one dot,
one scalar divide and subtract, one scaled add), a column action
likewise 4m + 2, and composite steps add their parts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import DenseMatrix
from .sampling import col_sampler, row_sampler

__all__ = [
    "METHODS",
    "SolverState",
    "init_state",
    "estimate",
    "rk_step",
    "rek_step",
    "rgs_step",
    "regs_step",
    "run",
    "rk_step_flops",
    "rek_step_flops",
    "rgs_step_flops",
    "regs_step_flops",
]

METHODS = ("rk", "rek", "rgs", "regs")

DEFAULT_TOLERANCE = 1e-12


@dataclass
class SolverState:
    """Mutable per-run state.

    beta is the current iterate; z is the rek residual estimate (length
    m) or the regs correction (length n); residual is the incrementally
    maintained y - A beta of the Gauss-Seidel methods.  t counts steps,
    flops accumulates the declared step costs.
    """

    beta: np.ndarray
    z: np.ndarray | None = None
    residual: np.ndarray | None = None
    t: int = 0
    flops: int = 0


def rk_step_flops(n: int) -> int:
    return 4 * n + 2


def rek_step_flops(m: int, n: int) -> int:
    return (4 * n + 2) + (4 * m + 2)


def rgs_step_flops(m: int) -> int:
    return 4 * m + 2


def regs_step_flops(m: int, n: int) -> int:
    return (4 * m + 2) + (4 * n + 2)


# --- projection kernels -----------------------------------------------------
# Shared by the interlaced solvers; they take explicit indices so the
# per-step algebra can be exercised deterministically in tests.


def apply_row_step(beta: np.ndarray, row: np.ndarray, rhs_value: float, sqnorm: float) -> float:
    """Kaczmarz projection of beta onto {b : row @ b = rhs_value}."""
    coef = (rhs_value - np.dot(row, beta)) / sqnorm
    beta += coef * row
    return coef


def apply_col_project(z: np.ndarray, col: np.ndarray, sqnorm: float) -> float:
    """Remove the component of z along col."""
    coef = np.dot(col, z) / sqnorm
    z -= coef * col
    return coef


def apply_coord_step(beta: np.ndarray, residual: np.ndarray, col: np.ndarray, j: int, sqnorm: float) -> float:
    """One coordinate-descent step along e_j, keeping residual in sync."""
    gamma = np.dot(col, residual) / sqnorm
    beta[j] += gamma
    residual -= gamma * col
    return gamma


# --- public single-step operations ------------------------------------------


def init_state(method: str, A: DenseMatrix, y: np.ndarray) -> SolverState:
    """Zero iterate plus whatever auxiliary vectors the method maintains."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if y.shape != (A.rows,):
        raise ValueError(f"rhs shape {y.shape} does not match {A.rows}x{A.cols} matrix")
    beta = np.zeros(A.cols)
    if method == "rk":
        return SolverState(beta=beta)
    if method == "rek":
        return SolverState(beta=beta, z=y.copy())
    if method == "rgs":
        return SolverState(beta=beta, residual=y.copy())
    return SolverState(beta=beta, z=np.zeros(A.cols), residual=y.copy())


def estimate(method: str, state: SolverState) -> np.ndarray:
    """The solution estimate a run reports: beta, except beta - z for regs."""
    if method == "regs":
        return state.beta - state.z
    return state.beta


def rk_step(A: DenseMatrix, y: np.ndarray, state: SolverState, rng: np.random.Generator) -> int:
    """One rk update.  Returns the drawn row index."""
    i = row_sampler(A).draw(rng)
    apply_row_step(state.beta, A.row(i), y[i], A.row_sqnorms[i])
    state.t += 1
    state.flops += rk_step_flops(A.cols)
    return i


def rek_step(A: DenseMatrix, y: np.ndarray, state: SolverState, rng: np.random.Generator) -> tuple[int, int]:
    """One rek update.  Returns (row index, column index)."""
    i = row_sampler(A).draw(rng)
    j = col_sampler(A).draw(rng)
    z = state.z
    apply_col_project(z, A.col(j), A.col_sqnorms[j])
    apply_row_step(state.beta, A.row(i), y[i] - z[i], A.row_sqnorms[i])
    state.t += 1
    state.flops += rek_step_flops(A.rows, A.cols)
    return i, j


def rgs_step(A: DenseMatrix, y: np.ndarray, state: SolverState, rng: np.random.Generator) -> int:
    """One rgs update.  Returns the drawn column index."""
    j = col_sampler(A).draw(rng)
    apply_coord_step(state.beta, state.residual, A.col(j), j, A.col_sqnorms[j])
    state.t += 1
    state.flops += rgs_step_flops(A.rows)
    return j


def regs_step(A: DenseMatrix, y: np.ndarray, state: SolverState, rng: np.random.Generator) -> tuple[int, int]:
    """One regs update.  Returns (row index, column index)."""
    i = row_sampler(A).draw(rng)
    j = col_sampler(A).draw(rng)
    gamma = apply_coord_step(state.beta, state.residual, A.col(j), j, A.col_sqnorms[j])
    # w = z + (beta_t - beta_{t-1}) differs from z only in coordinate j.
    z = state.z
    z[j] += gamma
    apply_col_project(z, A.row(i), A.row_sqnorms[i])
    state.t += 1
    state.flops += regs_step_flops(A.rows, A.cols)
    return i, j


_STEPS = {"rk": rk_step, "rek": rek_step, "rgs": rgs_step, "regs": regs_step}


def run(
    method: str,
    A: DenseMatrix,
    y: np.ndarray,
    budget: int,
    rng: np.random.Generator,
    *,
    recorder=None,
    stride: int | None = None,
    tolerance: float | None = DEFAULT_TOLERANCE,
    error_fn=None,
):
    """Run ``budget`` steps of one method, optionally recording a trajectory.

    recorder, when given, is called as ``recorder(t, value, flops)`` at
    every stride-th step and at the final step; value is
    ``error_fn(estimate)`` when error_fn is provided, else the squared
    residual norm.  Default stride is budget / 500 (at least 1).

    Every A.rows steps the true residual ||y - A beta|| is evaluated;
    if it falls to ``tolerance`` or below the run stops early (pass
    ``tolerance=None`` to disable).  Returns the final SolverState.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    state = init_state(method, A, y)
    step = _STEPS[method]
    if stride is None:
        stride = max(1, budget // 500)
    if stride < 1:
        raise ValueError("stride must be at least 1")
    check_every = A.rows
    for t in range(1, budget + 1):
        step(A, y, state, rng)
        stopped = False
        if tolerance is not None and t % check_every == 0:
            res = y - A.data @ estimate(method, state)
            if float(np.linalg.norm(res)) <= tolerance:
                stopped = True
        if recorder is not None and (t % stride == 0 or t == budget or stopped):
            if error_fn is not None:
                value = float(error_fn(estimate(method, state)))
            else:
                res = y - A.data @ estimate(method, state)
                value = float(np.dot(res, res))
            recorder(t, value, state.flops)
        if stopped:
            break
    return state

"""Interlaced randomized solvers for systems in factored form U @ V @ b = y.

The system matrix is never materialized.  Writing x = V b splits the
problem into two coupled subsystems

    U x = y        (m equations, k unknowns)
    V b = x        (k equations, n unknowns)

and each interlaced step advances both: one step of a row/column method
on (U, y) updates x, then one step on (V, x) updates b against the
*current* x.  Supported pairings:

rk-rk     rk on U, rk on V.  Converges when both subsystems behave as
          consistent systems (U overdetermined with consistent data).
rek-rk    rek on U, rk on V.  The residual estimate z de-noises the
          first subsystem, so b converges even when U x = y is
          inconsistent, provided the V subsystem stays consistent
          (V underdetermined).  On consistent data z decays to zero
          and the method behaves like rk-rk.
rek-rek   rek on both.  The V-side residual estimate starts at the
          initial right-hand side x_0 = 0 and stays zero under column
          projections, so its updates match rk on V while paying the
          full rek step cost; kept because it is a natural pairing to
          benchmark against rek-rk.
rgs-rgs   rgs on both.  The V-side residual x - V b is kept in sync
          when the U-side step changes a coordinate of x.

Any other pairing is rejected loudly.

Step costs add the component costs from the flop model in
``solvers``: a row action on U touches k entries (4k + 2), a column
action on U touches m (4m + 2), a row action on V touches n (4n + 2),
a column action on V touches k (4k + 2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import DenseMatrix
from .oracle import pinv_solve, rate_constants
from .sampling import col_sampler, row_sampler
from .solvers import apply_col_project, apply_coord_step, apply_row_step

__all__ = [
    "PAIRINGS",
    "FactoredSystem",
    "InterlacedState",
    "init_interlaced",
    "interlaced_step",
    "rkrk_step",
    "rekrk_step",
    "rekrek_step",
    "rgsrgs_step",
    "run_interlaced",
    "BoundInputs",
    "bound_inputs",
    "expected_error_bound",
    "rkrk_step_flops",
    "rekrk_step_flops",
    "rekrek_step_flops",
    "rgsrgs_step_flops",
]

PAIRINGS = ("rk-rk", "rek-rk", "rek-rek", "rgs-rgs")


@dataclass(frozen=True)
class FactoredSystem:
    """A system U @ V @ b = y held in factored form.

    scenario is a free-form tag; the generators in ``systems`` use
    S1/S2/S3a/S3b, hand-loaded data uses "custom".
    """

    U: DenseMatrix
    V: DenseMatrix
    y: np.ndarray
    scenario: str = "custom"

    def __post_init__(self):
        if self.U.cols != self.V.rows:
            raise ValueError(
                f"factor dimension mismatch: U is {self.U.rows}x{self.U.cols}, V is {self.V.rows}x{self.V.cols}"
            )
        if self.y.shape != (self.U.rows,):
            raise ValueError(f"rhs shape {self.y.shape} does not match U with {self.U.rows} rows")

    @property
    def m(self) -> int:
        return self.U.rows

    @property
    def k(self) -> int:
        return self.U.cols

    @property
    def n(self) -> int:
        return self.V.cols


@dataclass
class InterlacedState:
    """x is the inner-variable iterate, b the reported solution iterate.

    z is the U-side residual estimate (rek pairings), zv the V-side one
    (rek-rek only); res_u and res_v are the incrementally maintained
    subsystem residuals of rgs-rgs.
    """

    x: np.ndarray
    b: np.ndarray
    z: np.ndarray | None = None
    zv: np.ndarray | None = None
    res_u: np.ndarray | None = None
    res_v: np.ndarray | None = None
    t: int = 0
    flops: int = 0


def rkrk_step_flops(k: int, n: int) -> int:
    return (4 * k + 2) + (4 * n + 2)


def rekrk_step_flops(m: int, k: int, n: int) -> int:
    return (4 * k + 2) + (4 * m + 2) + (4 * n + 2)


def rekrek_step_flops(m: int, k: int, n: int) -> int:
    return (4 * k + 2) + (4 * m + 2) + (4 * n + 2) + (4 * k + 2)


def rgsrgs_step_flops(m: int, k: int) -> int:
    return (4 * m + 2) + (4 * k + 2)


def init_interlaced(method: str, sys: FactoredSystem) -> InterlacedState:
    if method not in PAIRINGS:
        raise ValueError(f"unsupported pairing {method!r}; supported pairings are {PAIRINGS}")
    x = np.zeros(sys.k)
    b = np.zeros(sys.n)
    if method == "rk-rk":
        return InterlacedState(x=x, b=b)
    if method == "rek-rk":
        return InterlacedState(x=x, b=b, z=sys.y.copy())
    if method == "rek-rek":
        return InterlacedState(x=x, b=b, z=sys.y.copy(), zv=np.zeros(sys.k))
    return InterlacedState(x=x, b=b, res_u=sys.y.copy(), res_v=np.zeros(sys.k))


def rkrk_step(sys: FactoredSystem, state: InterlacedState, rng: np.random.Generator) -> tuple[int, int]:
    """rk on (U, y), then rk on (V, x) against the just-updated x.

    Draws: U row index, then V row index.  Returns both.
    """
    U, V = sys.U, sys.V
    i = row_sampler(U).draw(rng)
    apply_row_step(state.x, U.row(i), sys.y[i], U.row_sqnorms[i])
    p = row_sampler(V).draw(rng)
    apply_row_step(state.b, V.row(p), state.x[p], V.row_sqnorms[p])
    state.t += 1
    state.flops += rkrk_step_flops(sys.k, sys.n)
    return i, p


def rekrk_step(sys: FactoredSystem, state: InterlacedState, rng: np.random.Generator) -> tuple[int, int, int]:
    """rek on (U, y), then rk on (V, x).

    Draws: U row, U column, V row.  Returns all three.
    """
    U, V = sys.U, sys.V
    i = row_sampler(U).draw(rng)
    j = col_sampler(U).draw(rng)
    z = state.z
    apply_col_project(z, U.col(j), U.col_sqnorms[j])
    apply_row_step(state.x, U.row(i), sys.y[i] - z[i], U.row_sqnorms[i])
    p = row_sampler(V).draw(rng)
    apply_row_step(state.b, V.row(p), state.x[p], V.row_sqnorms[p])
    state.t += 1
    state.flops += rekrk_step_flops(sys.m, sys.k, sys.n)
    return i, j, p


def rekrek_step(sys: FactoredSystem, state: InterlacedState, rng: np.random.Generator) -> tuple[int, int, int, int]:
    """rek on (U, y), then rek on (V, x).

    Draws: U row, U column, V row, V column.  Returns all four.
    """
    U, V = sys.U, sys.V
    i = row_sampler(U).draw(rng)
    j = col_sampler(U).draw(rng)
    z = state.z
    apply_col_project(z, U.col(j), U.col_sqnorms[j])
    apply_row_step(state.x, U.row(i), sys.y[i] - z[i], U.row_sqnorms[i])
    p = row_sampler(V).draw(rng)
    q = col_sampler(V).draw(rng)
    zv = state.zv
    apply_col_project(zv, V.col(q), V.col_sqnorms[q])
    apply_row_step(state.b, V.row(p), state.x[p] - zv[p], V.row_sqnorms[p])
    state.t += 1
    state.flops += rekrek_step_flops(sys.m, sys.k, sys.n)
    return i, j, p, q


def rgsrgs_step(sys: FactoredSystem, state: InterlacedState, rng: np.random.Generator) -> tuple[int, int]:
    """rgs on (U, y), then rgs on (V, x).

    Draws: U column, V column.  The U-side step changes x in one
    coordinate, so the V-side residual x - V b is patched there before
    the V-side step uses it.
    """
    U, V = sys.U, sys.V
    j = col_sampler(U).draw(rng)
    gamma = apply_coord_step(state.x, state.res_u, U.col(j), j, U.col_sqnorms[j])
    state.res_v[j] += gamma
    q = col_sampler(V).draw(rng)
    apply_coord_step(state.b, state.res_v, V.col(q), q, V.col_sqnorms[q])
    state.t += 1
    state.flops += rgsrgs_step_flops(sys.m, sys.k)
    return j, q


_STEPS = {
    "rk-rk": rkrk_step,
    "rek-rk": rekrk_step,
    "rek-rek": rekrek_step,
    "rgs-rgs": rgsrgs_step,
}


def interlaced_step(method: str, sys: FactoredSystem, state: InterlacedState, rng: np.random.Generator):
    if method not in _STEPS:
        raise ValueError(f"unsupported pairing {method!r}; supported pairings are {PAIRINGS}")
    return _STEPS[method](sys, state, rng)


def run_interlaced(
    method: str,
    sys: FactoredSystem,
    budget: int,
    rng: np.random.Generator,
    *,
    recorder=None,
    stride: int | None = None,
    tolerance: float | None = None,
    error_fn=None,
) -> InterlacedState:
    """Run ``budget`` interlaced steps; budget-based stopping by default.

    recorder(t, value, flops) fires every stride-th step and at the
    final step, with value = error_fn(b) when error_fn is given, else
    the joint squared residual ||y - U x||^2 + ||x - V b||^2.  When a
    tolerance is given, that joint residual is checked every m steps
    and the run stops once both parts are at or below it.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    state = init_interlaced(method, sys)
    step = _STEPS[method]
    if stride is None:
        stride = max(1, budget // 500)
    if stride < 1:
        raise ValueError("stride must be at least 1")
    check_every = sys.m
    for t in range(1, budget + 1):
        step(sys, state, rng)
        stopped = False
        if tolerance is not None and t % check_every == 0:
            res_u = sys.y - sys.U.data @ state.x
            res_v = state.x - sys.V.data @ state.b
            if np.linalg.norm(res_u) <= tolerance and np.linalg.norm(res_v) <= tolerance:
                stopped = True
        if recorder is not None and (t % stride == 0 or t == budget or stopped):
            if error_fn is not None:
                value = float(error_fn(state.b))
            else:
                res_u = sys.y - sys.U.data @ state.x
                res_v = state.x - sys.V.data @ state.b
                value = float(np.dot(res_u, res_u) + np.dot(res_v, res_v))
            recorder(t, value, state.flops)
        if stopped:
            break
    return state


# --- expected-error bounds ---------------------------------------------------


@dataclass(frozen=True)
class BoundInputs:
    """Everything the expected-error bounds need, computed from the factors.

    alpha_u / alpha_v are the per-step contraction factors of U and V,
    theta_v = 1 / sigma_min^2(V), kappa_sq_u the squared condition
    number of U; x_star is the optimal solution of (U, y) and b_star
    the least-norm solution of V b = x_star, with their squared norms
    stored.  No product U @ V is formed.
    """

    alpha_u: float
    alpha_v: float
    theta_v: float
    kappa_sq_u: float
    b_star_sq: float
    x_star_sq: float


def bound_inputs(sys: FactoredSystem) -> BoundInputs:
    cu = rate_constants(sys.U)
    cv = rate_constants(sys.V)
    x_star = pinv_solve(sys.U, sys.y)
    b_star = pinv_solve(sys.V, x_star)
    return BoundInputs(
        alpha_u=cu.alpha,
        alpha_v=cv.alpha,
        theta_v=cv.theta,
        kappa_sq_u=cu.kappa_sq,
        b_star_sq=float(np.dot(b_star, b_star)),
        x_star_sq=float(np.dot(x_star, x_star)),
    )


def expected_error_bound(inputs: BoundInputs, variant: str, t: int) -> float:
    """Upper bound on E ||b_t - b_star||^2 after t interlaced steps.

    variant "a" is the consistent-data rk-rk bound

        alpha_v^t ||b_star||^2 + theta_v alpha_u^t ||x_star||^2

    and variant "b" the inconsistent-data rek-rk bound

        alpha_v^t ||b_star||^2
            + theta_v alpha_u^floor(t/2) (1 + 2 kappa_sq_u) ||x_star||^2.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if variant == "a":
        return inputs.alpha_v**t * inputs.b_star_sq + inputs.theta_v * inputs.alpha_u**t * inputs.x_star_sq
    if variant == "b":
        return (
            inputs.alpha_v**t * inputs.b_star_sq
            + inputs.theta_v * inputs.alpha_u ** (t // 2) * (1.0 + 2.0 * inputs.kappa_sq_u) * inputs.x_star_sq
        )
    raise ValueError(f"unknown bound variant {variant!r}; expected 'a' or 'b'")

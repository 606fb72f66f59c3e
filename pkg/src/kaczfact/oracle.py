"""Ground-truth solutions and convergence-rate constants.

Everything here is reference machinery: it computes the quantities the
randomized solvers are measured against (pseudo-inverse solutions,
singular values, per-step contraction factors).  It is deliberately
dense-SVD based and intended for desk-scale instances; the solvers
themselves never call into this module.

This is also the only production code allowed to materialize the full
product U @ V of a factored system (see ``factored_full_solution``).
The solvers only ever touch the factors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import DenseMatrix, matvec

__all__ = [
    "SvdFactors",
    "RateConstants",
    "svd",
    "pinv_solve",
    "rate_constants",
    "projector_rowspace",
    "factored_full_solution",
    "residual_norm",
]

# Singular values at or below rank_tol * sigma_max are treated as zero.
DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD ``A = left @ diag(singular_values) @ right.T``.

    ``left`` is (m, p) and ``right`` is (n, p) with orthonormal columns,
    p = min(m, n); ``singular_values`` is descending.  ``rank`` counts
    the singular values above the relative threshold used at creation.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray
    rank: int


@dataclass(frozen=True)
class RateConstants:
    """Per-step contraction quantities of a matrix.

    alpha = 1 - sigma_min_sq / frob_sq is the expected one-step error
    contraction factor of norm-weighted row (or column) projections;
    kappa_sq = sigma_max_sq / sigma_min_sq is the squared condition
    number over the nonzero spectrum; theta = 1 / sigma_min_sq scales
    cross-terms when one solve feeds another.  sigma_min_sq is the
    smallest *nonzero* squared singular value.
    """

    alpha: float
    kappa_sq: float
    theta: float
    sigma_min_sq: float
    sigma_max_sq: float
    frob_sq: float


def svd(A: DenseMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> SvdFactors:
    """Thin SVD with a relative rank cutoff."""
    if rank_tol < 0:
        raise ValueError("rank_tol must be non-negative")
    left, s, right_t = np.linalg.svd(A.data, full_matrices=False)
    sigma_max = float(s[0])
    if sigma_max == 0.0:
        raise ValueError("svd rank cutoff undefined for the zero matrix")
    rank = int(np.sum(s > rank_tol * sigma_max))
    return SvdFactors(left=left, singular_values=s, right=right_t.T, rank=rank)


def pinv_solve(A: DenseMatrix, y: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Minimum-norm least-squares solution pinv(A) @ y.

    This single expression realizes every notion of "optimal solution"
    the solvers target: the unique solution when A is square invertible,
    the least-squares solution when overdetermined, the least-norm
    solution when underdetermined, and the least-norm least-squares
    solution in the rank-deficient and inconsistent cases.
    """
    if y.shape != (A.rows,):
        raise ValueError(f"pinv_solve dimension mismatch: matrix is {A.rows}x{A.cols}, rhs has shape {y.shape}")
    f = svd(A, rank_tol)
    r = f.rank
    coeff = (f.left[:, :r].T @ y) / f.singular_values[:r]
    return f.right[:, :r] @ coeff


def rate_constants(A: DenseMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> RateConstants:
    """Contraction constants of A over its nonzero spectrum.

    Guarantees 0 <= alpha < 1: sigma_min_sq is positive by construction
    and never exceeds the squared Frobenius norm.
    """
    f = svd(A, rank_tol)
    s = f.singular_values
    sigma_max_sq = float(s[0]) ** 2
    sigma_min_sq = float(s[f.rank - 1]) ** 2
    frob_sq = A.frob_sq
    return RateConstants(
        alpha=1.0 - sigma_min_sq / frob_sq,
        kappa_sq=sigma_max_sq / sigma_min_sq,
        theta=1.0 / sigma_min_sq,
        sigma_min_sq=sigma_min_sq,
        sigma_max_sq=sigma_max_sq,
        frob_sq=frob_sq,
    )


def projector_rowspace(A: DenseMatrix, rank_tol: float = DEFAULT_RANK_TOL):
    """Orthogonal projector onto the row space of A, as a callable.

    Returns ``P`` with ``P(v) == pinv(A) @ A @ v`` computed stably from
    the right singular vectors.
    """
    f = svd(A, rank_tol)
    basis = f.right[:, : f.rank]

    def project(v: np.ndarray) -> np.ndarray:
        if v.shape != (A.cols,):
            raise ValueError(f"projector dimension mismatch: expected shape ({A.cols},), got {v.shape}")
        return basis @ (basis.T @ v)

    return project


def factored_full_solution(U: DenseMatrix, V: DenseMatrix, y: np.ndarray) -> np.ndarray:
    """pinv(U @ V) @ y, materializing the product.

    Desk-scale only: forming U @ V defeats the entire point of the
    factored solvers, so this lives here for error measurement and
    never inside a solver loop.
    """
    if U.cols != V.rows:
        raise ValueError(f"factor dimension mismatch: U is {U.rows}x{U.cols}, V is {V.rows}x{V.cols}")
    X = DenseMatrix(U.data @ V.data)
    return pinv_solve(X, y)


def residual_norm(A: DenseMatrix, y: np.ndarray, beta: np.ndarray) -> float:
    """||y - A @ beta||, the plain residual used by stopping checks."""
    return float(np.linalg.norm(y - matvec(A, beta)))

"""Small dense linear algebra: products with A and Aᵀ, spectral norm, determinants."""

import logging
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from ..errors import ConvergenceError, DimensionMismatchError
from ..models import PayoffMatrix

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
MAX_DET_DIMENSION = 64
START_PERTURBATION = 1e-3


class SquareMatrix(BaseModel):
    """A dense n×n real matrix (Jacobians of the update maps)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> np.ndarray:
        arr = np.array(value, dtype=np.float64)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix has non-finite entries")
        arr.flags.writeable = False
        return arr

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        return SquareMatrix(entries=self.entries @ other.entries)

    @classmethod
    def identity(cls, n: int) -> "SquareMatrix":
        return cls(entries=np.eye(n))


def _entries(A: PayoffMatrix | np.ndarray) -> np.ndarray:
    return A.entries if isinstance(A, PayoffMatrix) else np.asarray(A, dtype=np.float64)


def mat_vec(A: PayoffMatrix | np.ndarray, v: Any) -> np.ndarray:
    """A v; component i is Σⱼ A[i,j]·v[j]."""
    M = _entries(A)
    vec = np.asarray(v, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != M.shape[1]:
        raise DimensionMismatchError(
            f"cannot multiply {M.shape[0]}x{M.shape[1]} matrix by vector of shape {vec.shape}"
        )
    return M @ vec


def mat_tvec(A: PayoffMatrix | np.ndarray, v: Any) -> np.ndarray:
    """Aᵀ v; component j is Σᵢ A[i,j]·v[i]."""
    M = _entries(A)
    vec = np.asarray(v, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != M.shape[0]:
        raise DimensionMismatchError(
            f"cannot multiply transpose of {M.shape[0]}x{M.shape[1]} matrix "
            f"by vector of shape {vec.shape}"
        )
    return M.T @ vec


def spectral_norm(
    A: PayoffMatrix | np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """
    Largest singular value ‖A‖ by power iteration on AᵀA.

    Starts from the normalized all-ones vector. The result is the top
    eigenvalue of AᵀA whenever it exceeds half the trace, since the remaining
    eigenvalues sum to less. Otherwise the iteration is repeated from the same
    start with its first coordinate perturbed by 1e-3 and the larger estimate
    is kept, so a start orthogonal to the top singular space (or lying in the
    kernel) is recovered deterministically. Converged when successive Rayleigh
    quotients differ by less than `tol` relative to the current one.

    Raises:
        ValueError: If tol is not positive.
        ConvergenceError: If max_iter iterations do not reach tol.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    M = _entries(A)
    gram = M.T @ M
    n = gram.shape[0]
    if not np.any(gram):
        return 0.0

    start = np.ones(n) / np.sqrt(n)
    estimate = _power_iterate(gram, start, tol, max_iter)
    if 2.0 * estimate > float(np.trace(gram)) * (1.0 + tol):
        return float(np.sqrt(estimate))

    probe = np.ones(n)
    probe[0] += START_PERTURBATION
    probe /= np.linalg.norm(probe)
    probed = _power_iterate(gram, probe, tol, max_iter)
    if probed > estimate * (1.0 + tol):
        logger.debug(f"Perturbed start found larger eigenvalue {probed} > {estimate}")
        estimate = probed

    return float(np.sqrt(estimate))


def _power_iterate(gram: np.ndarray, v: np.ndarray, tol: float, max_iter: int) -> float:
    """Dominant eigenvalue of the PSD matrix `gram` reachable from `v` (0 if v is in its kernel)."""
    estimate = float(v @ gram @ v)
    for iteration in range(1, max_iter + 1):
        w = gram @ v
        w_norm = float(np.linalg.norm(w))
        if w_norm == 0.0:
            return 0.0
        v = w / w_norm
        new_estimate = float(v @ gram @ v)
        if abs(new_estimate - estimate) < tol * abs(new_estimate):
            logger.debug(f"Power iteration converged after {iteration} iterations")
            return new_estimate
        estimate = new_estimate

    raise ConvergenceError(
        "spectral norm did not converge", float(np.sqrt(max(estimate, 0.0))), max_iter
    )


def det(M: SquareMatrix | np.ndarray) -> float:
    """
    Determinant by LU factorisation with partial pivoting.

    Singular matrices return 0 up to rounding.
    """
    entries = M.entries if isinstance(M, SquareMatrix) else np.asarray(M, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionMismatchError(f"determinant needs a square matrix, got {entries.shape}")
    if entries.shape[0] > MAX_DET_DIMENSION:
        raise DimensionMismatchError(
            f"determinant limited to {MAX_DET_DIMENSION}x{MAX_DET_DIMENSION}, got {entries.shape}"
        )
    return float(np.linalg.det(entries))

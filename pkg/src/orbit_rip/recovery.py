"""Sparse recovery solvers used as success oracles in experiments."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateOperatorError, InvalidArgumentError, ShapeError

PINV_RCOND = 1e-10


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    estimate: np.ndarray
    iterations: int
    converged: bool
    relative_error: Optional[float] = None
    rank_deficient: bool = False


def _relative_error(estimate, truth):
    if truth is None:
        return None
    truth = np.asarray(truth)
    return float(np.linalg.norm(estimate - truth) / np.linalg.norm(truth))


def _check_shapes(phi, y, s):
    phi = np.asarray(phi)
    y = np.asarray(y)
    if phi.ndim != 2 or y.shape != (phi.shape[0],):
        raise ShapeError(f"Phi {phi.shape} and y {y.shape} do not agree")
    if not 1 <= s <= phi.shape[1]:
        raise InvalidArgumentError(f"need 1 <= s <= {phi.shape[1]}, got {s}")
    return phi.astype(np.complex128, copy=False), y.astype(np.complex128, copy=False)


def hard_threshold(x, s):
    """Keep the ``s`` largest-modulus entries; ties go to the lower index."""
    x = np.asarray(x)
    if not 1 <= s <= x.shape[0]:
        raise InvalidArgumentError(f"need 1 <= s <= {x.shape[0]}, got {s}")
    keep = np.argsort(-np.abs(x), kind="stable")[:s]
    out = np.zeros_like(x)
    out[keep] = x[keep]
    return out


def iht(phi, y, s, max_iters=500, tol=1e-8, truth=None):
    """Normalized iterative hard thresholding with step ``1 / ||Phi||^2``.

    Starts from zero and stops once an update moves the iterate by at most
    ``tol * max(1, ||x||)`` or the residual drops to ``tol``.
    """
    phi, y = _check_shapes(phi, y, s)
    norm = np.linalg.norm(phi, 2)
    if norm == 0:
        raise DegenerateOperatorError("IHT needs a nonzero measurement matrix")
    mu = 1.0 / norm**2
    phi_h = phi.conj().T
    x = np.zeros(phi.shape[1], dtype=np.complex128)
    converged = np.linalg.norm(y) <= tol
    it = 0
    while not converged and it < max_iters:
        it += 1
        x_new = hard_threshold(x + mu * (phi_h @ (y - phi @ x)), s)
        step = np.linalg.norm(x_new - x)
        converged = step <= tol * max(1.0, np.linalg.norm(x)) or np.linalg.norm(y - phi @ x_new) <= tol
        x = x_new
    return RecoveryResult(x, it, bool(converged), _relative_error(x, truth))


def omp(phi, y, s, truth=None):
    """Orthogonal matching pursuit with normalized column correlations.

    Each round adds the column maximizing ``|<r, phi_j>| / ||phi_j||`` (ties
    to the lower index) and refits by least squares on the chosen support.
    """
    phi, y = _check_shapes(phi, y, s)
    if s > phi.shape[0]:
        raise InvalidArgumentError(f"OMP needs s <= m = {phi.shape[0]}, got {s}")
    norms = np.linalg.norm(phi, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    support = []
    coef = np.zeros(0, dtype=np.complex128)
    residual = y.copy()
    rank_deficient = False
    stop = 1e-12 * max(1.0, np.linalg.norm(y))
    for _ in range(s):
        if np.linalg.norm(residual) <= stop:
            break
        corr = np.abs(phi.conj().T @ residual) / safe
        corr[norms == 0] = 0.0
        corr[support] = -1.0
        support.append(int(np.argmax(corr)))
        sub = phi[:, support]
        gram = sub.conj().T @ sub
        ev = np.linalg.eigvalsh(gram)
        if ev[0] <= PINV_RCOND * ev[-1]:
            rank_deficient = True
            coef = np.linalg.pinv(sub, rcond=PINV_RCOND) @ y
        else:
            coef = np.linalg.solve(gram, sub.conj().T @ y)
        residual = y - sub @ coef
    x = np.zeros(phi.shape[1], dtype=np.complex128)
    x[support] = coef
    return RecoveryResult(x, len(support), True, _relative_error(x, truth), rank_deficient)


def recovery_success(truth, result, threshold=1e-4):
    """True iff ``||estimate - truth|| / ||truth|| <= threshold``."""
    truth = np.asarray(truth)
    if not np.any(truth):
        raise InvalidArgumentError("success is undefined for a zero ground truth")
    return _relative_error(result.estimate, truth) <= threshold

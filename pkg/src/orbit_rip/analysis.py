"""Orbit constants, restricted isometry constants and measurement budgets."""
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._rng import rng_for
from .errors import (
    DegenerateColumnError,
    EnumerationBudgetError,
    InvalidArgumentError,
    NumericError,
    SizeError,
)

ORBIT_DIM_CAP = 2048
DEFAULT_BUDGET = 2_000_000
FULL_SVD_CAP = 64


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (tuple, list, np.ndarray)):
        return " ".join(_fmt(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in value)
    return str(value)


def to_record(pairs):
    """Render ``(key, value)`` pairs as ``key = value`` lines."""
    return "\n".join(f"{k} = {_fmt(v)}" for k, v in pairs) + "\n"


@dataclass(frozen=True, eq=False)
class OrbitConstantReport:
    value: float
    argmax_index: int
    witness: np.ndarray
    per_index: np.ndarray

    def to_record(self):
        return to_record([
            ("orbit_constant", float(self.value)),
            ("argmax_index", self.argmax_index),
            ("per_index", [float(v) for v in self.per_index]),
        ])


@dataclass(frozen=True)
class RipReport:
    s: int
    delta: float
    argmax_support: tuple
    n_supports_checked: int

    def to_record(self):
        return to_record([
            ("s", self.s),
            ("delta", float(self.delta)),
            ("argmax_support", self.argmax_support),
            ("n_supports_checked", self.n_supports_checked),
        ])


def spectral_norm(M, tol=1e-12, max_iter=10_000):
    """Largest singular value.

    Uses a full SVD when the smaller side is at most 64, otherwise power
    iteration on the smaller Gram matrix with a Rayleigh-quotient stop.
    """
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    if min(M.shape) <= FULL_SVD_CAP:
        return float(np.linalg.svd(M, compute_uv=False)[0])
    gram = M @ M.conj().T if M.shape[0] <= M.shape[1] else M.conj().T @ M
    v = rng_for(0, "power_iteration").standard_normal(gram.shape[0]).astype(gram.dtype)
    v /= np.linalg.norm(v)
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = gram @ v
        new = float(np.real(np.vdot(v, w)))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(new - lam) <= tol * abs(new):
            return math.sqrt(max(new, 0.0))
        lam = new
    raise NumericError(f"power iteration did not converge in {max_iter} iterations", iterations=max_iter)


def orbit_constant_exact(rep, omega):
    """Smallest constant C with
    ``||R_Omega(pi(g) y)^* e_j|| / sqrt(m) <= sqrt(C/m) ||y||`` for all j, y.

    For coordinate j, the map ``y -> (conj((pi(w_l) y)_j))_l`` has the
    operator norm of ``K_j``, whose l-th row is row j of ``pi(w_l)``. So
    ``C = max_j sigma_max(K_j)^2``. The witness is the top right-singular
    vector of the extremal ``K_j``; it attains the bound with equality.
    Monomial representations take an exact integer-counting path.
    """
    if rep.dim > ORBIT_DIM_CAP:
        raise SizeError(f"orbit constant capped at dim {ORBIT_DIM_CAP}, got {rep.dim}")
    if omega.group.label != rep.group.label:
        raise InvalidArgumentError(
            f"sampling set lives in {omega.group.label}, representation in {rep.group.label}"
        )
    if rep.is_monomial:
        # each row of K_j has one unit-modulus entry, at column perm_w[j], so
        # K_j^* K_j is diagonal with the multiplicities of those columns
        cols = np.array([rep.monomial_form(w)[0] for w in omega.elements], dtype=np.intp)
        counts = np.zeros((rep.dim, rep.dim), dtype=np.int64)
        np.add.at(counts, (np.broadcast_to(np.arange(rep.dim), cols.shape), cols), 1)
        per_index = counts.max(axis=1).astype(float)
        jmax = int(np.argmax(per_index))
        witness = np.zeros(rep.dim, dtype=np.complex128)
        witness[int(np.argmax(counts[jmax]))] = 1.0
    else:
        per_index = np.empty(rep.dim)
        for j in range(rep.dim):
            per_index[j] = spectral_norm(rep.row_stack(j, omega.elements)) ** 2
        jmax = int(np.argmax(per_index))
        _, _, vh = np.linalg.svd(rep.row_stack(jmax, omega.elements))
        witness = vh[0].conj()
    per_index.setflags(write=False)
    return OrbitConstantReport(float(per_index[jmax]), jmax, witness, per_index)


def orbit_map(rep, omega, j, y):
    """``R_Omega(pi(g) y)^*_{g} e_j / sqrt(m)``: the quantity bounded by the orbit constant."""
    return np.array([np.conj(rep.apply(w, y)[j]) for w in omega.elements]) / math.sqrt(omega.m)


def omega_two(omega):
    """Distinct dilation coordinates ``{l : (k, l) in Omega}`` of an affine sampling set."""
    if omega.group.kind != "affine":
        raise InvalidArgumentError(f"omega_two needs an affine group, got {omega.group.label}")
    return frozenset(omega.group.element(w)[1] for w in omega.elements)


def restricted_isometry_constant(phi, s, budget=DEFAULT_BUDGET, backend=None):
    """Exact ``delta_s`` by enumerating all ``binom(n, s)`` supports.

    ``delta_s = max_{|S| = s} ||Phi_S^* Phi_S - I||_2``; supports are visited
    lexicographically and the first maximizer is reported.
    """
    phi = np.asarray(phi)
    if phi.ndim != 2:
        raise InvalidArgumentError(f"expected a matrix, got shape {phi.shape}")
    n = phi.shape[1]
    if not 1 <= s <= n:
        raise InvalidArgumentError(f"need 1 <= s <= n = {n}, got s = {s}")
    total = math.comb(n, s)
    if total > budget:
        raise EnumerationBudgetError(f"binom({n}, {s}) = {total} supports exceeds budget {budget}")
    gram = np.ascontiguousarray(phi.conj().T @ phi, dtype=np.complex128)
    delta, support, count = _backend.get_backend(backend).rip_search(gram, int(s))
    return RipReport(int(s), float(delta), tuple(int(i) for i in support), int(count))


def extremal_vector(phi, support):
    """Unit vector on ``support`` maximizing ``| ||Phi x||^2 - 1 |``."""
    phi = np.asarray(phi)
    support = list(support)
    sub = phi[:, support]
    w, v = np.linalg.eigh(sub.conj().T @ sub - np.eye(len(support)))
    k = 0 if abs(w[0]) >= abs(w[-1]) else len(w) - 1
    x = np.zeros(phi.shape[1], dtype=np.complex128)
    x[support] = v[:, k]
    return x


def coherence(phi):
    """``max_{i != j} |<phi_i, phi_j>| / (||phi_i|| ||phi_j||)``."""
    phi = np.asarray(phi)
    norms = np.linalg.norm(phi, axis=0)
    if np.any(norms == 0):
        raise DegenerateColumnError(f"zero column(s) at {np.flatnonzero(norms == 0).tolist()}")
    if phi.shape[1] < 2:
        return 0.0
    unit = phi / norms
    g = np.abs(unit.conj().T @ unit)
    np.fill_diagonal(g, 0.0)
    return float(g.max())


def min_measurements(s, n, delta, eta, C=1.0, c=1.0):
    """``ceil(c delta^-2 s C max{(ln(sC) ln n)^2, ln(1/eta)})`` with natural logs.

    ``c`` is the unspecified absolute constant of the guarantee; it is the
    caller's to choose.
    """
    if int(s) != s or int(n) != n or not 1 <= s <= n:
        raise InvalidArgumentError(f"need integers 1 <= s <= n, got s={s}, n={n}")
    if not (0 < delta < 1 and 0 < eta < 1):
        raise InvalidArgumentError(f"delta and eta must lie in (0, 1), got {delta}, {eta}")
    if not C >= 1:
        raise InvalidArgumentError(f"C must be >= 1, got {C}")
    if not c > 0:
        raise InvalidArgumentError(f"c must be > 0, got {c}")
    first = (math.log(s * C) * math.log(n)) ** 2
    return math.ceil(c * s * C * max(first, math.log(1.0 / eta)) / delta**2)

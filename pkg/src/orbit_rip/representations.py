"""Unitary (projective) representations of finite groups.

A :class:`Representation` maps group elements to unitary ``dim x dim``
complex matrices. Every built-in realization is monomial (a permutation with
unit-modulus phases), and those carry a compact ``(perm, phase)`` form so
that :meth:`Representation.apply` costs O(n). Conjugated or user-supplied
representations fall back to dense matrices.

Convention: ``(pi(g) x)[i] = phase[i] * x[perm[i]]``.
"""
import numpy as np

from .errors import InvalidArgumentError, InvalidConjugatorError, ShapeError, SizeError
from .groups import TABLE_CAP, _require_prime, make_affine, make_cyclic, make_direct_product

ORDINARY = "ordinary"
PROJECTIVE = "projective"


class Representation:
    def __init__(self, group, dim, kind=ORDINARY, label="pi", monomial=None, dense=None):
        if (monomial is None) == (dense is None):
            raise InvalidArgumentError("give exactly one of monomial= or dense=")
        if kind not in (ORDINARY, PROJECTIVE):
            raise InvalidArgumentError(f"unknown representation kind {kind!r}")
        self.group = group
        self.dim = int(dim)
        self.kind = kind
        self.label = label
        self._monomial = monomial
        self._dense = dense

    def __repr__(self):
        return f"Representation({self.label}, group={self.group.label}, dim={self.dim}, kind={self.kind})"

    @property
    def is_monomial(self):
        return self._monomial is not None

    def _check_element(self, g):
        if not 0 <= g < self.group.order:
            raise InvalidArgumentError(f"{g} is not an element index of {self.group.label}")

    def monomial_form(self, g):
        """``(perm, phase)`` for monomial reps; ``phase`` is None for 0/1 permutations."""
        if not self.is_monomial:
            raise InvalidArgumentError(f"{self.label} has no monomial form")
        self._check_element(g)
        return self._monomial(int(g))

    def matrix_of(self, g):
        self._check_element(g)
        if not self.is_monomial:
            return np.array(self._dense(int(g)), dtype=np.complex128)
        perm, phase = self._monomial(int(g))
        mat = np.zeros((self.dim, self.dim), dtype=np.complex128)
        mat[np.arange(self.dim), perm] = 1.0 if phase is None else phase
        return mat

    def matrices(self):
        """Dense stack ``(|G|, n, n)``; meant for small groups."""
        return np.stack([self.matrix_of(g) for g in range(self.group.order)])

    def apply(self, g, x):
        """``pi(g) @ x`` for a vector or a stack of column vectors."""
        x = np.asarray(x)
        if x.ndim not in (1, 2) or x.shape[0] != self.dim:
            raise ShapeError(f"expected leading dimension {self.dim}, got shape {x.shape}")
        self._check_element(g)
        if not self.is_monomial:
            return self._dense(int(g)) @ x
        perm, phase = self._monomial(int(g))
        out = x[perm].astype(np.complex128)
        if phase is not None:
            out *= phase if x.ndim == 1 else phase[:, None]
        return out

    def row_stack(self, j, elements):
        """Matrix whose l-th row is row ``j`` of ``pi(elements[l])``."""
        elements = [int(w) for w in elements]
        out = np.zeros((len(elements), self.dim), dtype=np.complex128)
        for l, w in enumerate(elements):
            if self.is_monomial:
                perm, phase = self.monomial_form(w)
                out[l, perm[j]] = 1.0 if phase is None else phase[j]
            else:
                out[l] = self.matrix_of(w)[j]
        return out

    def cocycle(self, g, h):
        """The scalar ``lambda(g, h)`` with ``pi(g) pi(h) = lambda pi(gh)``.

        Read off at the first nonzero entry of ``pi(gh)`` (row-major).
        """
        target = self.matrix_of(self.group.mul(g, h))
        prod = self.matrix_of(g) @ self.matrix_of(h)
        mags = np.abs(target).ravel()
        first = int(np.flatnonzero(mags > 1e-8 * mags.max())[0])
        return complex(prod.ravel()[first] / target.ravel()[first])


def dft_matrix(n):
    """Unitary DFT, ``F[j, k] = exp(-2 pi i jk / n) / sqrt(n)``."""
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n) / np.sqrt(n)


def _unit_phase(numerators, n, sign=1):
    # reduce mod n first so exp() sees small arguments
    return np.exp(sign * 2j * np.pi * (np.asarray(numerators) % n) / n)


def left_regular(G):
    """``(L(g) f)(h) = f(g^{-1} h)`` on ``C^G``."""
    if G.order > TABLE_CAP:
        raise SizeError(f"left regular representation capped at order {TABLE_CAP}, got {G.order}")
    idx = np.arange(G.order)

    def monomial(g):
        return np.asarray(G.mul(G.inv(g), idx), dtype=np.int64), None

    return Representation(G, G.order, ORDINARY, f"L[{G.label}]", monomial=monomial)


def affine_quasi_regular(p):
    """``(rho(k,l) f)(j) = f(l^{-1}(j - k))`` on ``C^p``."""
    p = _require_prime(p)
    if p > TABLE_CAP:
        raise SizeError(f"affine representation capped at p <= {TABLE_CAP}, got {p}")
    G = make_affine(p)
    j = np.arange(p)

    def monomial(g):
        k, l = G.element(g)
        return (pow(l, -1, p) * (j - k)) % p, None

    return Representation(G, p, ORDINARY, f"rho[{G.label}]", monomial=monomial)


def trivial(G, n):
    """``pi(g) = I_n`` for every g."""
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"dimension must be >= 1, got {n}")
    ident = np.arange(int(n))
    return Representation(G, int(n), ORDINARY, f"trivial[{G.label},{n}]",
                          monomial=lambda g: (ident, None))


def conjugate(rep, U, tol=1e-10):
    """The realization ``g -> U pi(g) U^*``."""
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (rep.dim, rep.dim):
        raise ShapeError(f"conjugator must be {rep.dim}x{rep.dim}, got {U.shape}")
    if np.max(np.abs(U.conj().T @ U - np.eye(rep.dim))) > tol:
        raise InvalidConjugatorError("conjugator is not unitary")
    Uh = U.conj().T

    def dense(g):
        return U @ rep.matrix_of(g) @ Uh

    return Representation(rep.group, rep.dim, rep.kind, f"conj[{rep.label}]", dense=dense)


def fourier_realization(n):
    """Left regular representation of Z_n conjugated by the unitary DFT.

    Every matrix is diagonal, ``diag_j = exp(-2 pi i j g / n)``, and is stored
    in that compact form.
    """
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    n = int(n)
    G = make_cyclic(n)
    ident = np.arange(n)

    def monomial(g):
        return ident, _unit_phase(ident * g, n, sign=-1)

    return Representation(G, n, ORDINARY, f"fourier[Z{n}]", monomial=monomial)


def weyl_heisenberg(n):
    """Projective representation ``(k, l) -> M_l T_k`` of Z_n x Z_n on C^n.

    ``(T_k x)(j) = x(j - k)`` and ``(M_l x)(j) = exp(2 pi i l j / n) x(j)``.
    """
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"n must be >= 2, got {n}")
    n = int(n)
    Zn = make_cyclic(n)
    G = make_direct_product(Zn, Zn)
    j = np.arange(n)

    def monomial(g):
        k, l = divmod(g, n)
        return (j - k) % n, _unit_phase(l * j, n)

    return Representation(G, n, PROJECTIVE, f"WH[{n}]", monomial=monomial)


def from_matrices(G, matrices, kind=ORDINARY, label="custom"):
    """Dense representation from an explicit ``(|G|, n, n)`` stack. Not validated."""
    mats = np.asarray(matrices, dtype=np.complex128)
    if mats.ndim != 3 or mats.shape[0] != G.order or mats.shape[1] != mats.shape[2]:
        raise ShapeError(f"expected shape ({G.order}, n, n), got {mats.shape}")
    mats = mats.copy()
    mats.setflags(write=False)
    return Representation(G, mats.shape[1], kind, label, dense=lambda g: mats[g])


def representation_residuals(rep):
    """Worst-case invariant residuals over all elements and all pairs.

    Returns a dict with ``unitarity`` (max-norm of ``pi^* pi - I``),
    ``homomorphism`` (max-norm of ``pi(g)pi(h) - lambda pi(gh)``),
    ``cocycle_modulus`` (max ``||lambda| - 1|``), ``cocycle_phase``
    (max ``|lambda - 1|``, which must vanish for ordinary reps) and
    ``identity`` (distance of ``pi(e)`` from a unimodular multiple of I).
    """
    G = rep.group
    mats = rep.matrices()
    n = rep.dim
    eye = np.eye(n)
    unitarity = float(np.max(np.abs(np.einsum("gji,gjk->gik", mats.conj(), mats) - eye)))

    table = np.asarray(G.mul(np.arange(G.order)[:, None], np.arange(G.order)[None, :]))
    hom = mod = phase = 0.0
    for g in range(G.order):
        prods = mats[g] @ mats
        targets = mats[table[g]]
        flat_t = targets.reshape(G.order, -1)
        flat_p = prods.reshape(G.order, -1)
        first = np.argmax(np.abs(flat_t) > 1e-8 * np.abs(flat_t).max(axis=1, keepdims=True), axis=1)
        rows = np.arange(G.order)
        lam = flat_p[rows, first] / flat_t[rows, first]
        hom = max(hom, float(np.max(np.abs(prods - lam[:, None, None] * targets))))
        mod = max(mod, float(np.max(np.abs(np.abs(lam) - 1.0))))
        phase = max(phase, float(np.max(np.abs(lam - 1.0))))

    ident = mats[G.identity]
    lam0 = ident[0, 0]
    identity = float(max(abs(abs(lam0) - 1.0), np.max(np.abs(ident - lam0 * eye))))
    return {
        "unitarity": unitarity,
        "homomorphism": hom,
        "cocycle_modulus": mod,
        "cocycle_phase": phase,
        "identity": identity,
    }

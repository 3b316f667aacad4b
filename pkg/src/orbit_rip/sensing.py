"""Random generator vectors and orbit measurement matrices.

The measurement matrix for a representation ``pi``, sampling set
``Omega = (w_1, ..., w_m)`` and generator ``xi`` has rows

    Phi[l, :] = conj(pi(w_l) xi) / sqrt(m),

so that ``(Phi x)_l = <x, pi(w_l) xi> / sqrt(m)`` with the inner product
conjugate-linear in its second argument.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._rng import rng_for
from .errors import InvalidArgumentError, ShapeError
from .groups import SamplingSet

DISTRIBUTIONS = ("gaussian", "rademacher", "steinhaus")

# Documentation only; nothing consumes L numerically.
SUBGAUSSIAN_NOTES = {
    "gaussian": "real standard normal, L = 1",
    "rademacher": "uniform on {-1, +1}, bounded hence subgaussian",
    "steinhaus": "uniform on the complex unit circle, bounded hence subgaussian",
}


@dataclass(frozen=True)
class GeneratorSpec:
    distribution: str
    dim: int
    seed: int = 0

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise InvalidArgumentError(
                f"unknown distribution {self.distribution!r}; choose from {DISTRIBUTIONS}"
            )
        if self.dim < 1:
            raise InvalidArgumentError(f"dim must be >= 1, got {self.dim}")


def draw_generator(spec):
    """i.i.d. mean-zero entries with ``E|xi_i|^2 = 1``, as a complex vector."""
    rng = rng_for(spec.seed, "generator", spec.distribution)
    n = spec.dim
    if spec.distribution == "gaussian":
        real = rng.standard_normal(n)
    elif spec.distribution == "rademacher":
        real = rng.integers(0, 2, size=n) * 2.0 - 1.0
    else:
        return np.exp(2j * np.pi * rng.random(n))
    return real.astype(np.complex128)


@dataclass(frozen=True, eq=False)
class MeasurementMatrix:
    entries: np.ndarray
    rep_label: str
    omega: SamplingSet
    xi: np.ndarray
    generator: Optional[GeneratorSpec] = None
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def measure(self, x):
        return self.entries @ np.asarray(x)


def build_measurement_matrix(rep, omega, xi, generator=None):
    xi = np.asarray(xi, dtype=np.complex128)
    if xi.shape != (rep.dim,):
        raise ShapeError(f"generator must have shape ({rep.dim},), got {xi.shape}")
    if omega.group.order != rep.group.order or omega.group.label != rep.group.label:
        raise InvalidArgumentError(
            f"sampling set lives in {omega.group.label}, representation in {rep.group.label}"
        )
    m = omega.m
    rows = np.empty((m, rep.dim), dtype=np.complex128)
    for l, w in enumerate(omega.elements):
        rows[l] = rep.apply(w, xi)
    entries = rows.conj() / np.sqrt(m)
    entries.setflags(write=False)
    return MeasurementMatrix(entries, rep.label, omega, xi, generator)


def partial_circulant_direct(xi, omega):
    """Partial circulant matrix by index arithmetic: ``conj(xi[(j - w_l) mod n]) / sqrt(m)``."""
    xi = np.asarray(xi, dtype=np.complex128)
    n = xi.shape[0]
    w = omega.as_array()
    if w.max() >= n:
        raise InvalidArgumentError("sampling set is not a subset of Z_n")
    cols = (np.arange(n)[None, :] - w[:, None]) % n
    return xi[cols].conj() / np.sqrt(len(w))


def write_matrix(path, phi):
    """Text export: ``m n`` header, then ``re im`` per entry in row-major order."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {phi.shape}")
    m, n = phi.shape
    lines = [f"{m} {n}"]
    lines += [f"{z.real:.17g} {z.imag:.17g}" for z in phi.ravel()]
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_matrix(path):
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    lines = text.split("\n")
    try:
        m, n = (int(t) for t in lines[0].split())
        body = [ln for ln in lines[1:] if ln.strip()]
        if len(body) != m * n:
            raise ShapeError(f"header says {m}x{n} but found {len(body)} entries")
        vals = np.array([[float(t) for t in ln.split()] for ln in body], dtype=np.float64).reshape(-1, 2)
    except ValueError as exc:
        raise ShapeError(f"malformed matrix file: {exc}") from exc
    out = np.empty(m * n, dtype=np.complex128)
    out.real, out.imag = vals[:, 0], vals[:, 1]
    return out.reshape(m, n)

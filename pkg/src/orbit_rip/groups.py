"""Finite groups realized as index arithmetic on ``{0, ..., |G|-1}``.

Elements are dense integer indices so that representation matrices can be
indexed by group elements directly. Structured groups (affine, products)
carry an index codec, exposed through :meth:`FiniteGroup.element` and
:meth:`FiniteGroup.index`.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._rng import rng_for
from .errors import (
    GroupAxiomError,
    InfeasibleSampleError,
    InvalidArgumentError,
    InvalidOrderError,
    SizeError,
)

TABLE_CAP = 4096
EXHAUSTIVE_CAP = 64
RANDOM_TRIPLES = 100_000
PRIME_CAP = 10**6


class FiniteGroup:
    """A finite group on element indices ``0 .. order-1``.

    ``mul`` and ``inv`` must accept numpy integer arrays (broadcasting) as
    well as plain ints; all built-in constructors use modular arithmetic
    that satisfies this.
    """

    def __init__(self, order, mul, inv, identity=0, label="G", kind="custom",
                 params=(), encode=None, decode=None):
        if order < 1:
            raise InvalidOrderError(f"group order must be positive, got {order}")
        self.order = int(order)
        self.identity = int(identity)
        self.label = label
        self.kind = kind
        self.params = params
        self._mul = mul
        self._inv = inv
        self._encode = encode
        self._decode = decode

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def elements(self):
        return np.arange(self.order)

    @cached_property
    def cayley_table(self):
        """``table[a, b] = mul(a, b)``; None above the materialization cap."""
        if self.order > TABLE_CAP:
            return None
        idx = np.arange(self.order)
        table = np.asarray(self._mul(idx[:, None], idx[None, :]), dtype=np.int32)
        table.setflags(write=False)
        return table

    @cached_property
    def inverse_table(self):
        table = np.asarray(self._inv(np.arange(self.order)), dtype=np.int64)
        table.setflags(write=False)
        return table

    def mul(self, a, b):
        table = self.__dict__.get("cayley_table")
        if table is not None:
            out = table[a, b]
        else:
            out = self._mul(np.asarray(a), np.asarray(b))
        return int(out) if np.ndim(out) == 0 else np.asarray(out, dtype=np.int64)

    def inv(self, a):
        out = self.inverse_table[a]
        return int(out) if np.ndim(out) == 0 else out

    def element(self, idx):
        """Structured form of an index, e.g. ``(k, l)`` for the affine group."""
        if not 0 <= idx < self.order:
            raise InvalidArgumentError(f"index {idx} outside {self.label}")
        return self._decode(int(idx)) if self._decode else int(idx)

    def index(self, elem):
        idx = self._encode(elem) if self._encode else int(elem)
        if not 0 <= idx < self.order:
            raise InvalidArgumentError(f"{elem!r} is not an element of {self.label}")
        return idx

    def is_abelian(self):
        if self.order <= TABLE_CAP:
            t = self.cayley_table
            return bool(np.array_equal(t, t.T))
        rng = rng_for(0, "abelian", self.label)
        a, b = rng.integers(0, self.order, size=(2, RANDOM_TRIPLES))
        return bool(np.array_equal(self._mul(a, b), self._mul(b, a)))

    def verify(self, seed=0, latin=True):
        """Check the group axioms; raise :class:`GroupAxiomError` on failure.

        Associativity is checked exhaustively up to order 64 and on 10^5
        random triples above that.
        """
        n = self.order
        idx = np.arange(n)
        e = self.identity
        if not (np.array_equal(self._mul(e, idx), idx) and np.array_equal(self._mul(idx, e), idx)):
            raise GroupAxiomError(f"{self.label}: {e} is not a two-sided identity")
        inv = np.asarray(self._inv(idx))
        if inv.min() < 0 or inv.max() >= n:
            raise GroupAxiomError(f"{self.label}: inverse leaves the index range")
        if not (np.all(self._mul(idx, inv) == e) and np.all(self._mul(inv, idx) == e)):
            raise GroupAxiomError(f"{self.label}: inverse map is wrong")

        if n <= EXHAUSTIVE_CAP:
            a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
        else:
            rng = rng_for(seed, "associativity", self.label)
            a, b, c = rng.integers(0, n, size=(3, RANDOM_TRIPLES))
        left = self._mul(self._mul(a, b), c)
        right = self._mul(a, self._mul(b, c))
        if not np.array_equal(left, right):
            raise GroupAxiomError(f"{self.label}: multiplication is not associative")

        if latin and n <= TABLE_CAP:
            t = self.cayley_table
            if t.min() < 0 or t.max() >= n:
                raise GroupAxiomError(f"{self.label}: product leaves the index range")
            if not (np.all(np.sort(t, axis=1) == idx) and np.all(np.sort(t, axis=0) == idx[:, None])):
                raise GroupAxiomError(f"{self.label}: Cayley table is not a Latin square")
        return True


def _checked(group):
    group.verify(latin=group.order <= 256)
    return group


def make_cyclic(n):
    """The cyclic group Z_n under addition mod n."""
    if int(n) != n or n < 1:
        raise InvalidOrderError(f"cyclic group needs n >= 1, got {n}")
    n = int(n)
    return _checked(FiniteGroup(
        n,
        mul=lambda a, b: (a + b) % n,
        inv=lambda a: (n - a) % n,
        identity=0,
        label=f"Z{n}",
        kind="cyclic",
        params=(n,),
    ))


def is_prime(p):
    if int(p) != p or p < 2:
        return False
    p = int(p)
    if p > PRIME_CAP:
        raise InvalidArgumentError(f"primality check is capped at {PRIME_CAP}, got {p}")
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def _require_prime(p):
    if not is_prime(p):
        raise InvalidArgumentError(f"{p} is not prime")
    return int(p)


def affine_index(p, k, l):
    """Index of ``(k, l)`` in ``make_affine(p)``."""
    return (k % p) * (p - 1) + (l % p) - 1


def make_affine(p):
    """The affine group Z_p x Z_p^* with ``(k,l)(k',l') = (k + l k', l l')`` mod p.

    ``(k, l)`` is stored at index ``k*(p-1) + (l-1)``.
    """
    p = _require_prime(p)
    q = p - 1
    inverses = np.zeros(p, dtype=np.int64)
    for l in range(1, p):
        inverses[l] = pow(l, -1, p)

    def mul(a, b):
        k, l = a // q, a % q + 1
        k2, l2 = b // q, b % q + 1
        return ((k + l * k2) % p) * q + (l * l2) % p - 1

    def inv(a):
        k, l = a // q, a % q + 1
        li = inverses[l]
        return ((-li * k) % p) * q + li - 1

    def encode(elem):
        k, l = elem
        if l % p == 0:
            raise InvalidArgumentError(f"second coordinate must be a unit mod {p}")
        return affine_index(p, k, l)

    return _checked(FiniteGroup(
        p * q,
        mul=mul,
        inv=inv,
        identity=affine_index(p, 0, 1),
        label=f"Aff({p})",
        kind="affine",
        params=(p,),
        encode=encode,
        decode=lambda a: (a // q, a % q + 1),
    ))


def make_direct_product(G, H):
    """Componentwise product; ``(a, b)`` is stored at ``a*|H| + b``."""
    order = G.order * H.order
    if order > TABLE_CAP:
        raise SizeError(f"direct product order {order} exceeds cap {TABLE_CAP}")
    h = H.order

    def mul(a, b):
        return G._mul(a // h, b // h) * h + H._mul(a % h, b % h)

    def inv(a):
        return G._inv(a // h) * h + H._inv(a % h)

    def encode(elem):
        x, y = elem
        return G.index(x) * h + H.index(y)

    return _checked(FiniteGroup(
        order,
        mul=mul,
        inv=inv,
        identity=G.identity * h + H.identity,
        label=f"{G.label}x{H.label}",
        kind="product",
        params=(G, H),
        encode=encode,
        decode=lambda a: (G.element(a // h), H.element(a % h)),
    ))


@dataclass(frozen=True)
class SamplingSet:
    """Ordered, duplicate-free list of group elements used as measurement rows."""

    elements: tuple
    group: FiniteGroup

    def __post_init__(self):
        elems = tuple(int(e) for e in self.elements)
        object.__setattr__(self, "elements", elems)
        if len(elems) < 1:
            raise InvalidArgumentError("a sampling set needs at least one element")
        if len(set(elems)) != len(elems):
            raise InvalidArgumentError("sampling set elements must be distinct")
        if min(elems) < 0 or max(elems) >= self.group.order:
            raise InvalidArgumentError(f"sampling set has elements outside {self.group.label}")

    @property
    def group_label(self):
        return self.group.label

    @property
    def m(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def as_array(self):
        return np.array(self.elements, dtype=np.int64)


def sampling_set(G, elements):
    """Deterministic sampling set from explicit element indices."""
    return SamplingSet(tuple(elements), G)


def random_sampling_set(G, m, allowed=None, seed=0):
    """Draw ``m`` distinct elements uniformly without replacement.

    ``allowed`` restricts the draw to a subset of element indices. The draw
    order is kept, and the result depends only on ``(G, m, allowed, seed)``.
    """
    pool = np.arange(G.order) if allowed is None else np.unique(np.asarray(list(allowed), dtype=np.int64))
    if pool.size and (pool.min() < 0 or pool.max() >= G.order):
        raise InvalidArgumentError(f"allowed subset has elements outside {G.label}")
    if m < 1:
        raise InvalidArgumentError(f"sampling set size must be >= 1, got {m}")
    if m > pool.size:
        raise InfeasibleSampleError(f"cannot draw {m} distinct elements from {pool.size}")
    rng = rng_for(seed, "sampling_set")
    return SamplingSet(tuple(rng.choice(pool, size=m, replace=False)), G)


def affine_axis_subset(p):
    """Indices of the translations ``{(k, 1) : k in Z_p}`` of ``make_affine(p)``."""
    p = _require_prime(p)
    return tuple(affine_index(p, k, 1) for k in range(p))

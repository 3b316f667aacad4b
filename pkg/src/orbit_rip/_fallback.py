"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
import itertools

import numpy as np

CHUNK = 1 << 14
PRUNE_SLACK = 1.0 + 1e-12


def _dev2(gram, i, j):
    d = gram.diagonal().real
    half_sum = 0.5 * (d[i] + d[j]) - 1.0
    half_diff = 0.5 * (d[i] - d[j])
    off = gram[i, j]
    return np.abs(half_sum) + np.sqrt(half_diff * half_diff + off.real * off.real + off.imag * off.imag)


def rip_search(gram, s):
    """Max over size-``s`` supports S (lexicographic) of ``||gram[S,S] - I||_2``.

    Returns ``(delta, support, count)``; ties keep the first support found.
    """
    gram = np.ascontiguousarray(gram, dtype=np.complex128)
    n = gram.shape[0]
    if s < 1 or s > n:
        raise ValueError("need 1 <= s <= n")
    if s == 1:
        devs = np.abs(gram.diagonal().real - 1.0)
        j = int(np.argmax(devs))
        return float(devs[j]), (j,), n
    if s == 2:
        i, j = np.triu_indices(n, 1)
        devs = _dev2(gram, i, j)
        k = int(np.argmax(devs))
        return float(devs[k]), (int(i[k]), int(j[k])), devs.size

    combos = itertools.combinations(range(n), s)
    eye = np.eye(s)
    best, best_support, count = -1.0, tuple(range(s)), 0
    while True:
        idx = np.fromiter(itertools.islice(combos, CHUNK), dtype=np.dtype((np.intp, s)))
        if idx.shape[0] == 0:
            break
        count += idx.shape[0]
        sub = gram[idx[:, :, None], idx[:, None, :]] - eye
        # same pruning rule as the compiled kernel, against the best of earlier chunks
        radii = np.abs(sub).sum(axis=2) - np.abs(sub.diagonal(axis1=1, axis2=2)) \
            + np.abs(sub.diagonal(axis1=1, axis2=2).real)
        keep = np.flatnonzero(~(radii.max(axis=1) * PRUNE_SLACK < best))
        if keep.size == 0:
            continue
        w = np.linalg.eigvalsh(sub[keep])
        devs = np.maximum(np.abs(w[:, 0]), np.abs(w[:, -1]))
        k = int(np.argmax(devs))
        if devs[k] > best:
            best, best_support = float(devs[k]), tuple(int(i) for i in idx[keep[k]])
    return best, best_support, count

"""Brute-force enumeration of a finitely generated matrix group.

Elements are held as mixed-radix integer codes of their entries. Membership
is a dense boolean table when the code space is small enough, otherwise a
sorted array. Frontiers are processed in ascending code order, so the output
is reproducible.
"""

import numpy as np

from . import _batch as B
from .errors import CapExceeded

DENSE_TABLE_LIMIT = 2**28
CHUNK = 1 << 20


def _right_multiply(X, g, m):
    if X.shape[1] == 2 and X.dtype != object:
        # unrolled 2x2 product; the generic matmul path is several times slower
        a, b, c, d = X[:, 0, 0], X[:, 0, 1], X[:, 1, 0], X[:, 1, 1]
        g00, g01, g10, g11 = (int(v) for v in g.reshape(-1))
        out = np.empty_like(X)
        out[:, 0, 0] = (a * g00 + b * g10) % m
        out[:, 0, 1] = (a * g01 + b * g11) % m
        out[:, 1, 0] = (c * g00 + d * g10) % m
        out[:, 1, 1] = (c * g01 + d * g11) % m
        return out
    return B.matmul(X, g[None], m)


def closure_codes(gens, n, m, cap):
    """Sorted codes of every element of <gens>; raises CapExceeded past ``cap``."""
    L = n * n
    space = m**L
    ident = B.identity(n, m)
    start = B.encode_mats(ident, m)
    dense = B.code_fits(m, L) and space <= DENSE_TABLE_LIMIT
    if dense:
        table = np.zeros(space, dtype=bool)
        table[start] = True
    else:
        seen = start.copy()
    found = [start]
    total = 1
    if total > cap:
        raise CapExceeded(cap)
    frontier = start
    while len(frontier):
        layer = []
        for lo in range(0, len(frontier), CHUNK):
            X = B.decode_mats(frontier[lo:lo + CHUNK], m, n)
            for g in gens:
                codes = B.encode_mats(_right_multiply(X, g, m), m)
                if dense:
                    codes = np.unique(codes[~table[codes]])
                    table[codes] = True
                else:
                    codes = np.unique(codes)
                    pos = np.minimum(np.searchsorted(seen, codes), len(seen) - 1)
                    codes = codes[seen[pos] != codes]
                    seen = np.union1d(seen, codes)
                if len(codes):
                    total += len(codes)
                    if total > cap:
                        raise CapExceeded(cap)
                    layer.append(codes)
        frontier = np.unique(np.concatenate(layer)) if layer else layer
        if len(frontier):
            found.append(frontier)
    return np.sort(np.concatenate(found))


def closure_size(gens, n, m, cap):
    return len(closure_codes(gens, n, m, cap))

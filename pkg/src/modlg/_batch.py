"""Vectorised matrix arithmetic mod m on stacks of shape (k, n, n).

int64 is used whenever every intermediate sum fits; otherwise arrays fall
back to Python-int object dtype, which is slow but exact.
"""

import numpy as np

from .modular import MatrixModM

INT64_LIMIT = 2**63 - 1


def dtype_for(n, m):
    return np.int64 if n * (m - 1) ** 2 <= INT64_LIMIT else object


def to_array(mats, n, m):
    arr = np.array([A.entries for A in mats], dtype=dtype_for(n, m))
    return arr.reshape(len(mats), n, n)


def to_matrices(arr, m):
    n = arr.shape[-1]
    return [MatrixModM(n, m, tuple(int(x) for x in row.reshape(-1))) for row in arr]


def identity(n, m, count=1):
    eye = np.eye(n, dtype=dtype_for(n, m))
    if m == 1:
        eye[:] = 0
    return np.repeat(eye[None], count, axis=0)


def matmul(a, b, m):
    out = np.matmul(a, b)
    out %= m
    return out


def code_fits(m, length):
    return m**length <= INT64_LIMIT


def encode(flat, m):
    """Mixed-radix code of each row of ``flat`` (shape (k, L)); most significant first,
    so code order is lexicographic entry order."""
    k, L = flat.shape
    if code_fits(m, L):
        codes = np.zeros(k, dtype=np.int64)
        src = flat.astype(np.int64, copy=False)
    else:
        codes = np.zeros(k, dtype=object)
        src = flat.astype(object)
    for j in range(L):
        codes *= m
        codes += src[:, j]
    return codes


def decode(codes, m, L):
    codes = np.asarray(codes)
    out = np.zeros((len(codes), L), dtype=codes.dtype if codes.dtype != object else object)
    rest = codes.copy()
    for j in range(L - 1, -1, -1):
        out[:, j] = rest % m
        rest //= m
    return out


def encode_mats(arr, m):
    k, n, _ = arr.shape
    return encode(arr.reshape(k, n * n), m)


def decode_mats(codes, m, n):
    flat = decode(codes, m, n * n)
    if flat.dtype != object and dtype_for(n, m) is object:
        flat = flat.astype(object)
    return flat.reshape(len(flat), n, n)


class CodeIndex:
    """Map from integer codes to positions with vectorised lookup.

    Uses a dense table when the code space is small, otherwise a sorted
    array searched with ``searchsorted``.
    """

    DENSE_LIMIT = 2**25

    def __init__(self, space):
        self.space = space
        self.dense = space <= self.DENSE_LIMIT
        if self.dense:
            self.table = np.full(space, -1, dtype=np.int64)
        else:
            self.keys = np.zeros(0, dtype=np.int64 if space <= INT64_LIMIT else object)
            self.vals = np.zeros(0, dtype=np.int64)
        self.size = 0

    def lookup(self, codes):
        if self.dense:
            return self.table[codes.astype(np.int64, copy=False)]
        out = np.full(len(codes), -1, dtype=np.int64)
        if len(self.keys) == 0 or len(codes) == 0:
            return out
        pos = np.searchsorted(self.keys, codes)
        pos = np.minimum(pos, len(self.keys) - 1)
        hit = self.keys[pos] == codes
        out[hit] = self.vals[pos[hit]]
        return out

    def add(self, codes):
        """Register new (distinct, unseen) codes; returns their positions."""
        idx = np.arange(self.size, self.size + len(codes), dtype=np.int64)
        if self.dense:
            self.table[codes.astype(np.int64, copy=False)] = idx
        else:
            keys = np.concatenate([self.keys, codes.astype(self.keys.dtype)])
            vals = np.concatenate([self.vals, idx])
            order = np.argsort(keys, kind="stable")
            self.keys, self.vals = keys[order], vals[order]
        self.size += len(codes)
        return idx


def first_unique(codes):
    """Indices of first occurrences of each distinct code, in original order."""
    if len(codes) == 0:
        return np.zeros(0, dtype=np.int64)
    _, first = np.unique(codes, return_index=True)
    return np.sort(first)

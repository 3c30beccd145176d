"""Deterministic Schreier-Sims for matrix groups acting on column vectors.

The action of GL_n(Z/mZ) on (Z/mZ)^n is faithful, so the standard basis
e_0, ..., e_{n-1} is a base: an element fixing all of them is the identity.
Level k of the chain holds the orbit of e_k under the pointwise stabiliser
of e_0, ..., e_{k-1}, with a transversal (and its inverses) stored as stacked
numpy arrays. Schreier generators are formed and sifted in batches.
"""

import numpy as np

from . import _batch as B
from .modular import MatrixModM, mat_inv


class _Level:
    def __init__(self, chain, k):
        self.chain = chain
        self.k = k
        self.gens = []
        self.gens_inv = []
        self.orbit_codes = None
        self.trans = None
        self.trans_inv = None
        self.index = None

    def add_gen(self, g, g_inv):
        self.gens.append(g)
        self.gens_inv.append(g_inv)

    def build_orbit(self):
        """Breadth-first orbit of e_k; transversal words are extended in
        generator order so the result is reproducible."""
        c = self.chain
        n, m, k = c.n, c.m, self.k
        base = np.zeros((1, n), dtype=c.dtype)
        base[0, k] = 1 % m
        index = B.CodeIndex(c.point_space)
        codes = B.encode(base, m)
        index.add(codes)
        trans = [B.identity(n, m)]
        trans_inv = [B.identity(n, m)]
        orbit = [codes]
        frontier_T = trans[0]
        frontier_Ti = trans_inv[0]
        while len(frontier_T):
            next_T, next_Ti = [], []
            for g, gi in zip(self.gens, self.gens_inv):
                prod = B.matmul(g[None], frontier_T, m)
                pcodes = B.encode(prod[:, :, k], m)
                keep = B.first_unique(pcodes)
                keep = keep[index.lookup(pcodes[keep]) < 0]
                if not len(keep):
                    continue
                index.add(pcodes[keep])
                orbit.append(pcodes[keep])
                next_T.append(prod[keep])
                next_Ti.append(B.matmul(frontier_Ti[keep], gi[None], m))
            if not next_T:
                break
            frontier_T = np.concatenate(next_T)
            frontier_Ti = np.concatenate(next_Ti)
            trans.append(frontier_T)
            trans_inv.append(frontier_Ti)
        self.index = index
        self.orbit_codes = np.concatenate(orbit)
        self.trans = np.concatenate(trans)
        self.trans_inv = np.concatenate(trans_inv)

    @property
    def orbit_size(self):
        return len(self.orbit_codes)

    def schreier_generators(self):
        c = self.chain
        m, k = c.m, self.k
        out = []
        for g in self.gens:
            prod = B.matmul(g[None], self.trans, m)
            idx = self.index.lookup(B.encode(prod[:, :, k], m))
            y = B.matmul(self.trans_inv[idx], prod, m)
            nontrivial = np.any(y.reshape(len(y), -1) != c.eye_flat, axis=1)
            out.append(y[nontrivial])
        if not out:
            return np.zeros((0, c.n, c.n), dtype=c.dtype)
        return np.concatenate(out)


class StabilizerChain:
    """Base and strong generating set for a subgroup of GL_n(Z/mZ).

    ``gens`` and ``gens_inv`` are stacks of shape (k, n, n); inverses are
    supplied by the caller so no batched inversion is needed here.
    """

    def __init__(self, gens, gens_inv, n, m):
        self.n = n
        self.m = m
        self.dtype = B.dtype_for(self.n, m)
        self.point_space = m**self.n
        self.eye_flat = B.identity(self.n, m)[0].reshape(-1)
        self.levels = [_Level(self, k) for k in range(self.n)]
        for g, gi in zip(gens, gens_inv):
            f = self._first_moved(g)
            if f is None:
                continue
            for t in range(f + 1):
                self.levels[t].add_gen(g, gi)
        for k in range(self.n - 1, -1, -1):
            self._complete(k)

    def _first_moved(self, g):
        for k in range(self.n):
            col = g[:, k]
            if any(int(col[i]) != (1 % self.m if i == k else 0) for i in range(self.n)):
                return k
        return None

    def _complete(self, k):
        level = self.levels[k]
        level.build_orbit()
        pending = level.schreier_generators()
        while len(pending):
            residues, drop = self.sift(pending, k + 1)
            bad = np.nonzero(drop >= 0)[0]
            if not len(bad):
                break
            h = residues[bad[0]]
            j = int(drop[bad[0]])
            h_inv = self._inverse(h)
            for t in range(k + 1, j + 1):
                self.levels[t].add_gen(h, h_inv)
            for t in range(j, k, -1):
                self._complete(t)
            pending = pending[bad[1:]]

    def _inverse(self, h):
        A = MatrixModM(self.n, self.m, tuple(int(x) for x in h.reshape(-1)))
        inv = mat_inv(A)
        return np.array(inv.entries, dtype=self.dtype).reshape(self.n, self.n)

    def sift(self, mats, start=0):
        """Sift a batch through levels ``start``.. ; returns (residues, drop) where
        drop[i] is the level at which element i left the chain, or -1 if it
        sifted to the identity."""
        m = self.m
        res = np.array(mats, dtype=self.dtype, copy=True)
        drop = np.full(len(res), -1, dtype=np.int64)
        alive = np.arange(len(res))
        for k in range(start, self.n):
            if not len(alive):
                break
            level = self.levels[k]
            cur = res[alive]
            idx = level.index.lookup(B.encode(cur[:, :, k], m))
            miss = idx < 0
            drop[alive[miss]] = k
            ok = ~miss
            alive = alive[ok]
            res[alive] = B.matmul(level.trans_inv[idx[ok]], cur[ok], m)
        return res, drop

    def contains_batch(self, mats):
        if len(mats) == 0:
            return np.zeros(0, dtype=bool)
        _, drop = self.sift(mats)
        return drop < 0

    def contains(self, mat):
        return bool(self.contains_batch(np.asarray(mat)[None])[0])

    def extend(self, g, g_inv):
        """Add a generator; returns False if it was already a member."""
        res, drop = self.sift(np.asarray(g)[None])
        if drop[0] < 0:
            return False
        f = self._first_moved(g)
        for t in range(f + 1):
            self.levels[t].add_gen(g, g_inv)
        for t in range(f, -1, -1):
            self._complete(t)
        return True

    def order(self):
        total = 1
        for level in self.levels:
            total *= level.orbit_size
        return total

    def orbit_sizes(self):
        return [level.orbit_size for level in self.levels]


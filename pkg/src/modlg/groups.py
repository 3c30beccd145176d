"""Finitely generated subgroups of GL_n(Z/mZ)."""

import os
import threading

import numpy as np

from . import _batch as B
from .closure import closure_codes
from .errors import CapExceeded, NotInvertible, ShapeMismatch
from .families import family_order, standard_generators
from .modular import MatrixModM, as_modulus, commutator, factor_modulus, is_invertible, mat_inv, reduce_modulus
from .stabchain import StabilizerChain

DEFAULT_CAP = 2**26


def default_cap():
    """Closure cap, overridable through the MODLG_CAP environment variable."""
    value = os.environ.get("MODLG_CAP")
    return int(value) if value else DEFAULT_CAP


class GeneratedGroup:
    """The subgroup of GL_n(Z/mZ) generated by a list of invertible matrices.

    The stabilizer chain, the element closure and the order are computed on
    first use and cached; none of them changes any query's answer.
    """

    def __init__(self, generators, m=None, degree=None):
        gens = []
        seen = set()
        for A in generators:
            if A not in seen:
                seen.add(A)
                gens.append(A)
        if gens:
            m = gens[0].m if m is None else m
            degree = gens[0].n if degree is None else degree
        if m is None or degree is None:
            raise ShapeMismatch("an empty generator list needs an explicit modulus and degree")
        for i, A in enumerate(gens):
            if A.m != m or A.n != degree:
                raise ShapeMismatch(f"generator {i} is {A.n}x{A.n} mod {A.m}, expected {degree}x{degree} mod {m}")
            if not is_invertible(A):
                raise NotInvertible(f"generator {i} is not invertible mod {m}")
        self.modulus = factor_modulus(m)
        self.m = m
        self.n = degree
        self.generators = tuple(gens)
        self._inverses = tuple(mat_inv(A) for A in gens)
        self._lock = threading.RLock()
        self._chain = None
        self._closure = None

    @classmethod
    def from_family(cls, fam, mod):
        mod = as_modulus(mod)
        return cls(standard_generators(fam, mod), m=mod.m, degree=fam.degree)

    @classmethod
    def trivial(cls, n, m):
        return cls([MatrixModM.identity(n, m)])

    def __repr__(self):
        return f"GeneratedGroup(n={self.n}, m={self.m}, {len(self.generators)} generators)"

    def _array(self, mats):
        return B.to_array(mats, self.n, self.m)

    @property
    def chain(self):
        with self._lock:
            if self._chain is None:
                self._chain = StabilizerChain(
                    self._array(self.generators), self._array(self._inverses), self.n, self.m
                )
            return self._chain

    def order(self):
        return self.chain.order()

    def _check(self, A):
        if A.n != self.n or A.m != self.m:
            raise ShapeMismatch(f"{A.n}x{A.n} matrix mod {A.m} against a group of degree {self.n} mod {self.m}")

    def contains(self, A):
        self._check(A)
        return self.chain.contains(self._array([A])[0])

    def contains_batch(self, arr):
        return self.chain.contains_batch(arr)

    def closure_codes(self, cap=None):
        cap = default_cap() if cap is None else cap
        with self._lock:
            if self._closure is None:
                codes = closure_codes(self._array(self.generators), self.n, self.m, cap)
                self._closure = codes
            if len(self._closure) > cap:
                raise CapExceeded(cap)
            return self._closure

    def closure(self, cap=None):
        codes = self.closure_codes(cap)
        return B.to_matrices(B.decode_mats(codes, self.m, self.n), self.m)

    def contains_family(self, fam):
        if fam.degree != self.n:
            raise ShapeMismatch(f"{fam} has degree {fam.degree}, group has degree {self.n}")
        gens = standard_generators(fam, self.modulus)
        return bool(np.all(self.contains_batch(self._array(gens))))

    def equals_family(self, fam):
        return self.contains_family(fam) and self.order() == family_order(fam, self.modulus)

    def project(self, d):
        gens = [reduce_modulus(A, d) for A in self.generators]
        return GeneratedGroup(gens, m=d, degree=self.n)

    def commutator_subgroup(self):
        """Derived subgroup: normal closure of the generator commutators,
        grown until one full conjugation pass leaves the order unchanged."""
        n, m = self.n, self.m
        comms = []
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                c = commutator(a, b)
                if not c.is_identity() and c not in comms:
                    comms.append(c)
        if not comms:
            return GeneratedGroup.trivial(n, m)
        normal = list(comms)
        chain = StabilizerChain(self._array(normal), self._array([mat_inv(c) for c in normal]), n, m)
        conj = list(zip(self.generators, self._inverses))
        changed = True
        while changed:
            changed = False
            i = 0
            while i < len(normal):
                x = normal[i]
                for g, g_inv in conj:
                    y = g @ x @ g_inv
                    y_inv = mat_inv(y)
                    if chain.extend(self._array([y])[0], self._array([y_inv])[0]):
                        normal.append(y)
                        changed = True
                i += 1
        group = GeneratedGroup(normal, m=m, degree=n)
        group._chain = chain
        return group

    def kernel_component(self, ell, cap=None):
        """{x in G : x = I mod m/ell^r}, carried to a group over Z/ell^r."""
        q = self.modulus.prime_power(ell)
        rest = self.m // q
        if rest == 1:
            return self
        codes = self.closure_codes(cap)
        mats = B.decode_mats(codes, self.m, self.n)
        eye = B.identity(self.n, rest)[0]
        in_kernel = np.all((mats % rest).reshape(len(mats), -1) == eye.reshape(-1), axis=1)
        local = mats[in_kernel] % q
        return generated_from_elements(local, self.n, q)


def generated_from_elements(elements, n, m):
    """A generating set for a group given by all of its elements, chosen by
    repeatedly taking the first element not yet generated."""
    gens = []
    chain = StabilizerChain(np.zeros((0, n, n), dtype=B.dtype_for(n, m)), [], n, m)
    while True:
        missing = np.nonzero(~chain.contains_batch(elements))[0]
        if not len(missing):
            break
        A = B.to_matrices(elements[missing[:1]], m)[0]
        gens.append(A)
        A_inv = mat_inv(A)
        chain.extend(B.to_array([A], n, m)[0], B.to_array([A_inv], n, m)[0])
    group = GeneratedGroup(gens or [MatrixModM.identity(n, m)], m=m, degree=n)
    if gens:
        group._chain = chain
    return group


def closure(G, cap=None):
    return G.closure(cap)


def group_order(G):
    return G.order()


def contains_element(G, A):
    return G.contains(A)


def contains_family(G, fam):
    return G.contains_family(fam)


def equals_family(G, fam):
    return G.equals_family(fam)


def commutator_subgroup(G):
    return G.commutator_subgroup()


def project_group(G, d):
    return G.project(d)


def kernel_component(G, ell, cap=None):
    return G.kernel_component(ell, cap)

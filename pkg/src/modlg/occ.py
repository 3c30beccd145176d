"""Composition factors of enumerable groups and the Occ calculus.

A composition series is found by repeatedly extracting a minimal normal
subgroup (the smallest normal closure of a single conjugacy class) and
recursing on it and on the quotient. Groups are handled as enumerated
element sets with vectorised multiplication; quotients are coset tables.
"""

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _batch as B
from .errors import CapExceeded, NotSimple, PreconditionViolated, Unsupported
from .families import GroupFamily
from .modular import as_modulus, factor_modulus, is_prime

DEFAULT_CAP = 10**6


@dataclass(frozen=True, order=True)
class SimpleGroupId:
    """Catalog identifier of a finite simple group (or ``Unknown`` by order)."""

    kind: str
    param: int

    def __str__(self):
        return f"{self.kind}({self.param})"

    @property
    def abelian(self):
        return self.kind == "Cyclic"

    @property
    def order(self):
        k, q = self.kind, self.param
        if k in ("Cyclic", "Unknown"):
            return q
        if k == "PSL2":
            return q * (q * q - 1) // 2
        if k == "PSp4":
            return q**4 * (q * q - 1) * (q**4 - 1) // 2
        if k == "Alt":
            out = 1
            for i in range(3, q + 1):
                out *= i
            return out
        raise Unsupported(k)


def Cyclic(p):
    return SimpleGroupId("Cyclic", p)


def PSL2(ell):
    return SimpleGroupId("PSL2", ell)


def PSp4(ell):
    return SimpleGroupId("PSp4", ell)


def Alt(k):
    return SimpleGroupId("Alt", k)


def Unknown(order):
    return SimpleGroupId("Unknown", order)


# -- enumerated groups -------------------------------------------------------


class FiniteGroup:
    """Elements are 0..size-1; subclasses provide vectorised ``mul``."""

    size: int
    identity: int
    gens: np.ndarray

    def mul(self, a, b):
        raise NotImplementedError

    @cached_property
    def inv(self):
        raise NotImplementedError

    @cached_property
    def is_abelian(self):
        g = self.gens
        if len(g) < 2:
            return True
        a, b = np.meshgrid(g, g, indexing="ij")
        return bool(np.all(self.mul(a.ravel(), b.ravel()) == self.mul(b.ravel(), a.ravel())))

    def conjugacy_class(self, x):
        every = np.arange(self.size)
        xs = np.full(self.size, x)
        return np.unique(self.mul(self.mul(every, xs), self.inv[every]))

    def class_representatives(self):
        seen = np.zeros(self.size, dtype=bool)
        reps = []
        for x in range(self.size):
            if seen[x]:
                continue
            reps.append(x)
            seen[self.conjugacy_class(x)] = True
        return reps

    def generated(self, elements, limit=None):
        """Sorted members of the subgroup generated by ``elements``, with the
        generators actually needed (first non-member each time). Returns None
        as soon as the subgroup grows past ``limit`` elements."""
        mask = np.zeros(self.size, dtype=bool)
        mask[self.identity] = True
        gens = []
        for c in elements:
            c = int(c)
            if mask[c]:
                continue
            gens.append(c)
            frontier = np.nonzero(mask)[0]
            while len(frontier):
                new = []
                for g in gens:
                    prod = self.mul(frontier, np.full(len(frontier), g))
                    prod = np.unique(prod[~mask[prod]])
                    mask[prod] = True
                    new.append(prod)
                frontier = np.concatenate(new)
                if limit is not None and np.count_nonzero(mask) > limit:
                    return None
        return np.nonzero(mask)[0], np.array(gens, dtype=np.int64)

    def normal_closure(self, x, limit=None):
        return self.generated(self.conjugacy_class(x), limit)

    def minimal_normal_subgroup(self):
        """Smallest normal closure of a non-identity element; ties go to the
        smallest representative."""
        best = None
        for x in self.class_representatives():
            if x == self.identity:
                continue
            found = self.normal_closure(x, None if best is None else len(best[0]) - 1)
            if found is not None:
                best = found
        return best

    @cached_property
    def is_simple(self):
        if self.size == 1:
            return False
        if self.is_abelian:
            return is_prime(self.size)
        for x in self.class_representatives():
            if x != self.identity and len(self.normal_closure(x)[0]) != self.size:
                return False
        return True


class MatrixGroupTable(FiniteGroup):
    """All elements of a matrix group, as sorted entry codes."""

    def __init__(self, codes, n, m, gen_codes):
        self.codes = np.asarray(codes)
        self.n, self.m = n, m
        self.size = len(self.codes)
        self.identity = int(self._index(B.encode_mats(B.identity(n, m), m))[0])
        self.gens = self._index(np.asarray(gen_codes, dtype=self.codes.dtype)) if len(gen_codes) else np.zeros(0, np.int64)

    def _index(self, codes):
        return np.searchsorted(self.codes, codes).astype(np.int64)

    @cached_property
    def matrices(self):
        return B.decode_mats(self.codes, self.m, self.n)

    def elements(self, idx):
        return self.matrices[idx]

    def mul(self, a, b):
        prod = B.matmul(self.elements(a), self.elements(b), self.m)
        return self._index(B.encode_mats(prod, self.m))

    @cached_property
    def inv(self):
        # x^(|G|-1) = x^-1 for every element; batched square-and-multiply
        every = np.arange(self.size)
        result = np.full(self.size, self.identity)
        base = every
        e = self.size - 1
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


class SubgroupTable(FiniteGroup):
    def __init__(self, parent, members, gens):
        self.parent = parent
        self.members = np.asarray(members)
        self.size = len(self.members)
        self.identity = self._local(np.array([parent.identity]))[0]
        self.gens = self._local(np.asarray(gens, dtype=np.int64))

    def _local(self, parent_idx):
        return np.searchsorted(self.members, parent_idx).astype(np.int64)

    def mul(self, a, b):
        return self._local(self.parent.mul(self.members[a], self.members[b]))

    @cached_property
    def inv(self):
        return self._local(self.parent.inv[self.members])


class QuotientTable(FiniteGroup):
    """G/N with cosets labelled by their smallest element."""

    def __init__(self, parent, normal):
        self.parent = parent
        normal = np.asarray(normal)
        every = np.arange(parent.size)
        if len(normal) <= parent.size // len(normal):
            label = every.copy()
            for y in normal:
                np.minimum(label, parent.mul(every, np.full(parent.size, y)), out=label)
        else:
            label = np.full(parent.size, -1)
            for x in range(parent.size):
                if label[x] < 0:
                    label[parent.mul(np.full(len(normal), x), normal)] = x
        self.reps = np.unique(label)
        self.coset = np.searchsorted(self.reps, label).astype(np.int64)
        self.size = len(self.reps)
        self.identity = int(self.coset[parent.identity])
        self.gens = np.unique(self.coset[parent.gens]) if len(parent.gens) else np.zeros(0, np.int64)

    def mul(self, a, b):
        return self.coset[self.parent.mul(self.reps[a], self.reps[b])]

    @cached_property
    def inv(self):
        return self.coset[self.parent.inv[self.reps]]


# -- identification and series -----------------------------------------------


def _primes_upto(bound):
    return [p for p in range(2, bound + 1) if is_prime(p)]


def _factorize(n):
    return factor_modulus(n).factors if n > 1 else ()


def identify_simple(order, witness):
    """Catalog identifier for a simple group of the given order.

    Orders outside the catalog, or shared by non-isomorphic simple groups
    (20160), give ``Unknown(order)``.
    """
    if witness.size != order:
        raise ValueError(f"witness has {witness.size} elements, expected {order}")
    if not witness.is_simple:
        raise NotSimple(f"group of order {order} has a proper nontrivial normal subgroup")
    if witness.is_abelian:
        return Cyclic(order)
    return _catalog_lookup(order)


def _catalog_lookup(order):
    ell = 5
    while ell * (ell * ell - 1) // 2 <= order:
        if is_prime(ell) and ell * (ell * ell - 1) // 2 == order:
            return PSL2(ell)
        ell += 1
    ell = 3
    while PSp4(ell).order <= order:
        if is_prime(ell) and PSp4(ell).order == order:
            return PSp4(ell)
        ell += 2
    for k in (6, 7):
        if Alt(k).order == order:
            return Alt(k)
    return Unknown(order)


def _series(G):
    if G.size == 1:
        return []
    if G.is_abelian:
        return [Cyclic(p) for p, v in _factorize(G.size) for _ in range(v)]
    members, gens = G.minimal_normal_subgroup()
    if len(members) == G.size:
        G.__dict__["is_simple"] = True
        return [identify_simple(G.size, G)]
    N = SubgroupTable(G, members, gens)
    return _series(N) + _series(QuotientTable(G, members))


@dataclass(frozen=True)
class CompositionFactorReport:
    factors: tuple  # sorted multiset of SimpleGroupId
    order: int

    @property
    def occ(self):
        return frozenset(f for f in self.factors if not f.abelian)

    @property
    def solvable(self):
        return not self.occ

    def to_dict(self):
        return {
            "order": self.order,
            "factors": [str(f) for f in self.factors],
            "occ": sorted(str(f) for f in self.occ),
            "solvable": self.solvable,
        }


def composition_factors(G, cap=DEFAULT_CAP):
    """Composition factors of a GeneratedGroup.

    The kernel of reduction mod rad(m) is a nilpotent group whose order is
    known from the stabilizer chain, so its factors are read off from that
    order; the image mod rad(m) is enumerated (at most ``cap`` elements) and
    decomposed by minimal normal subgroups.
    """
    mod = G.modulus
    rad = mod.radical
    top = G if rad == G.m else G.project(rad)
    kernel_order = G.order() // top.order()
    factors = []
    for p, v in _factorize(kernel_order):
        if p not in mod.primes:
            raise AssertionError(f"congruence kernel order {kernel_order} has foreign prime {p}")
        factors += [Cyclic(p)] * v
    if top.order() > cap:
        raise CapExceeded(cap, "composition series enumeration")
    codes = top.closure_codes(cap)
    gen_codes = B.encode_mats(top._array(top.generators), top.m)
    table = MatrixGroupTable(codes, top.n, top.m, gen_codes)
    factors += _series(table)
    report = CompositionFactorReport(tuple(sorted(factors)), G.order())
    total = 1
    for f in report.factors:
        total *= f.order
    if total != G.order():
        raise AssertionError(f"factor orders multiply to {total}, group order is {G.order()}")
    return report


def predicted_occ(fam, mod):
    """Occ of GL(2) or GSp(2g) over Z/mZ from the prime divisors of m."""
    mod = as_modulus(mod)
    if fam.tag == "GL" and fam.degree == 2 or fam.tag == "GSp" and fam.degree == 2:
        return frozenset(PSL2(ell) for ell in mod.primes if ell >= 5)
    if fam.tag == "GSp":
        if fam.degree != 4:
            raise Unsupported("catalog identifiers exist for PSp4 only")
        # PSp4(2) is not simple (it is S6); even moduli are rejected elsewhere
        return frozenset(PSp4(ell) for ell in mod.primes if ell >= 3)
    raise Unsupported(f"no Occ prediction for {fam}")


class Direction(enum.Enum):
    OCC_SIDE = "occ"
    CONTAINMENT_SIDE = "containment"


def sl2_occ_criterion(G, direction, cap=DEFAULT_CAP):
    """One side of: PSL2(F_ell) in Occ(G)  <=>  SL2(Z/ell^r) <= G, for G mod ell^r, ell > 5."""
    mod = G.modulus
    if not mod.is_prime_power:
        raise PreconditionViolated("modulus must be a prime power")
    ell = mod.primes[0]
    if ell <= 5:
        raise PreconditionViolated("ell > 5")
    if G.n != 2:
        raise PreconditionViolated("degree 2")
    if direction is Direction.OCC_SIDE:
        return PSL2(ell) in composition_factors(G, cap).occ
    return G.contains_family(GroupFamily.SL(2))

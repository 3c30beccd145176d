"""Mod-ell and mod-m surjectivity of Galois images of elliptic curves over Q.

Frobenius traces come from naive point counting. Surjectivity mod ell is
proved by elimination: each maximal subgroup class of GL2(F_ell) has a
known set of (det, trace) pairs, and a sample outside that set rules the
class out. The test is one-sided. It can prove surjectivity but never
non-surjectivity.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import BadReduction, PreconditionViolated, SmallPrime
from .modular import euler_phi, factor_modulus, is_prime, unit_subgroup
from .verdicts import PrimeReport, Status, SurjectivityVerdict

CLASSES = ("Borel", "SplitCartanNorm", "NonsplitCartanNorm", "Exceptional")
DEFAULT_BOUND = 10**4


@dataclass(frozen=True)
class CurveQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise BadReduction("singular curve: discriminant is zero")

    @classmethod
    def short(cls, a, b):
        return cls(0, 0, 0, a, b)

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def short_model(self, p):
        """(A, B) mod p with the curve isomorphic to y^2 = x^3 + A x + B over F_p."""
        b2, b4, b6, _ = self.b_invariants
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
        return (-27 * c4) % p, (-54 * c6) % p


@dataclass(frozen=True)
class FrobeniusSample:
    p: int
    a_p: int
    det_residue: int

    def __post_init__(self):
        if self.p <= 3:
            raise SmallPrime(f"p = {self.p} must exceed 3")
        if self.a_p * self.a_p > 4 * self.p:
            raise AssertionError(f"Hasse bound violated: a_{self.p} = {self.a_p}")


@lru_cache(maxsize=64)
def _square_table(p):
    is_square = np.zeros(p, dtype=bool)
    x = np.arange(p, dtype=np.int64)
    is_square[(x * x) % p] = True
    chi = np.where(is_square, 1, -1).astype(np.int64)
    chi[0] = 0
    return chi


def ap_count(curve, p):
    """a_p = p + 1 - #E(F_p), summing the quadratic character of x^3 + Ax + B."""
    if p <= 3:
        raise SmallPrime(f"p = {p} must exceed 3")
    if curve.discriminant % p == 0:
        raise BadReduction(f"bad reduction at {p}")
    A, B = curve.short_model(p)
    x = np.arange(p, dtype=np.int64)
    f = (x * x % p * x + A * x + B) % p
    ap = -int(_square_table(p)[f].sum())
    if ap * ap > 4 * p:
        raise AssertionError(f"Hasse bound violated at p = {p}")
    return ap


def good_primes(curve, bound, m):
    return [p for p in range(5, bound + 1) if is_prime(p) and m % p and curve.discriminant % p]


def collect_samples(curve, bound, m, threads=1):
    """Frobenius samples for every good prime 3 < p <= bound not dividing m, ascending."""
    primes = good_primes(curve, bound, m)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            traces = list(pool.map(lambda p: ap_count(curve, p), primes))
    else:
        traces = [ap_count(curve, p) for p in primes]
    return [FrobeniusSample(p, a, p % m) for p, a in zip(primes, traces)]


def _smallest_nonresidue(ell):
    return next(e for e in range(2, ell) if pow(e, (ell - 1) // 2, ell) == ell - 1)


def _signature_pairs(elements, ell):
    a, b, c, d = (elements[:, i] for i in range(4))
    dets = (a * d - b * c) % ell
    traces = (a + d) % ell
    return frozenset(zip(dets.tolist(), traces.tolist()))


def maximal_representatives(ell):
    """Explicit elements (rows a, b, c, d) of a Borel subgroup and of the
    normalizers of a split and a nonsplit Cartan subgroup of GL2(F_ell)."""
    units = np.arange(1, ell)
    every = np.arange(ell)
    a, b, d = np.meshgrid(units, every, units, indexing="ij")
    borel = np.stack([a.ravel(), b.ravel(), np.zeros(a.size, int), d.ravel()], axis=1)
    x, y = np.meshgrid(units, units, indexing="ij")
    x, y = x.ravel(), y.ravel()
    zero = np.zeros(x.size, int)
    split = np.concatenate([np.stack([x, zero, zero, y], 1), np.stack([zero, x, y, zero], 1)])
    eps = _smallest_nonresidue(ell)
    x, y = np.meshgrid(every, every, indexing="ij")
    x, y = x.ravel(), y.ravel()
    keep = (x != 0) | (y != 0)
    x, y = x[keep], y[keep]
    cartan = np.stack([x, eps * y % ell, y, x], 1)
    flipped = np.stack([x, (-eps * y) % ell, y, (-x) % ell], 1)
    nonsplit = np.concatenate([cartan, flipped])
    return {"Borel": borel, "SplitCartanNorm": split, "NonsplitCartanNorm": nonsplit}


def exceptional_allows(det, trace, ell):
    """True when an element with this (det, trace) can have projective order
    1, 2, 3, 4 or 5, the only orders in A4, S4 and A5."""
    u = trace * trace * pow(det, -1, ell) % ell
    return u in (0, 1, 2, 4 % ell) or (u * u - 3 * u + 1) % ell == 0


@dataclass(frozen=True)
class SignatureTable:
    ell: int
    classes: dict  # class name -> frozenset of (det, trace); Exceptional is a predicate

    def allows(self, name, det, trace):
        if name == "Exceptional":
            return exceptional_allows(det, trace, self.ell)
        return (det, trace) in self.classes[name]


@lru_cache(maxsize=None)
def signature_tables(ell):
    if not is_prime(ell) or ell <= 5:
        raise PreconditionViolated("ell must be a prime > 5")
    reps = maximal_representatives(ell)
    return SignatureTable(ell, {name: _signature_pairs(elems, ell) for name, elems in reps.items()})


@dataclass(frozen=True)
class EllTestResult:
    ell: int
    proved: bool
    surviving: tuple
    det_surjective: bool
    eliminated_by: dict  # class name -> first prime whose sample ruled it out

    @property
    def label(self):
        return "ProvedSurjective" if self.proved else "Undetermined"

    def to_dict(self):
        return {
            "ell": self.ell,
            "result": self.label,
            "surviving": list(self.surviving),
            "det_surjective": self.det_surjective,
            "eliminated_by": {k: v for k, v in self.eliminated_by.items()},
        }


def mod_ell_test(samples, ell):
    table = signature_tables(ell)
    eliminated = {}
    residues = set()
    for s in samples:
        if s.p % ell == 0:
            continue
        det, trace = s.p % ell, s.a_p % ell
        residues.add(det)
        for name in CLASSES:
            if name not in eliminated and not table.allows(name, det, trace):
                eliminated[name] = s.p
    surviving = tuple(name for name in CLASSES if name not in eliminated)
    det_ok = len(unit_subgroup(residues, ell)) == ell - 1
    return EllTestResult(ell, not surviving and det_ok, surviving, det_ok, eliminated)


def mod_m_verdict(samples, m):
    """Surjective when every ell | m is proved surjective and the primes
    generate (Z/mZ)^*; otherwise Undetermined, never NotSurjective."""
    if gcd(m, 30) != 1:
        return SurjectivityVerdict.precondition("m coprime to 30")
    per_prime = {}
    tests = {}
    for ell in factor_modulus(m).primes:
        result = mod_ell_test(samples, ell)
        tests[ell] = result
        if result.proved:
            detail = "proved surjective"
        else:
            detail = "undetermined: surviving " + (", ".join(result.surviving) or "none (determinant)")
        per_prime[ell] = PrimeReport(result.proved, detail)
    index = euler_phi(m) // len(unit_subgroup([s.p % m for s in samples if gcd(s.p, m) == 1], m))
    proved = all(r.proved for r in tests.values()) and index == 1
    status = Status.SURJECTIVE if proved else Status.UNDETERMINED
    extra = {"tests": {str(ell): r.to_dict() for ell, r in tests.items()}, "samples": len(samples)}
    return SurjectivityVerdict(status, per_prime, index, extra=extra)

"""Exact arithmetic over Z/mZ: moduli, unit groups and square matrices.

Matrices are immutable and always held in canonical form (entries in
``[0, m)``), so equality and hashing are plain tuple comparisons.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, prod

from .errors import InvalidModulus, NotADivisor, NotInvertible, ShapeMismatch, Unsupported

MAX_DEGREE = 8
MAX_MODULUS = 2**31


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Modulus:
    """An integer m >= 2 together with its sorted prime-power factorization."""

    m: int
    factors: tuple  # ((ell, r), ...) with ell ascending

    def __post_init__(self):
        if prod(ell**r for ell, r in self.factors) != self.m:
            raise InvalidModulus(f"factorization {self.factors} does not multiply to {self.m}")

    @property
    def primes(self):
        return tuple(ell for ell, _ in self.factors)

    def prime_power(self, ell):
        for p, r in self.factors:
            if p == ell:
                return p**r
        raise NotADivisor(f"{ell} does not divide {self.m}")

    def exponent(self, ell):
        for p, r in self.factors:
            if p == ell:
                return r
        raise NotADivisor(f"{ell} does not divide {self.m}")

    @property
    def radical(self):
        return prod(self.primes)

    @property
    def is_prime_power(self):
        return len(self.factors) == 1

    def __int__(self):
        return self.m


@lru_cache(maxsize=None)
def factor_modulus(m):
    """Factor ``m`` by trial division (m is capped at 2**31)."""
    if not isinstance(m, int) or isinstance(m, bool) or m < 2:
        raise InvalidModulus(f"modulus must be an integer >= 2, got {m!r}")
    if m > MAX_MODULUS:
        raise InvalidModulus(f"modulus {m} exceeds 2**31")
    factors = []
    rest = m
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            r = 0
            while rest % d == 0:
                rest //= d
                r += 1
            factors.append((d, r))
        d += 1 if d == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return Modulus(m, tuple(factors))


def as_modulus(mod):
    return mod if isinstance(mod, Modulus) else factor_modulus(mod)


def euler_phi(m):
    return prod((ell - 1) * ell ** (r - 1) for ell, r in factor_modulus(m).factors)


def crt(residues, moduli):
    """Combine pairwise coprime congruences into one residue mod prod(moduli)."""
    x, M = 0, 1
    for a, n in zip(residues, moduli):
        # x + M*t == a (mod n)
        t = ((a - x) * pow(M, -1, n)) % n
        x += M * t
        M *= n
    return x % M


@lru_cache(maxsize=None)
def primitive_root(q):
    """Smallest generator (searching from 2) of the cyclic group (Z/qZ)^*, q an odd prime power."""
    mod = factor_modulus(q)
    if not mod.is_prime_power or mod.factors[0][0] == 2:
        raise Unsupported(f"(Z/{q}Z)^* is only handled for odd prime powers")
    ell, r = mod.factors[0]
    order = (ell - 1) * ell ** (r - 1)
    divisors = [p for p, _ in factor_modulus(order).factors] if order > 1 else []
    for g in range(2, q + 1):
        if gcd(g, q) != 1:
            continue
        if all(pow(g, order // p, q) != 1 for p in divisors):
            return g % q
    raise AssertionError(f"no primitive root found mod {q}")


@lru_cache(maxsize=None)
def unit_component_generators(m):
    """One unit per CRT component: congruent to the component's primitive root
    modulo its prime power and to 1 modulo every other factor."""
    mod = factor_modulus(m)
    if m % 2 == 0:
        raise Unsupported("unit group generators need odd m")
    powers = [ell**r for ell, r in mod.factors]
    gens = []
    for i, q in enumerate(powers):
        residues = [primitive_root(q) if j == i else 1 for j in range(len(powers))]
        gens.append(crt(residues, powers))
    return tuple(gens)


def unit_subgroup(elements, m):
    """Sorted tuple of the subgroup of (Z/mZ)^* generated by ``elements``."""
    gens = sorted({e % m for e in elements} - {1})
    seen = {1 % m}
    frontier = [1 % m]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % m
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def power_image(m, k):
    """The set {u**k : u a unit mod m} as a sorted tuple."""
    return tuple(sorted({pow(u, k, m) for u in range(1, m) if gcd(u, m) == 1}))


def power_image_size(m, k):
    """|{u**k}| computed from the cyclic decomposition of units (m odd)."""
    size = 1
    for ell, r in factor_modulus(m).factors:
        order = (ell - 1) * ell ** (r - 1)
        size *= order // gcd(order, k)
    return size


@dataclass(frozen=True)
class MatrixModM:
    """Square matrix over Z/mZ in canonical row-major form."""

    n: int
    m: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DEGREE:
            raise ShapeMismatch(f"degree {self.n} outside 1..{MAX_DEGREE}")
        if len(self.entries) != self.n * self.n:
            raise ShapeMismatch(f"expected {self.n * self.n} entries, got {len(self.entries)}")
        if any(not 0 <= e < self.m for e in self.entries):
            raise ValueError("entries must be canonical residues")

    @classmethod
    def from_rows(cls, rows, m):
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ShapeMismatch("matrix must be square")
        factor_modulus(m)
        return cls(n, m, tuple(int(x) % m for row in rows for x in row))

    @classmethod
    def from_entries(cls, entries, n, m):
        return cls(n, m, tuple(int(x) % m for x in entries))

    @classmethod
    def identity(cls, n, m):
        return cls(n, m, tuple(1 % m if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag, m):
        n = len(diag)
        return cls(n, m, tuple(int(diag[i]) % m if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def modulus(self):
        return factor_modulus(self.m)

    def rows(self):
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __repr__(self):
        return f"MatrixModM({self.rows()}, m={self.m})"

    def transpose(self):
        n = self.n
        return MatrixModM(n, self.m, tuple(self.entries[j * n + i] for i in range(n) for j in range(n)))

    def scale(self, c):
        return MatrixModM(self.n, self.m, tuple(c * e % self.m for e in self.entries))

    def __add__(self, other):
        _check_same(self, other)
        return MatrixModM(self.n, self.m, tuple((a + b) % self.m for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        _check_same(self, other)
        return MatrixModM(self.n, self.m, tuple((a - b) % self.m for a, b in zip(self.entries, other.entries)))

    def is_identity(self):
        return self == MatrixModM.identity(self.n, self.m)

    def is_zero(self):
        return not any(self.entries)

    def det(self):
        return det_and_trace(self)[0]

    def trace(self):
        return det_and_trace(self)[1]

    def inverse(self):
        return mat_inv(self)


def _check_same(A, B):
    if A.n != B.n or A.m != B.m:
        raise ShapeMismatch(f"degree/modulus mismatch: ({A.n}, {A.m}) vs ({B.n}, {B.m})")


def mat_mul(A, B):
    _check_same(A, B)
    n, m = A.n, A.m
    a, b = A.entries, B.entries
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            out.append(sum(row[k] * b[k * n + j] for k in range(n)) % m)
    return MatrixModM(n, m, tuple(out))


def _valuation(x, ell, r):
    if x == 0:
        return r
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def _det_prime_power(rows, ell, r):
    """Determinant over the local ring Z/ell^r by elimination, pivoting on the
    entry of least ell-adic valuation so every quotient used is exact."""
    q = ell**r
    a = [[x % q for x in row] for row in rows]
    n = len(a)
    det = 1
    for c in range(n):
        piv = min(range(c, n), key=lambda i: (_valuation(a[i][c], ell, r), i))
        v = _valuation(a[piv][c], ell, r)
        if v >= r:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        unit_inv = pow(p // ell**v, -1, q)
        det = det * p % q
        for i in range(c + 1, n):
            if a[i][c]:
                f = (a[i][c] // ell**v) * unit_inv % q
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[c])]
    return det % q


def det_and_trace(A):
    """(det A, trace A), both canonical residues mod m."""
    mod = A.modulus
    rows = A.rows()
    parts = [_det_prime_power(rows, ell, r) for ell, r in mod.factors]
    det = crt(parts, [ell**r for ell, r in mod.factors])
    trace = sum(A.entries[i * A.n + i] for i in range(A.n)) % A.m
    return det, trace


def _inverse_prime_power(rows, ell, r):
    q = ell**r
    n = len(rows)
    a = [[x % q for x in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] % ell), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = pow(a[c][c], -1, q)
        a[c] = [x * inv % q for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def mat_inv(A):
    mod = A.modulus
    powers = [ell**r for ell, r in mod.factors]
    parts = []
    for ell, r in mod.factors:
        inv = _inverse_prime_power(A.rows(), ell, r)
        if inv is None:
            raise NotInvertible(f"determinant is not a unit mod {A.m}")
        parts.append(inv)
    n = A.n
    entries = tuple(crt([p[i][j] for p in parts], powers) for i in range(n) for j in range(n))
    return MatrixModM(n, A.m, entries)


def is_invertible(A):
    return gcd(det_and_trace(A)[0], A.m) == 1


def reduce_modulus(A, d):
    """Entrywise reduction Z/mZ -> Z/dZ for a divisor d of m."""
    if d < 2 or A.m % d:
        raise NotADivisor(f"{d} is not a divisor >= 2 of {A.m}")
    return MatrixModM(A.n, d, tuple(e % d for e in A.entries))


def lift_crt(parts):
    """Glue matrices over pairwise coprime moduli into one matrix mod their product."""
    n = parts[0].n
    moduli = [P.m for P in parts]
    entries = tuple(crt([P.entries[k] for P in parts], moduli) for k in range(n * n))
    return MatrixModM(n, prod(moduli), entries)


def elementary(n, i, j, c, m):
    """I + c*e_ij."""
    e = [1 % m if a == b else 0 for a in range(n) for b in range(n)]
    e[i * n + j] = (e[i * n + j] + c) % m
    return MatrixModM(n, m, tuple(e))


def block_diagonal(*blocks):
    m = blocks[0].m
    n = sum(B.n for B in blocks)
    e = [0] * (n * n)
    off = 0
    for B in blocks:
        if B.m != m:
            raise ShapeMismatch("blocks over different moduli")
        for i in range(B.n):
            for j in range(B.n):
                e[(off + i) * n + off + j] = B[i, j]
        off += B.n
    return MatrixModM(n, m, tuple(e))


def diagonal_block(A, index, size=2):
    """The ``index``-th ``size`` x ``size`` diagonal block of A."""
    off = index * size
    return MatrixModM(size, A.m, tuple(A[off + i, off + j] for i in range(size) for j in range(size)))


def commutator(A, B):
    return A @ B @ mat_inv(A) @ mat_inv(B)

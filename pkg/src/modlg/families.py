"""Catalog of classical target groups over Z/mZ.

Each family knows how to test membership, how to produce an explicit
generating set, and its exact order (a product over CRT factors).
"""

from dataclasses import dataclass
from math import gcd, prod

from .errors import ShapeMismatch, Unsupported
from .modular import (
    MatrixModM,
    as_modulus,
    block_diagonal,
    det_and_trace,
    diagonal_block,
    elementary,
    euler_phi,
    power_image_size,
    unit_component_generators,
)

TAGS = ("GL", "SL", "Sp", "GSp", "Delta", "SDelta", "DetPower")


@dataclass(frozen=True)
class GroupFamily:
    """A named classical group; ``degree`` is the matrix size (2g for Sp/GSp)."""

    tag: str
    degree: int
    k: int = 0

    def __post_init__(self):
        if self.tag not in TAGS:
            raise Unsupported(f"unknown family tag {self.tag!r}")
        if self.degree < 1:
            raise Unsupported("degree must be positive")
        if self.tag in ("Sp", "GSp") and self.degree % 2:
            raise Unsupported(f"{self.tag} needs even degree")
        if self.tag in ("Delta", "SDelta") and self.degree != 4:
            raise Unsupported(f"{self.tag} is fixed at two 2x2 blocks")
        if self.tag == "DetPower" and self.k < 2:
            raise Unsupported("DetPower needs k >= 2")

    @classmethod
    def GL(cls, n):
        return cls("GL", n)

    @classmethod
    def SL(cls, n):
        return cls("SL", n)

    @classmethod
    def Sp(cls, degree):
        return cls("Sp", degree)

    @classmethod
    def GSp(cls, degree):
        return cls("GSp", degree)

    @classmethod
    def Delta(cls):
        return cls("Delta", 4)

    @classmethod
    def SDelta(cls):
        return cls("SDelta", 4)

    @classmethod
    def DetPower(cls, n, k):
        return cls("DetPower", n, k)

    @property
    def genus(self):
        return self.degree // 2

    def __str__(self):
        if self.tag in ("Delta", "SDelta"):
            return self.tag
        if self.tag == "DetPower":
            return f"DetPower({self.degree},{self.k})"
        return f"{self.tag}({self.degree})"


def symplectic_form(degree, m):
    g = degree // 2
    e = [0] * (degree * degree)
    for i in range(g):
        e[i * degree + g + i] = 1 % m
        e[(g + i) * degree + i] = (-1) % m
    return MatrixModM(degree, m, tuple(e))


def similitude_factor(A):
    """lambda with A J A^t = lambda J, or None when A is not a similitude."""
    J = symplectic_form(A.n, A.m)
    form = A @ J @ A.transpose()
    lam = form[0, A.n // 2]
    if form != J.scale(lam):
        return None
    return lam


def _required_powers(m, k):
    return {pow(u, k - 1, m) for u in range(1, m) if gcd(u, m) == 1}


def is_member(fam, A):
    if A.n != fam.degree:
        raise ShapeMismatch(f"{fam} has degree {fam.degree}, matrix has degree {A.n}")
    m = A.m
    det, _ = det_and_trace(A)
    tag = fam.tag
    if tag == "GL":
        return gcd(det, m) == 1
    if tag == "SL":
        return det == 1 % m
    if tag == "Sp":
        return A @ symplectic_form(A.n, m) @ A.transpose() == symplectic_form(A.n, m)
    if tag == "GSp":
        lam = similitude_factor(A)
        return lam is not None and gcd(lam, m) == 1
    if tag == "DetPower":
        return det in _required_powers(m, fam.k)
    # Delta / SDelta: block-diagonal with off-diagonal blocks zero
    if any(A[i, j] for i in range(4) for j in range(4) if (i < 2) != (j < 2)):
        return False
    d1 = det_and_trace(diagonal_block(A, 0))[0]
    d2 = det_and_trace(diagonal_block(A, 1))[0]
    if tag == "SDelta":
        return d1 == d2 == 1 % m
    return d1 == d2 and gcd(d1, m) == 1


def _sl_generators(n, m):
    if n == 1:
        return [MatrixModM.identity(1, m)]
    return [elementary(n, i, j, 1, m) for i in range(n) for j in range(n) if i != j]


def _symmetric_basis(g):
    basis = []
    for i in range(g):
        for j in range(i, g):
            S = [[0] * g for _ in range(g)]
            S[i][j] = S[j][i] = 1
            basis.append(S)
    return basis


def _sp_generators(degree, m):
    g = degree // 2
    gens = []
    for lower in (False, True):
        for S in _symmetric_basis(g):
            rows = [[1 if i == j else 0 for j in range(degree)] for i in range(degree)]
            for i in range(g):
                for j in range(g):
                    if lower:
                        rows[g + i][j] = S[i][j]
                    else:
                        rows[i][g + j] = S[i][j]
            gens.append(MatrixModM.from_rows(rows, m))
    return gens


def _needs_odd(fam, m):
    if m % 2 == 0:
        raise Unsupported(f"{fam} over even modulus {m} is not supported")


def standard_generators(fam, mod):
    """Explicit generating set of ``fam`` over Z/mZ; every element is a member."""
    m = as_modulus(mod).m
    tag, n = fam.tag, fam.degree
    if tag == "SL":
        return _sl_generators(n, m)
    _needs_odd(fam, m)
    units = unit_component_generators(m)
    if tag == "GL":
        base = _sl_generators(n, m) if n > 1 else []
        return base + [MatrixModM.diagonal([u] + [1] * (n - 1), m) for u in units]
    if tag == "DetPower":
        base = _sl_generators(n, m)
        extra = []
        for u in units:
            d = pow(u, fam.k - 1, m)
            if d != 1 % m:
                extra.append(MatrixModM.diagonal([d] + [1] * (n - 1), m))
        if n == 1:
            return extra or base
        return base + extra
    if tag in ("Sp", "GSp"):
        gens = _sp_generators(n, m)
        if tag == "GSp":
            g = n // 2
            gens += [MatrixModM.diagonal([u] * g + [1] * g, m) for u in units]
        return gens
    I2 = MatrixModM.identity(2, m)
    sl = _sl_generators(2, m)
    gens = [block_diagonal(s, I2) for s in sl] + [block_diagonal(I2, s) for s in sl]
    if tag == "Delta":
        for u in units:
            d = MatrixModM.diagonal([u, 1], m)
            gens.append(block_diagonal(d, d))
    return gens


def _gl_order_local(n, ell, r):
    return ell ** ((r - 1) * n * n) * prod(ell**n - ell**i for i in range(n))


def _sl_order_local(n, ell, r):
    return _gl_order_local(n, ell, r) // ((ell - 1) * ell ** (r - 1))


def _sp_order_local(g, ell, r):
    return ell ** ((r - 1) * g * (2 * g + 1)) * ell ** (g * g) * prod(ell ** (2 * i) - 1 for i in range(1, g + 1))


def family_order(fam, mod):
    """Exact |fam(Z/mZ)|, multiplied over the CRT factors of m."""
    mod = as_modulus(mod)
    m = mod.m
    tag, n = fam.tag, fam.degree
    if tag in ("Sp", "GSp"):
        _needs_odd(fam, m)
    total = 1
    for ell, r in mod.factors:
        phi = (ell - 1) * ell ** (r - 1)
        if tag == "GL":
            total *= _gl_order_local(n, ell, r)
        elif tag == "SL":
            total *= _sl_order_local(n, ell, r)
        elif tag == "Sp":
            total *= _sp_order_local(n // 2, ell, r)
        elif tag == "GSp":
            total *= phi * _sp_order_local(n // 2, ell, r)
        elif tag == "Delta":
            total *= phi * _sl_order_local(2, ell, r) ** 2
        elif tag == "SDelta":
            total *= _sl_order_local(2, ell, r) ** 2
        elif tag == "DetPower":
            total *= _sl_order_local(n, ell, r)
    if tag == "DetPower":
        size = power_image_size(m, fam.k - 1) if m % 2 else len(_required_powers(m, fam.k))
        total *= size
    return total


def commutator_index(fam, mod):
    """[A(Z/mZ) : comm(A(Z/mZ))] for the families whose derived subgroup is
    the determinant/similitude kernel (m coprime to 6)."""
    m = as_modulus(mod).m
    if gcd(m, 6) != 1:
        raise Unsupported("commutator index formula needs m coprime to 6")
    if fam.tag in ("GL", "GSp", "Delta"):
        return euler_phi(m)
    if fam.tag in ("SL", "Sp", "SDelta"):
        return 1
    if fam.tag == "DetPower":
        return power_image_size(m, fam.k - 1)
    raise Unsupported(str(fam))

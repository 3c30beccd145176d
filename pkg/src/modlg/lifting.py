"""Lifting from Z/ell to Z/ell^r, square-zero decompositions, and the
counterexample and sufficient-condition machinery for the local-global question."""

import numpy as np

from .errors import NotTraceZero, PreconditionViolated, SearchExhausted, ShapeMismatch
from .families import GroupFamily, is_member, standard_generators
from .groups import GeneratedGroup
from .modular import MatrixModM, det_and_trace, factor_modulus, is_prime, primitive_root

LIFT_FAMILIES = (GroupFamily.SL(2), GroupFamily.Sp(4))
RANDOM_SEARCH_CAP = 10**6


def _is_square_zero(A):
    return (A @ A).is_zero()


def _square_zero_2x2(ell):
    """All [[a, b], [c, -a]] with a^2 + bc = 0, as an (N, 3) array of (a, b, c)."""
    a, b, c = np.meshgrid(np.arange(ell), np.arange(ell), np.arange(ell), indexing="ij")
    mask = (a * a + b * c) % ell == 0
    return np.stack([a[mask], b[mask], c[mask]], axis=1)


def _decompose_2x2(A, ell):
    target = np.array([A[0, 0], A[0, 1], A[1, 0]])
    sz = _square_zero_2x2(ell)

    def split_two(t):
        rest = (t[None, :] - sz) % ell
        ok = (rest[:, 0] ** 2 + rest[:, 1] * rest[:, 2]) % ell == 0
        hits = np.nonzero(ok)[0]
        return None if not len(hits) else (sz[hits[0]], rest[hits[0]])

    def to_matrix(v):
        a, b, c = (int(x) for x in v)
        return MatrixModM.from_rows([[a, b], [c, -a]], ell)

    pair = split_two(target)
    if pair is not None:
        return tuple(to_matrix(v) for v in pair)
    # depth three and four: peel one square-zero part, then split the rest in two
    for depth in (3, 4):
        for first in sz:
            rest = (target - first) % ell
            if depth == 3:
                pair = split_two(rest)
                if pair is not None:
                    return tuple(to_matrix(v) for v in (first, *pair))
            else:
                for second in sz:
                    pair = split_two((rest - second) % ell)
                    if pair is not None:
                        return tuple(to_matrix(v) for v in (first, second, *pair))
    raise SearchExhausted("no decomposition into four square-zero matrices found")


def _random_square_zero(rng, n, ell, count):
    """Rank-one square-zero matrices u v^t with v.u = 0."""
    u = rng.integers(0, ell, size=(count, n))
    u[np.all(u == 0, axis=1), 0] = 1
    v = rng.integers(0, ell, size=(count, n))
    pivot = np.argmax(u != 0, axis=1)
    rows = np.arange(count)
    v[rows, pivot] = 0
    partial = np.einsum("ij,ij->i", u, v) % ell
    inv = np.array([pow(int(x), -1, ell) for x in u[rows, pivot]])
    v[rows, pivot] = (-partial * inv) % ell
    return (u[:, :, None] * v[:, None, :]) % ell


def _decompose_random(A, ell, seed, cap):
    n = A.n
    rng = np.random.default_rng(seed)
    target = np.array(A.rows(), dtype=np.int64)
    batch = 4096
    tried = 0
    while tried < cap:
        parts = [_random_square_zero(rng, n, ell, batch) for _ in range(3)]
        rest = (target[None] - parts[0] - parts[1] - parts[2]) % ell
        ok = np.all(np.matmul(rest, rest) % ell == 0, axis=(1, 2))
        hits = np.nonzero(ok)[0]
        if len(hits):
            i = hits[0]
            mats = [p[i] for p in parts] + [rest[i]]
            return tuple(MatrixModM.from_rows(M.tolist(), ell) for M in mats)
        tried += batch
    raise SearchExhausted(f"random search gave up after {cap} attempts")


def square_zero_decompose(A, seed=0, cap=RANDOM_SEARCH_CAP):
    """Write a trace-zero matrix over a prime field as a sum of at most four
    square-zero matrices.

    Degree 2 uses an exhaustive search; larger degrees use a seeded random
    search and raise SearchExhausted after ``cap`` attempts.
    """
    if not is_prime(A.m):
        raise PreconditionViolated("modulus must be prime")
    ell = A.m
    if det_and_trace(A)[1] != 0:
        raise NotTraceZero("matrix has nonzero trace")
    zero = MatrixModM(A.n, ell, (0,) * (A.n * A.n))
    if A.is_zero():
        return (zero,) * 4
    if _is_square_zero(A):
        return (A,)
    if A.n == 2:
        return _decompose_2x2(A, ell)
    return _decompose_random(A, ell, seed, cap)


def _prime_power_parts(H, ell, r):
    mod = factor_modulus(H.m)
    if mod.factors != ((ell, r),):
        raise PreconditionViolated(f"group must live mod {ell}^{r}")


def lift_check_sl2(ell, r, H):
    """(proj_full, full): does H mod ell equal SL2(F_ell), does H equal SL2(Z/ell^r)."""
    return lift_check_algebraic(GroupFamily.SL(2), ell, r, H)


def lift_check_algebraic(family, ell, r, H):
    """Same pair of checks for a determinant-one algebraic family (SL2 or Sp4)."""
    if family not in LIFT_FAMILIES:
        raise PreconditionViolated(f"family {family} is not a supported lifting family")
    if H.n != family.degree:
        raise ShapeMismatch(f"{family} has degree {family.degree}, group has degree {H.n}")
    _prime_power_parts(H, ell, r)
    for i, A in enumerate(H.generators):
        if not is_member(family, A):
            raise PreconditionViolated(f"generator {i} is not in {family}")
    proj_full = H.project(ell).equals_family(family) if r > 1 else H.equals_family(family)
    full = H.equals_family(family)
    return proj_full, full


def teichmuller_unit(ell):
    """Order-(ell-1) unit mod ell^2 reducing to the smallest primitive root mod ell."""
    q = ell * ell
    g = primitive_root(ell)
    t = pow(g, ell, q)
    assert t % ell == g and pow(t, ell - 1, q) == 1
    return t


def construct_counterexample(ell):
    """<SL2(Z/ell^2), diag(t, 1)>: surjects onto GL2(F_ell) yet is proper.

    Its order is (ell - 1) * |SL2(Z/ell^2)|, since the determinant image is
    the order-(ell - 1) subgroup generated by the Teichmuller unit t.
    """
    if not is_prime(ell) or ell <= 5:
        raise PreconditionViolated("ell must be a prime > 5")
    q = ell * ell
    t = teichmuller_unit(ell)
    gens = standard_generators(GroupFamily.SL(2), q) + [MatrixModM.diagonal([t, 1], q)]
    return GeneratedGroup(gens)


def check_general_conditions(G, family, cap=None):
    """Evaluate the two sufficient conditions for G = A(Z/mZ).

    (1) per prime: comm(A(F_ell)) lies in the mod-ell image of the kernel
        component of G at ell.
    (2) [G : comm(G)] = [A(Z/mZ) : comm(A(Z/mZ))].
    """
    if family.degree != G.n:
        raise ShapeMismatch(f"{family} has degree {family.degree}, group has degree {G.n}")
    mod = G.modulus
    cond1 = {}
    for ell in mod.primes:
        local = G.kernel_component(ell, cap).project(ell)
        target = GeneratedGroup.from_family(family, ell).commutator_subgroup()
        cond1[ell] = all(local.contains(A) for A in target.generators)
    g_index = G.order() // G.commutator_subgroup().order()
    full = GeneratedGroup.from_family(family, mod)
    a_index = full.order() // full.commutator_subgroup().order()
    cond2 = g_index == a_index
    return {
        "family": str(family),
        "modulus": mod.m,
        "condition1": cond1,
        "condition2": cond2,
        "abelianization_index": g_index,
        "target_abelianization_index": a_index,
        "conditions_conclude_equality": all(cond1.values()) and cond2,
        "equals_family": G.equals_family(family),
    }

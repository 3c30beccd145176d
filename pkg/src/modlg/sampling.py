"""Seeded random subgroups for the randomized lemma and oracle checks.

A subgroup is drawn by picking 1..max_gens generators; each generator is a
random word in the generators of one "pool", a structured subgroup such as
the whole group, a Borel, a Cartan normalizer, or a congruence kernel.
Composite moduli pick a pool per prime factor and glue elements by CRT.
Mixing pools this way yields both full and proper subgroups.
"""

import numpy as np

from .families import GroupFamily, standard_generators
from .groups import GeneratedGroup
from .lifting import teichmuller_unit
from .modular import MatrixModM, block_diagonal, elementary, factor_modulus, lift_crt, mat_inv, primitive_root

KINDS = ("SL2", "GL2", "Sp4")
FULL_WEIGHT = 0.5


def random_word(gens, rng, length=12):
    n, m = gens[0].n, gens[0].m
    letters = list(gens) + [mat_inv(g) for g in gens]
    out = MatrixModM.identity(n, m)
    for i in rng.integers(0, len(letters), size=length):
        out = out @ letters[int(i)]
    return out


def _norm_one_torus(ell, q, count=3):
    """A few norm-one elements [[x, eps*y], [y, x]] mod q of a nonsplit torus."""
    eps = next(e for e in range(2, ell) if pow(e, (ell - 1) // 2, ell) == ell - 1)
    found = []
    for x in range(q):
        for y in range(1, q):
            if (x * x - eps * y * y) % q == 1 and x % ell and y % ell:
                found.append(MatrixModM.from_rows([[x, eps * y], [y, x]], q))
                if len(found) == count:
                    return found
    return found


def _sl2_pools(ell, q):
    u = primitive_root(q) if ell > 2 else 1
    u_inv = pow(u, -1, q)
    J = MatrixModM.from_rows([[0, 1], [-1, 0]], q)
    torus = MatrixModM.diagonal([u, u_inv], q)
    pools = {
        "full": standard_generators(GroupFamily.SL(2), q),
        "borel": [elementary(2, 0, 1, 1, q), torus],
        "split_normalizer": [torus, J],
        "nonsplit": _norm_one_torus(ell, q),
        "small": [J],
    }
    if q != ell:
        congruence = [elementary(2, 0, 1, ell, q), elementary(2, 1, 0, ell, q)]
        pools["congruence"] = congruence
        pools["borel_congruence"] = pools["borel"] + congruence
        pools["split_congruence"] = pools["split_normalizer"] + congruence
    return pools


def _gl2_pools(ell, q):
    pools = dict(_sl2_pools(ell, q))
    u = primitive_root(q)
    pools["full_gl"] = standard_generators(GroupFamily.GL(2), q)
    pools["det_squares"] = standard_generators(GroupFamily.SL(2), q) + [MatrixModM.diagonal([u * u % q, 1], q)]
    pools["scalars_sl"] = standard_generators(GroupFamily.SL(2), q) + [MatrixModM.diagonal([u, u], q)]
    pools["borel_gl"] = [elementary(2, 0, 1, 1, q), MatrixModM.diagonal([u, 1], q), MatrixModM.diagonal([1, u], q)]
    if q != ell:
        t = teichmuller_unit(ell) if ell > 5 else pow(u, ell, q)
        pools["teichmuller"] = standard_generators(GroupFamily.SL(2), q) + [MatrixModM.diagonal([t, 1], q)]
    return pools


def _sp4_pools(ell, q):
    full = standard_generators(GroupFamily.Sp(4), q)
    u = primitive_root(q)
    u_inv = pow(u, -1, q)

    def levi(a):
        # [[A, 0], [0, A^-t]] in the (e1, e2, f1, f2) basis
        a_it = mat_inv(a).transpose()
        return block_diagonal(a, a_it)

    def pair(s, slot):
        # SL2 acting on the (e_slot, f_slot) plane
        rows = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
        idx = (slot, slot + 2)
        for a in range(2):
            for b in range(2):
                rows[idx[a]][idx[b]] = s[a, b]
        return MatrixModM.from_rows(rows, q)

    upper = full[: len(full) // 2]
    sl2 = standard_generators(GroupFamily.SL(2), q)
    pools = {
        "full": full,
        "siegel_parabolic": upper + [levi(elementary(2, 0, 1, 1, q)), levi(MatrixModM.diagonal([u, 1], q))],
        "sl2_pair": [pair(s, 0) for s in sl2] + [pair(s, 1) for s in sl2],
        "levi": [levi(elementary(2, 0, 1, 1, q)), levi(elementary(2, 1, 0, 1, q)), levi(MatrixModM.diagonal([u, u_inv], q))],
        "unipotent": upper,
    }
    if q != ell:
        pools["congruence"] = [_scale_off_identity(g, ell) for g in full]
        pools["parabolic_congruence"] = pools["siegel_parabolic"] + pools["congruence"]
    return pools


def _scale_off_identity(g, c):
    """I + c (g - I): for a unipotent symplectic transvection this is the c-th power."""
    n, q = g.n, g.m
    eye = MatrixModM.identity(n, q)
    return eye + (g - eye).scale(c)


_POOLS = {"SL2": _sl2_pools, "GL2": _gl2_pools, "Sp4": _sp4_pools}
_DEGREE = {"SL2": 2, "GL2": 2, "Sp4": 4}


def _pick_pools(kind, m, rng):
    chosen = []
    for ell, r in factor_modulus(m).factors:
        q = ell**r
        pools = _POOLS[kind](ell, q)
        # the whole group gets half the weight so both verdicts are common
        if rng.random() < FULL_WEIGHT:
            chosen.append(pools["full_gl" if kind == "GL2" else "full"])
            continue
        keys = sorted(pools)
        chosen.append(pools[keys[int(rng.integers(0, len(keys)))]])
    return chosen


def random_element(kind, m, rng, length=12, pools=None):
    if pools is None:
        pools = _pick_pools(kind, m, rng)
    parts = [random_word(gens, rng, length) for gens in pools]
    return parts[0] if len(parts) == 1 else lift_crt(parts)


def random_subgroup(kind, m, rng, max_gens=3):
    """Seeded random subgroup of SL2, GL2 or Sp4 over Z/mZ with 1..max_gens generators.

    Half the draws fix one pool per prime for all generators (these tend to
    generate the pool's subgroup, often the whole group); the rest pick a
    fresh pool for every generator.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    count = int(rng.integers(1, max_gens + 1))
    coherent = _pick_pools(kind, m, rng) if rng.integers(0, 2) else None
    gens = [random_element(kind, m, rng, pools=coherent) for _ in range(count)]
    return GeneratedGroup(gens, m=m, degree=_DEGREE[kind])


def random_subgroups(kind, m, count, seed, max_gens=3):
    rng = np.random.default_rng(seed)
    return [random_subgroup(kind, m, rng, max_gens) for _ in range(count)]

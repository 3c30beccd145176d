"""Independent oracles and fixture builders shared by the tests."""

import functools
import itertools

from modlg.families import GroupFamily
from modlg.groups import GeneratedGroup
from modlg.modular import MatrixModM, block_diagonal


def naive_closure(gens):
    """Plain-Python BFS over hashable matrices; the independent closure oracle."""
    n, m = gens[0].n, gens[0].m
    eye = MatrixModM.identity(n, m)
    seen = {eye}
    frontier = [eye]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def all_matrices(n, m):
    for entries in itertools.product(range(m), repeat=n * n):
        yield MatrixModM(n, m, entries)


def delta_fixture(unit, m=49):
    """SDelta(m) generators plus the block pair diag(unit, 1) (+) diag(unit, 1)."""
    sdelta = GeneratedGroup.from_family(GroupFamily.SDelta(), m)
    d = MatrixModM.diagonal([unit, 1], m)
    return GeneratedGroup(list(sdelta.generators) + [block_diagonal(d, d)])


def table_of(G):
    """Enumerated multiplication table of a GeneratedGroup."""
    from modlg import _batch as B
    from modlg.occ import MatrixGroupTable

    codes = G.closure_codes()
    gen_codes = B.encode_mats(B.to_array(G.generators, G.n, G.m), G.m)
    return MatrixGroupTable(codes, G.n, G.m, gen_codes)


# -- galrep oracles ----------------------------------------------------------


def brute_force_ap(coeffs, p):
    """p + 1 - #E(F_p) on the long Weierstrass model, counting (x, y) directly."""
    a1, a2, a3, a4, a6 = (c % p for c in coeffs)
    count = 1
    for x in range(p):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                count += 1
    return p + 1 - count


CURVE_CORPUS = [
    (0, 0, 1, -1, 0),
    (0, 0, 0, 0, 1),
    (0, 0, 0, 1, 0),
    (0, 0, 0, -1, 0),
    (1, 1, 1, -10, -10),
    (0, -1, 1, -10, -20),
    (1, 0, 1, 4, -6),
    (0, 1, 1, -2, 0),
    (1, -1, 1, -1, 0),
    (0, 0, 0, -2, 1),
    (0, 0, 0, 3, 5),
    (1, 0, 0, -1, 0),
    (0, 0, 1, 0, -7),
    (0, 0, 0, -4, 4),
    (1, 1, 0, -2, 0),
    (0, -1, 0, -4, 4),
    (1, 0, 1, -19, 26),
    (0, 0, 0, 7, -3),
    (0, 1, 0, 5, 2),
    (1, -1, 0, 3, -11),
]


def exceptional_rep(ell, seed=0):
    """Elements of a scalar-extended exceptional (binary octahedral) subgroup
    of GL2(F_ell), found by seeded random search inside SL2(F_ell)."""
    import numpy as np

    from modlg.families import GroupFamily, standard_generators
    from modlg.sampling import random_word

    rng = np.random.default_rng(seed)
    sl2 = standard_generators(GroupFamily.SL(2), ell)
    target = 48 if ell % 8 in (1, 7) else 24
    while True:
        gens = [random_word(sl2, rng, 20), random_word(sl2, rng, 20)]
        if len(naive_closure(gens)) == target:
            break
    scalar = MatrixModM.diagonal([primitive_root_mod(ell)] * 2, ell)
    return naive_closure(gens + [scalar])


def primitive_root_mod(ell):
    from modlg.modular import primitive_root

    return primitive_root(ell)


def representative_groups(ell):
    """Element sets of one representative per maximal class of GL2(F_ell)."""
    from modlg.galrep import maximal_representatives

    reps = {
        name: [MatrixModM.from_rows([[a, b], [c, d]], ell) for a, b, c, d in rows.tolist()]
        for name, rows in maximal_representatives(ell).items()
    }
    reps["Exceptional"] = sorted(exceptional_rep(ell), key=lambda A: A.entries)
    return reps


@functools.lru_cache(maxsize=None)
def primes_congruent(residue, ell, start=200, count=400):
    from modlg.modular import is_prime

    out = []
    p = start
    while len(out) < count:
        if is_prime(p) and p % ell == residue:
            out.append(p)
        p += 1
    return tuple(out)


def synthesize_samples(elements, ell, rng):
    """Frobenius-like samples whose (p mod ell, a_p mod ell) pairs come from ``elements``."""
    from modlg.galrep import FrobeniusSample

    samples = []
    used = set()
    for A in elements:
        det, trace = A.det(), A.trace()
        centred = trace if trace <= ell // 2 else trace - ell
        candidates = primes_congruent(det, ell)
        start = int(rng.integers(0, len(candidates) // 2))
        p = next(q for q in candidates[start:] if q not in used)
        used.add(p)
        samples.append(FrobeniusSample(p, centred, p % ell))
    samples.sort(key=lambda s: s.p)
    return samples


def soundness_trial(reps, ell, rng):
    """One fuzz draw: a random subgroup of a random maximal representative,
    turned into samples. Returns (class name, mod_ell_test result)."""
    from modlg.galrep import CLASSES, mod_ell_test

    name = CLASSES[int(rng.integers(0, len(CLASSES)))]
    pool = reps[name]
    gens = [pool[int(i)] for i in rng.integers(0, len(pool), size=int(rng.integers(1, 4)))]
    elements = naive_closure(gens)
    return name, mod_ell_test(synthesize_samples(sorted(elements, key=lambda A: A.entries), ell, rng), ell)

import numpy as np
import pytest

from modlg import _batch as B
from modlg.errors import CapExceeded, NotADivisor, ShapeMismatch
from modlg.families import GroupFamily, family_order
from modlg.groups import (
    GeneratedGroup,
    closure,
    commutator_subgroup,
    contains_element,
    contains_family,
    equals_family,
    group_order,
    kernel_component,
    project_group,
)
from modlg.lifting import construct_counterexample
from modlg.modular import MatrixModM
from modlg.sampling import random_subgroups

from oracles import naive_closure

GL2, SL2, Sp4 = GroupFamily.GL(2), GroupFamily.SL(2), GroupFamily.Sp(4)
M = MatrixModM.from_rows


def fam(f, m):
    return GeneratedGroup.from_family(f, m)


def test_generators_deduplicated_in_order():
    a, b = M([[1, 1], [0, 1]], 7), M([[1, 0], [1, 1]], 7)
    G = GeneratedGroup([a, b, a, M([[8, 1], [7, 1]], 7)])
    assert G.generators == (a, b)


def test_closure_examples():
    I = MatrixModM.identity(2, 7)
    assert closure(GeneratedGroup([I])) == [I]
    assert len(closure(fam(SL2, 7))) == 336
    with pytest.raises(CapExceeded):
        closure(fam(GL2, 77), cap=10**6)


def test_closure_sorted_and_matches_naive():
    G = GeneratedGroup([M([[2, 1], [1, 1]], 7), M([[0, 1], [6, 0]], 7)])
    elems = closure(G)
    assert set(elems) == naive_closure(list(G.generators))
    assert elems == sorted(elems, key=lambda A: A.entries)


def test_group_order_examples():
    assert group_order(fam(GL2, 49)) == 4840416
    assert group_order(GeneratedGroup.trivial(2, 7)) == 1
    assert group_order(fam(Sp4, 3)) == 51840


@pytest.mark.parametrize(
    "f,m",
    [(GL2, 7), (GL2, 49), (GL2, 77), (SL2, 7), (Sp4, 3), (Sp4, 9), (GroupFamily.Delta(), 7),
     (GroupFamily.Delta(), 49), (GroupFamily.GSp(4), 7), (GroupFamily.SDelta(), 49), (GroupFamily.GL(3), 7)],
    ids=str,
)
def test_chain_order_matches_formula(f, m):
    assert fam(f, m).order() == family_order(f, m)


def test_contains_element_examples():
    G = fam(SL2, 7)
    for g in G.generators:
        assert contains_element(G, g)
    assert contains_element(G, MatrixModM.identity(2, 7))
    assert not contains_element(G, MatrixModM.diagonal([3, 1], 7))
    with pytest.raises(ShapeMismatch):
        contains_element(G, MatrixModM.identity(2, 11))


def test_contains_element_agrees_with_naive_closure():
    rng = np.random.default_rng(11)
    for G in random_subgroups("GL2", 7, 25, seed=12):
        members = naive_closure(list(G.generators))
        assert G.order() == len(members)
        for _ in range(40):
            A = M(rng.integers(0, 7, size=(2, 2)).tolist(), 7)
            assert contains_element(G, A) == (A in members)


def test_contains_family_examples():
    assert contains_family(fam(GL2, 49), SL2)
    assert not contains_family(GeneratedGroup.trivial(2, 7), SL2)
    assert contains_family(construct_counterexample(7), SL2)
    with pytest.raises(ShapeMismatch):
        contains_family(fam(GL2, 7), Sp4)


def test_equals_family_examples():
    assert equals_family(fam(GL2, 77), GL2)
    assert not equals_family(fam(SL2, 7), GL2)
    assert not equals_family(construct_counterexample(7), GL2)


def test_commutator_subgroup_examples():
    assert commutator_subgroup(GeneratedGroup([MatrixModM.diagonal([3, 1], 7)])).order() == 1
    assert commutator_subgroup(fam(GL2, 7)).order() == 336
    assert commutator_subgroup(fam(Sp4, 3)).order() == 51840


def test_commutator_commutes_with_projection():
    for G in random_subgroups("GL2", 49, 6, seed=3):
        a = commutator_subgroup(G).project(7)
        b = commutator_subgroup(G.project(7))
        assert set(closure(a)) == set(closure(b))


def test_project_examples():
    assert project_group(fam(GL2, 49), 7).order() == 2016
    G = fam(SL2, 49)
    assert set(closure(project_group(G, 49))) == set(closure(G))
    assert project_group(GeneratedGroup.trivial(2, 77), 7).order() == 1
    with pytest.raises(NotADivisor):
        project_group(G, 5)


def test_project_image_property():
    for G in random_subgroups("GL2", 49, 5, seed=8):
        mats = B.decode_mats(G.closure_codes(), 49, 2) % 7
        image = np.unique(B.encode_mats(mats, 7))
        assert np.array_equal(image, G.project(7).closure_codes())
        assert G.order() % G.project(7).order() == 0


def test_kernel_component_examples():
    G = fam(GL2, 49)
    assert kernel_component(G, 7) is G
    K = kernel_component(fam(GL2, 77), 7)
    assert K.m == 7 and K.order() == 2016
    K = kernel_component(GeneratedGroup.trivial(2, 77), 7)
    assert K.m == 7 and K.order() == 1
    with pytest.raises(NotADivisor):
        kernel_component(G, 5)


def test_kernel_times_projection_is_order():
    for G in random_subgroups("GL2", 77, 4, seed=21):
        if G.order() > 2 * 10**6:
            continue
        assert kernel_component(G, 7).order() * G.project(11).order() == G.order()
        assert kernel_component(G, 11).order() * G.project(7).order() == G.order()


def test_order_independent_of_generator_order():
    rng = np.random.default_rng(5)
    for G in random_subgroups("Sp4", 9, 5, seed=6):
        gens = list(G.generators)
        rng.shuffle(gens)
        assert GeneratedGroup(gens, m=9, degree=4).order() == G.order()


def test_cache_does_not_change_answers():
    G1, G2 = fam(GL2, 7), fam(GL2, 7)
    G1.closure()
    probe = MatrixModM.diagonal([2, 4], 7)
    assert G1.order() == G2.order() and G1.contains(probe) == G2.contains(probe)


def test_concurrent_queries_agree():
    from concurrent.futures import ThreadPoolExecutor

    G = fam(GL2, 49)
    with ThreadPoolExecutor(4) as pool:
        orders = list(pool.map(lambda _: G.order(), range(8)))
    assert set(orders) == {4840416}


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("MODLG_CAP", "100")
    with pytest.raises(CapExceeded):
        fam(SL2, 7).closure()

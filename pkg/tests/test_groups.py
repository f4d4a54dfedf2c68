import itertools
import random

import pytest

from tavorder.errors import OrderBoundExceeded, PrimePowerInput
from tavorder.groups import (CASE_CYCLIC, CASE_NONABELIAN, REASON_P_GROUP, FiniteGroup,
                             Permutation, abelianization_is_cyclic, classify_tav,
                             commutator_subgroup, conjugacy_classes, group_from_generators,
                             is_p_group, minimal_nonprimepower_subgroup, normal_closure,
                             regular_action, regular_representation, subgroup_closure)


def cyc(d, *cycles):
    return Permutation.from_cycles(d, cycles).image


S3 = group_from_generators(3, [cyc(3, (0, 1)), cyc(3, (0, 1, 2))])
S4 = group_from_generators(4, [cyc(4, (0, 1)), cyc(4, (0, 1, 2, 3))])
A4 = group_from_generators(4, [cyc(4, (0, 1, 2)), cyc(4, (0, 1), (2, 3))])


def find(G, perm):
    return G.index[tuple(perm)]


def test_permutation_product_convention():
    a, b = Permutation.from_cycles(3, [(0, 1)]), Permutation.from_cycles(3, [(1, 2)])
    # first a then b: 0 -> 1 -> 2
    assert (a * b).image[0] == 2
    assert (a * a.inverse()) == Permutation.identity(3)
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_group_orders():
    assert S3.order == 6
    assert group_from_generators(4, [cyc(4, (0, 1, 2, 3))]).order == 4
    assert S4.order == 24
    assert S4.identity == 0
    with pytest.raises(OrderBoundExceeded):
        group_from_generators(6, [cyc(6, (0, 1)), cyc(6, (0, 1, 2, 3, 4, 5))], bound=100)


def test_closure_under_products():
    rng = random.Random(0)
    for G in (S3, S4, A4):
        for _ in range(50):
            a, b = rng.randrange(G.order), rng.randrange(G.order)
            assert 0 <= G.mul(a, b) < G.order
            assert G.mul(a, G.inv(a)) == G.identity


def test_conjugacy_classes():
    assert [len(c) for c in conjugacy_classes(S3)] == [1, 3, 2]
    Z4 = group_from_generators(4, [cyc(4, (0, 1, 2, 3))])
    assert [len(c) for c in conjugacy_classes(Z4)] == [1, 1, 1, 1]
    sizes = [len(c) for c in conjugacy_classes(S4)]
    assert sorted(sizes) == [1, 3, 6, 6, 8]
    # brute-force oracle
    brute = {frozenset(S4.conj(x, g) for g in range(24)) for x in range(24)}
    assert {frozenset(c) for c in conjugacy_classes(S4)} == brute
    mins = [min(c) for c in conjugacy_classes(S4)]
    assert mins == sorted(mins)


def test_normal_closure():
    assert len(normal_closure(S4, find(S4, cyc(4, (0, 1))))) == 24
    assert len(normal_closure(S4, find(S4, cyc(4, (0, 1), (2, 3))))) == 4
    assert len(normal_closure(S4, S4.identity)) == 1


def test_commutator_subgroup():
    assert len(commutator_subgroup(S4)) == 12
    assert len(commutator_subgroup(A4)) == 4
    Z6 = group_from_generators(6, [cyc(6, (0, 1, 2, 3, 4, 5))])
    assert len(commutator_subgroup(Z6)) == 1
    brute = subgroup_closure(S4, {S4.commutator(a, b) for a in range(24) for b in range(24)})
    assert set(brute) == set(commutator_subgroup(S4))


def test_is_p_group():
    assert is_p_group(8) == (True, 2)
    assert is_p_group(12) == (False, None)
    assert is_p_group(1)[0] is True
    assert is_p_group(49) == (True, 7)


def test_classify_examples():
    v = classify_tav(A4)
    assert not v.is_tav and REASON_P_GROUP in v.reasons and v.commutator_order == 4
    D15 = group_from_generators(15, [cyc(15, tuple(range(15))),
                                     cyc(15, *[(i, 15 - i) for i in range(1, 8)])])
    v = classify_tav(D15)
    assert D15.order == 30 and v.is_tav
    assert v.witness_subgroup.order == 15 and v.witness_subgroup.case == CASE_CYCLIC
    v = classify_tav(S4)
    assert v.is_tav and v.normally_single_generated
    assert v.witness_subgroup.order == 12 and v.witness_subgroup.case == CASE_NONABELIAN


def test_minimal_subgroup_examples():
    Z15 = group_from_generators(15, [cyc(15, tuple(range(15)))])
    w = minimal_nonprimepower_subgroup(Z15, range(15))
    assert w.order == 15 and w.case == CASE_CYCLIC
    w = minimal_nonprimepower_subgroup(S4, commutator_subgroup(S4))
    assert w.order == 12 and w.case == CASE_NONABELIAN
    Z30 = group_from_generators(30, [cyc(30, tuple(range(30)))])
    w = minimal_nonprimepower_subgroup(Z30, range(30))
    assert w.order == 6 and w.case == CASE_CYCLIC
    # deterministic
    assert minimal_nonprimepower_subgroup(Z30, range(30)) == w
    with pytest.raises(PrimePowerInput):
        minimal_nonprimepower_subgroup(A4, commutator_subgroup(A4))


def test_abelian_groups_never_tav(catalog):
    for e in catalog.in_orders(1, 30):
        G = e.group()
        if G.is_abelian():
            assert not classify_tav(G).is_tav


def test_normal_generation_implies_cyclic_abelianization(catalog):
    for e in catalog.in_orders(1, 30):
        G = e.group()
        v = classify_tav(G)
        if v.normally_single_generated:
            assert abelianization_is_cyclic(G)


def test_regular_representation():
    n = S3.order
    assert regular_representation(S3, S3.identity) == [[int(i == j) for j in range(n)]
                                                         for i in range(n)]
    Z2 = group_from_generators(2, [cyc(2, (0, 1))])
    assert regular_representation(Z2, 1) == [[0, 1], [1, 0]]

    def matmul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
                for i in range(len(a))]

    for g, h in itertools.product(range(n), repeat=2):
        assert matmul(regular_representation(S3, g), regular_representation(S3, h)) == \
            regular_representation(S3, S3.mul(g, h))


def test_regular_action_faithful(catalog):
    for e in catalog.in_orders(1, 24):
        G = e.group()
        perms = regular_action(G)
        ident = tuple(range(G.order))
        assert [g for g in range(G.order) if perms[g] == ident] == [G.identity]


def test_evaluate_word_and_power():
    g = find(S4, cyc(4, (0, 1, 2, 3)))
    assert S4.power(g, 4) == S4.identity
    assert S4.element_order(g) == 4
    assert S4.evaluate_word([g], (1, 1, -1)) == g
    assert isinstance(S4, FiniteGroup)

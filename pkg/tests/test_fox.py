from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tavorder.epi import enumerate_homs
from tavorder.errors import InvalidHom
from tavorder.fox import (GroupRingElement, TwistedSetup, classical_alexander, fox_derivative,
                          phi_map, twisted_alexander, wada_invariant, wada_matrix)
from tavorder.knots import free_reduce
from tavorder.laurent import ONE, ZERO, LaurentPoly, equal_up_to_units, parse_laurent as P

words = st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), max_size=12).map(tuple)


def test_fox_examples():
    assert fox_derivative((1, 2), 1) == GroupRingElement.one()
    d = fox_derivative((1, 2, 1, -2, -1, -2), 1)
    expect = GroupRingElement({(): 1, (1, 2): 1, (1, 2, 1, -2, -1): -1})
    assert d == expect
    assert fox_derivative((-1,), 1) == GroupRingElement({(-1,): -1})


@settings(max_examples=200)
@given(words)
def test_fox_fundamental_identity(w):
    total = GroupRingElement()
    for j in (1, 2, 3):
        total = total + fox_derivative(w, j) * (GroupRingElement.word((j,)) - GroupRingElement.one())
    assert total == GroupRingElement.word(free_reduce(w)) - GroupRingElement.one()


def test_phi_map_examples(knots, catalog):
    u = knots.get("unknot")
    Z2 = catalog.group("Z2")
    setup = TwistedSetup.build(u, Z2, [1])
    assert phi_map(GroupRingElement.one(), setup) == [[ONE, ZERO], [ZERO, ONE]]
    e = GroupRingElement.word((1,)) - GroupRingElement.one()
    assert phi_map(e, setup) == [[P("-1"), P("t")], [P("t"), P("-1")]]
    triv = TwistedSetup.build(u, catalog.group("Z1"), [0])
    assert phi_map(GroupRingElement.word((1,)), triv) == [[P("t")]]


def test_unknot_numerator_empty(knots, catalog):
    setup = TwistedSetup.build(knots.get("unknot"), catalog.group("S3"), [1])
    num, den = wada_matrix(setup)
    assert num.rows == 0
    res = twisted_alexander(setup)
    assert not res.zero and res.numerator == ONE and not den.is_zero()


def test_trefoil_trivial_group(knots, catalog):
    p = knots.get("3_1@reduced")
    num, den = wada_matrix(TwistedSetup.build(p, catalog.group("Z1"), [0, 0]))
    assert num.rows == 1
    assert equal_up_to_units(num[0, 0], P("t^2 - t + 1"))
    assert equal_up_to_units(den, P("t - 1"))


def test_trefoil_z2_cyclic_formula(knots, catalog):
    p = knots.get("3_1@reduced")
    num, den = wada_invariant(TwistedSetup.build(p, catalog.group("Z2"), [1, 1]))
    delta = P("t^2 - t + 1")
    delta_neg = LaurentPoly({e: c * (-1) ** e for e, c in delta.terms.items()})
    assert equal_up_to_units(num, delta * delta_neg)


def test_classical_alexander_values(knots):
    assert classical_alexander(knots.get("unknot")) == ONE
    assert classical_alexander(knots.get("3_1")) == P("t^2 - t + 1")
    assert classical_alexander(knots.get("4_1")) == P("t^2 - 3t + 1")


def test_denominator_structure(knots, catalog):
    p = knots.get("3_1")
    G = catalog.group("S3")
    for h in enumerate_homs(p, G):
        num, den = wada_matrix(TwistedSetup.build(p, G, h))
        assert not den.is_zero()
        assert den.degree() == G.order


@pytest.mark.parametrize("name", ["3_1", "4_1", "3_1@reduced", "4_1@reduced"])
def test_pivot_independence(knots, catalog, name):
    p = knots.get(name)
    for e in catalog.in_orders(1, 6):
        G = e.group()
        for h in enumerate_homs(p, G):
            base = TwistedSetup.build(p, G, h)
            quotients = []
            for j in range(1, p.ngens + 1):
                if p.phi[j - 1] == 0:
                    continue
                num, den = wada_invariant(replace(base, pivot=j))
                quotients.append((num, den))
            n0, d0 = quotients[0]
            for n1, d1 in quotients[1:]:
                assert equal_up_to_units(n0 * d1, n1 * d0), (name, e.id, h.images)


def test_invalid_hom_names_relator(knots, catalog):
    p = knots.get("3_1")
    with pytest.raises(InvalidHom) as ei:
        TwistedSetup.build(p, catalog.group("S3"), [1, 2, 3])
    assert ei.value.relator_index is not None and "r" in str(ei.value)


def test_natural_action_degree(knots, catalog):
    p = knots.get("3_1")
    G = catalog.group("S3")
    h = enumerate_homs(p, G, surjective_only=True)[0]
    s = TwistedSetup.build(p, G, h, action="natural")
    assert s.degree == G.degree
    assert not twisted_alexander(s).zero


def test_screen_mode_matches_certify(knots, catalog):
    p = knots.get("5_2")
    G = catalog.group("D5")
    for h in enumerate_homs(p, G, surjective_only=True):
        s = TwistedSetup.build(p, G, h)
        assert twisted_alexander(s, mode="screen").zero == twisted_alexander(s).zero

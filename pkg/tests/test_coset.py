import pytest

from tavorder.coset import GroupPresentation, coset_enumeration, coset_table
from tavorder.errors import EnumerationBoundExceeded
from tavorder.groups import classify_tav


def test_cyclic():
    G = coset_enumeration(GroupPresentation(1, [(1, 1, 1, 1, 1)]))
    assert G.order == 5 and G.degree == 5


def test_s3():
    G = coset_enumeration(GroupPresentation(2, [(1, 1), (2, 2, 2), (1, 2, 1, 2)]))
    assert G.order == 6 and G.degree == 6 and not G.is_abelian()


def test_subgroup_cosets():
    perms, index = coset_table(GroupPresentation(2, [(1, 1), (2, 2, 2), (1, 2, 1, 2)]), [(1,)])
    assert index == 3


def test_order_96_presentation(catalog):
    e = catalog.get("Z2^4:S3")
    G = coset_enumeration(e.presentation)
    assert G.order == 96 and G.degree == 96
    assert classify_tav(G).is_tav


def test_bound():
    with pytest.raises(EnumerationBoundExceeded):
        coset_enumeration(GroupPresentation(2, [(1, 2, -1, -2)]), bound=500)


def test_bad_relator_letters():
    with pytest.raises(ValueError):
        GroupPresentation(1, [(2,)])

import pytest

from rhoforge.groups import FiniteAbelianGroup, GroupMismatchError, cyclic


def test_order_and_identity():
    G = FiniteAbelianGroup([2, 3, 4])
    assert G.order == 24
    assert G.identity.residues == (0, 0, 0)
    assert G.identity.is_identity


def test_trivial_group():
    G = FiniteAbelianGroup([])
    assert G.order == 1
    assert list(G) == [G.identity]
    assert G.identity * G.identity is G.identity


def test_reduction_and_interning():
    G = FiniteAbelianGroup([5])
    assert G.element([7]) is G.element([2])
    assert G.element([-1]) is G.element([4])


def test_group_laws():
    G = FiniteAbelianGroup([4, 6])
    els = list(G)
    assert len(els) == 24
    e = G.identity
    for a in els:
        assert a * ~a is e
        assert a * e is a
    a = G.element([1, 1])
    b = G.element([3, 2])
    c = G.element([2, 5])
    assert (a * b) * c is a * (b * c)
    assert a * b is b * a


def test_powers_and_element_order():
    G = FiniteAbelianGroup([4, 6])
    a = G.element([1, 1])
    assert a.order() == 12
    assert a ** 12 is G.identity
    assert a ** -1 is ~a
    assert G.exponent() == 12
    assert a ** G.exponent() is G.identity


def test_every_element_to_group_order_is_identity():
    # the fact the tower construction leans on
    for moduli in ([2], [3], [6], [2, 2], [2, 3, 4]):
        G = FiniteAbelianGroup(moduli)
        for g in G:
            assert g ** G.order is G.identity


def test_mismatch_raises():
    G = cyclic(3)
    H = cyclic(3)
    a = G.element([1])
    b = H.element([1])
    # equal groups but distinct instances: elements are not interchangeable
    with pytest.raises(GroupMismatchError):
        a * b


def test_bad_inputs():
    with pytest.raises(ValueError):
        FiniteAbelianGroup([0])
    G = FiniteAbelianGroup([2, 2])
    with pytest.raises(ValueError):
        G.element([1])


def test_ordering_is_lex_on_residues():
    G = FiniteAbelianGroup([3, 3])
    a = G.element([0, 2])
    b = G.element([1, 0])
    assert a < b
    assert sorted([b, a]) == [a, b]


def test_json_round_trip():
    G = FiniteAbelianGroup([2, 5])
    assert G.to_json() == {"moduli": [2, 5]}
    G2 = FiniteAbelianGroup.from_json(G.to_json())
    assert G2 == G
    a = G.element([1, 3])
    assert a.to_json() == {"residues": [1, 3]}
    assert G.element_from_json(a.to_json()) is a

import pytest
from hypothesis import given, strategies as st

from modules.core import (
    EmptyFamilyError, FamilyAlgebraError, SetFamily, Subset, UniverseError, UniverseMismatchError,
    complement_family, family_relations, iter_submasks, make_family, make_subset, make_universe, set_ops,
)
from strategies import families, subsets, universes


def test_make_universe_labels():
    u = make_universe(4, ['a', 'b', 'c', 'd'])
    assert u.size == 4
    assert u.index_of('c') == 2
    assert u.label_of(3) == 'd'
    assert make_universe(3).labels == ('0', '1', '2')


@pytest.mark.parametrize('size', [0, 65, -1])
def test_make_universe_rejects_size(size):
    with pytest.raises(UniverseError):
        make_universe(size)


def test_make_universe_rejects_duplicate_labels():
    with pytest.raises(UniverseError):
        make_universe(2, ['a', 'a'])


def test_full_universe_of_64():
    u = make_universe(64)
    assert u.full_mask == (1 << 64) - 1
    assert len(Subset(u, u.full_mask)) == 64


def test_subset_operations():
    u = make_universe(4)
    a, b = make_subset(u, [0, 1]), make_subset(u, [1, 2])
    assert (a | b).elements() == [0, 1, 2]
    assert (a & b).elements() == [1]
    assert (a - b).elements() == [0]
    assert (a ^ b).elements() == [0, 2]
    assert (~a).elements() == [2, 3]
    assert set_ops('union', a, b) == a | b
    assert set_ops('complement', a) == ~a
    assert make_subset(u, [1]).issubset(a)


def test_set_ops_errors():
    u = make_universe(2)
    a = make_subset(u, [0])
    with pytest.raises(FamilyAlgebraError):
        set_ops('union', a)
    with pytest.raises(FamilyAlgebraError):
        set_ops('xor', a, a)


def test_universe_mismatch():
    a = make_subset(make_universe(2), [0])
    b = make_subset(make_universe(3), [0])
    with pytest.raises(UniverseMismatchError):
        a | b


def test_make_subset_range():
    with pytest.raises(UniverseError):
        make_subset(make_universe(2), [2])


def test_subset_string_uses_labels():
    u = make_universe(4, ['a', 'b', 'c', 'd'])
    assert str(make_subset(u, [2, 0])) == '{a,c}'
    assert str(make_subset(u, [])) == '{}'


def test_family_is_canonical():
    u = make_universe(3)
    f = SetFamily(u, [5, 1, 5, 0])
    assert f.masks == (0, 1, 5)
    assert f == SetFamily(u, [0, 5, 1])
    assert len(f) == 3
    assert make_subset(u, [0, 2]) in f


def test_family_rejects_out_of_range_members():
    with pytest.raises(UniverseError):
        SetFamily(make_universe(2), [4])


def test_empty_family_is_allowed_but_flagged():
    f = make_family(make_universe(2), [])
    assert not f
    with pytest.raises(EmptyFamilyError):
        f.require_nonempty()


def test_family_relations():
    u = make_universe(2)
    a, b = SetFamily(u, [1]), SetFamily(u, [1, 2])
    assert family_relations(a, a) == 'equal'
    assert family_relations(a, b) == 'subfamily'
    assert family_relations(b, a) == 'superfamily'
    assert family_relations(a, SetFamily(u, [2])) == 'incomparable'


def test_family_string():
    u = make_universe(2)
    assert str(SetFamily(u, [3, 2])) == '{{1},{0,1}}'


def test_complement_family():
    u = make_universe(3)
    assert complement_family(SetFamily(u, [0, 1])) == SetFamily(u, [7, 6])


def test_iter_submasks_counts():
    assert sorted(iter_submasks(0b101)) == [0, 1, 4, 5]
    assert list(iter_submasks(0)) == [0]


@given(st.data())
def test_complement_is_involution(data):
    u = data.draw(universes())
    a = data.draw(subsets(u))
    assert ~~a == a


@given(st.data())
def test_complement_family_is_involution(data):
    u = data.draw(universes())
    f = data.draw(families(u, 6))
    once = complement_family(f)
    assert len(once) == len(f)
    assert complement_family(once) == f


@given(st.data())
def test_make_family_is_idempotent(data):
    u = data.draw(universes())
    f = data.draw(families(u, 6))
    again = make_family(u, [Subset(u, m) for m in f])
    assert again == f
    assert again.masks == f.masks
    assert make_family(u, [Subset(u, m) for m in reversed(again.masks)]) == f


@given(st.data())
def test_family_relations_are_antisymmetric(data):
    u = data.draw(universes(3))
    f = data.draw(families(u, 4))
    g = data.draw(families(u, 4))
    forward, backward = family_relations(f, g), family_relations(g, f)
    if f <= g and g <= f:
        assert forward == backward == 'equal'
        assert f == g
    mirror = {'equal': 'equal', 'subfamily': 'superfamily',
              'superfamily': 'subfamily', 'incomparable': 'incomparable'}
    assert backward == mirror[forward]


@given(st.data())
def test_family_iteration_is_strictly_increasing(data):
    u = data.draw(universes())
    f = data.draw(families(u, 6))
    masks = list(f)
    assert masks == sorted(set(masks))

from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from modules.algebra import (
    ClosureHandle, PrincipalIdeal, adjoin, generated_ideal_family, ideal_from_family, ideal_star,
    is_ideal, is_intersection_closed, is_semigroup, join, join_all, join_ideals, member_of_closure,
    s_adjoin, semigroup_closure, star, star_decider, star_ideal,
)
from modules.core import (
    BoundError, EmptyFamilyError, SetFamily, Subset, UniverseMismatchError, iter_submasks,
    make_subset, make_universe,
)
from strategies import family_and_apex, family_pairs, families, universes


@pytest.fixture
def abcd():
    u = make_universe(4, ['a', 'b', 'c', 'd'])
    return {
        'u': u,
        'A': make_subset(u, [0, 1]),
        'B': make_subset(u, [1, 2]),
        'D': make_subset(u, [2, 3]),
        'X': make_subset(u, range(4)),
    }


def fam(u, *subsets):
    return SetFamily(u, [s.bits for s in subsets])


# -- 定义式枚举（对照用） --

def brute_closure(f):
    out = set()
    masks = list(f.masks)
    for r in range(1, len(masks) + 1):
        for combo in combinations(masks, r):
            bits = 0
            for m in combo:
                bits |= m
            out.add(bits)
    return out


def brute_star_ideal(f, apex):
    subs = list(iter_submasks(apex))
    return {(a & ~b1) | b2 for a in f.masks for b1 in subs for b2 in subs}


def brute_ideal_star(f, apex):
    return {(m & ~s1) | s2 for m in iter_submasks(apex) for s1 in f.masks for s2 in f.masks}


def all_families(size, max_members):
    u = make_universe(size)
    for r in range(1, max_members + 1):
        for combo in combinations(range(1 << size), r):
            yield SetFamily(u, combo)


# -- 运算示例 --

def test_join_of_worked_example(abcd):
    u = abcd['u']
    got = join(fam(u, abcd['A']), fam(u, abcd['B'], abcd['D']))
    assert str(got) == '{{a,b,c},{a,b,c,d}}'


def test_join_with_empty_set_family_is_identity(abcd):
    u = abcd['u']
    f = fam(u, abcd['B'], abcd['D'])
    assert join(f, SetFamily(u, [0])) == f


def test_join_errors():
    u = make_universe(2)
    with pytest.raises(EmptyFamilyError):
        join(SetFamily(u, []), SetFamily(u, [1]))
    with pytest.raises(UniverseMismatchError):
        join(SetFamily(u, [1]), SetFamily(make_universe(3), [1]))


def test_star_examples():
    u = make_universe(2)
    s1 = SetFamily(u, [1, 3])
    ideal_members = SetFamily(u, [0, 1])
    assert star(s1, ideal_members) == SetFamily(u, [0, 1, 2, 3])
    assert star(SetFamily(u, [3]), ideal_members) == SetFamily(u, [2, 3])
    assert star(s1, SetFamily(u, [0])) == s1


def test_star_bound_and_decider():
    u = make_universe(3)
    f, g = SetFamily(u, range(8)), SetFamily(u, range(8))
    with pytest.raises(BoundError):
        star(f, g, limit=100)
    decider = star_decider(f, g)
    assert all(x in decider for x in range(8))
    assert decider.materialize() == star(f, g)


def test_closure_examples(abcd):
    u = abcd['u']
    b, d = abcd['B'], abcd['D']
    assert semigroup_closure(fam(u, b, d)) == fam(u, b, d, b | d)
    singles = SetFamily(make_universe(3), [1, 2, 4])
    assert semigroup_closure(singles).masks == tuple(range(1, 8))
    closed = fam(u, b, d, b | d)
    assert semigroup_closure(closed) == closed


def test_closure_requires_members():
    with pytest.raises(EmptyFamilyError):
        semigroup_closure(SetFamily(make_universe(2), []))


def test_member_of_closure(abcd):
    u = abcd['u']
    b, d = abcd['B'], abcd['D']
    assert member_of_closure(b | d, fam(u, b, d))
    u3 = make_universe(3)
    assert not member_of_closure(make_subset(u3, [0, 1, 2]), SetFamily(u3, [1, 2]))


def test_closure_handle_materializes_once(abcd):
    u = abcd['u']
    handle = ClosureHandle(fam(u, abcd['B'], abcd['D']))
    assert handle.materialized is None
    assert abcd['B'] | abcd['D'] in handle
    first = handle.materialize()
    assert handle.materialize() is first
    assert len(first) == 3


def test_ideal_from_family(abcd):
    u3 = make_universe(3)
    assert ideal_from_family(SetFamily(u3, [1, 2])).apex.elements() == [0, 1]
    u = abcd['u']
    apex = ideal_from_family(fam(u, abcd['B'], abcd['D'])).apex
    assert apex.labels() == ['b', 'c', 'd']


def test_semigroup_and_ideal_predicates(abcd):
    u = abcd['u']
    b, d = abcd['B'], abcd['D']
    assert is_semigroup(fam(u, b, d, b | d))
    assert is_semigroup(fam(u, abcd['A']))
    u2 = make_universe(2)
    assert not is_semigroup(SetFamily(u2, [1, 2]))
    assert is_ideal(SetFamily(u2, [0, 1]))
    assert not is_ideal(SetFamily(u2, [3]))
    assert is_ideal(SetFamily(u2, [0]))
    assert is_intersection_closed(SetFamily(u2, [0, 1, 3]))
    assert not is_intersection_closed(SetFamily(u2, [1, 2]))


def test_star_ideal_decider_examples():
    u = make_universe(2)
    a = make_subset(u, [0])
    decider = star_ideal(SetFamily(u, [1, 3]), PrincipalIdeal(a))
    assert all(x in decider for x in range(4))
    f = SetFamily(u, [1, 2])
    trivial = star_ideal(f, PrincipalIdeal(Subset(u, 0)))
    assert [x for x in range(4) if x in trivial] == [1, 2]


def test_ideal_star_decider_examples():
    u = make_universe(2)
    decider = ideal_star(PrincipalIdeal(make_subset(u, [0])), SetFamily(u, [2, 3]))
    assert make_subset(u, [1]) in decider
    f = SetFamily(u, [1, 3])
    trivial = ideal_star(PrincipalIdeal(Subset(u, 0)), f)
    assert [x for x in range(4) if x in trivial] == [1, 3]


def test_adjoin(abcd):
    u = abcd['u']
    a = abcd['A']
    assert adjoin(fam(u, a), a) == fam(u, a)
    empty = Subset(u, 0)
    assert s_adjoin(fam(u, abcd['B'], abcd['D']), empty) == fam(u, empty, abcd['B'], abcd['D'], abcd['B'] | abcd['D'])


def test_join_ideals():
    u = make_universe(2)
    p0, p1 = PrincipalIdeal(make_subset(u, [0])), PrincipalIdeal(make_subset(u, [1]))
    assert join_ideals(p0, p1).apex.elements() == [0, 1]
    brute = join(p0.materialize(), p1.materialize())
    assert join_ideals(p0, p1).materialize() == brute
    empty = PrincipalIdeal(Subset(u, 0))
    assert join_ideals(empty, p1) == p1
    assert join_ideals(p1, p1) == p1
    with pytest.raises(UniverseMismatchError):
        join_ideals(p0, PrincipalIdeal(make_subset(make_universe(3), [0])))


def test_principal_ideal_materialize_bound():
    u = make_universe(30)
    with pytest.raises(BoundError):
        PrincipalIdeal(Subset(u, u.full_mask)).materialize()


def test_join_all_folds_left():
    u = make_universe(3)
    parts = [SetFamily(u, [1]), SetFamily(u, [2, 0]), SetFamily(u, [4])]
    assert join_all(parts) == join(join(parts[0], parts[1]), parts[2])


def test_generated_ideal_family_contains_closure():
    u = make_universe(3)
    f = SetFamily(u, [1, 2])
    assert semigroup_closure(f) <= generated_ideal_family(f)
    assert is_ideal(generated_ideal_family(f))


# -- 与定义式枚举对照 --

def _oracle_agreement(size, max_members):
    full = 1 << size
    for f in all_families(size, max_members):
        closed = brute_closure(f)
        assert semigroup_closure(f).maskset == closed
        assert all(member_of_closure(x, f) == (x in closed) for x in range(full))
        ideal_family = {x for c in closed for x in iter_submasks(c)}
        assert set(ideal_from_family(f).materialize().masks) == ideal_family
        for apex in range(full):
            i = PrincipalIdeal(Subset(f.universe, apex))
            si, is_ = star_ideal(f, i), ideal_star(i, f)
            expect_si, expect_is = brute_star_ideal(f, apex), brute_ideal_star(f, apex)
            assert all((x in si) == (x in expect_si) for x in range(full))
            assert all((x in is_) == (x in expect_is) for x in range(full))
            assert si.materialize().maskset == expect_si
            assert is_.materialize().maskset == expect_is


def test_oracles_agree_up_to_three_points():
    for size in (1, 2, 3):
        _oracle_agreement(size, 3)


@pytest.mark.slow
def test_oracles_agree_on_four_points():
    _oracle_agreement(4, 3)


# -- 随机性质 --

@given(family_pairs())
def test_join_is_commutative(pair):
    f, g = pair
    assert join(f, g) == join(g, f)


@given(family_pairs())
def test_closure_commutes_with_join(pair):
    f, g = pair
    assert semigroup_closure(join(f, g)) == join(semigroup_closure(f), semigroup_closure(g))


@given(st.data())
def test_closure_is_idempotent_and_extensive(data):
    u = data.draw(universes())
    f = data.draw(families(u, 5))
    s = semigroup_closure(f)
    assert f <= s
    assert semigroup_closure(s) == s
    assert is_semigroup(s)


@given(st.data())
def test_closure_is_monotone(data):
    u = data.draw(universes())
    f = data.draw(families(u, 4))
    extra = data.draw(families(u, 3))
    g = SetFamily(u, f.masks + extra.masks)
    assert f <= g
    assert semigroup_closure(f) <= semigroup_closure(g)
    assert semigroup_closure(semigroup_closure(g)) == semigroup_closure(g)


def test_closure_of_singletons_is_every_nonempty_subset():
    u = make_universe(12)
    singletons = SetFamily(u, [1 << i for i in range(12)])
    closed = semigroup_closure(singletons)
    assert len(closed) == (1 << 12) - 1
    assert 0 not in closed.maskset


@settings(max_examples=50)
@given(family_and_apex())
def test_ideal_extension_chain(case):
    f, apex = case
    s = semigroup_closure(f)
    i = PrincipalIdeal(apex)
    left = ideal_star(i, s).materialize()
    right = star_ideal(s, i).materialize()
    assert s <= left <= right
    assert is_semigroup(left) and is_semigroup(right)

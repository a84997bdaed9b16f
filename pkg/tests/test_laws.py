import json
from itertools import product

import pytest

from modules.algebra import PrincipalIdeal
from modules.core import BoundError, EmptyFamilyError, FamilyAlgebraError, SetFamily, Subset, make_subset, make_universe
from modules.laws import (
    APEX, IDENTITY, INCLUSION, NON_LAW, ArityError, SearchConfig, UnknownLawError, builtin_laws,
    check_law, classify_q213, count_families, estimate_cases, exhaustive_search, explore_q213,
    get_law, random_search, regression_fixtures, role_domain, search,
)


@pytest.fixture
def abcd_families():
    u = make_universe(4, ['a', 'b', 'c', 'd'])
    a = make_subset(u, [0, 1])
    b = make_subset(u, [1, 2])
    d = make_subset(u, [2, 3])
    return SetFamily(u, [a.bits]), SetFamily(u, [b.bits, d.bits])


def test_registry_contents():
    laws = builtin_laws()
    ids = [law.id for law in laws]
    assert len(laws) >= 17
    assert len(set(ids)) == len(ids)
    for required in ['L1', 'L2', 'L3', 'L4', "L4'", 'L5', 'L6', 'L7', 'L8', 'L9', 'L10', 'L11', 'L12',
                     'N1', 'N2', 'N3', 'N4', 'N5']:
        assert required in ids
    assert all(law.kind in (IDENTITY, INCLUSION, NON_LAW) for law in laws)
    assert get_law('L4p').id == "L4'"


def test_unknown_law():
    with pytest.raises(UnknownLawError):
        get_law('L99')


def test_domain_counts():
    assert count_families(3, 3) == 92
    assert len(role_domain('family', 3, 3)) == 92
    assert len(role_domain('semigroup', 3, 3)) == 92
    assert len(role_domain(APEX, 3, 3)) == 8
    assert estimate_cases(('family', 'family'), 3, 3) == 8464


def test_check_law_on_worked_example(abcd_families):
    a, b = abcd_families
    report = check_law(get_law('L2'), [a, b])
    assert report.outcome == 'pass'
    assert check_law(get_law('N1'), {'A': a, 'B': b}).outcome == 'witness'
    assert check_law(get_law('L12'), [a]).outcome == 'pass'


def test_check_law_validation(abcd_families):
    a, b = abcd_families
    with pytest.raises(ArityError):
        check_law(get_law('L2'), [a])
    with pytest.raises(EmptyFamilyError):
        check_law(get_law('L2'), [a, SetFamily(a.universe, [])])
    not_closed = SetFamily(a.universe, [1, 2])
    with pytest.raises(FamilyAlgebraError):
        check_law(get_law('L1'), [not_closed, a])
    assert check_law(get_law('L1'), [not_closed, a], auto_close=True).outcome == 'pass'


def test_check_law_accepts_apex_subsets():
    u = make_universe(2)
    s = SetFamily(u, [1, 3])
    report = check_law(get_law('L9'), [s, make_subset(u, [0])])
    assert report.outcome == 'pass'
    assert check_law(get_law('L9'), [s, PrincipalIdeal(Subset(u, 1))]).outcome == 'pass'


def test_binary_laws_pass_with_8464_cases():
    for law_id in ('L2', 'L10'):
        report = exhaustive_search(get_law(law_id), 3, 3)
        assert report.outcome == 'pass'
        assert report.cases == 8464


@pytest.mark.parametrize('law_id', ['L1', 'L11', 'L12'])
def test_pair_and_unary_laws_pass_on_three_points(law_id):
    assert exhaustive_search(get_law(law_id), 3, 3).outcome == 'pass'


def test_every_law_meets_its_expectation_at_default_bound():
    for law in builtin_laws():
        report = exhaustive_search(law)
        assert report.expectation_met, law.id
        if law.kind == NON_LAW:
            assert report.outcome == 'witness'
            assert report.universe_size <= 3


def test_n1_least_witness():
    report = exhaustive_search(get_law('N1'), 2, 1)
    assert report.witness == {'A': [[0]], 'B': [[1]]}
    assert report.expectation_met


def test_n6_least_witness():
    report = exhaustive_search(get_law('N6'), 2, 1)
    assert report.witness == {'S': [[0]], 'Y1': [], 'Y2': [0]}


def test_n2_least_witness():
    report = exhaustive_search(get_law('N2'), 2, 2)
    assert report.witness == {'S1': [[]], 'S2': [[0]], 'Y': []}
    assert report.cases == 17


def test_n3_least_witness():
    report = exhaustive_search(get_law('N3'), 2, 2)
    assert report.witness == {'S1': [[0]], 'S2': [[]], 'Y': []}
    assert report.expectation_met


def test_complementary_pair_violates_n2_and_n3():
    u = make_universe(2)
    s1 = SetFamily(u, [0b01, 0b11])
    s2 = SetFamily(u, [0b10, 0b11])
    i = PrincipalIdeal(make_subset(u, [0]))
    j = PrincipalIdeal(make_subset(u, [1]))
    assert check_law(get_law('N2'), {'S1': s1, 'S2': s2, 'Y': i}).outcome == 'witness'
    assert check_law(get_law('N2'), {'S1': s2, 'S2': s1, 'Y': j}).outcome == 'witness'
    assert check_law(get_law('N3'), {'S1': s1, 'S2': s2, 'Y': i}).outcome == 'witness'
    assert check_law(get_law('N3'), {'S1': s1, 'S2': s2, 'Y': j}).outcome == 'witness'


def _rebuild(law, witness, size):
    u = make_universe(size)
    values = []
    for (name, role) in law.roles:
        raw = witness[name]
        if role == APEX:
            values.append(PrincipalIdeal(make_subset(u, raw)))
        else:
            values.append(SetFamily(u, [make_subset(u, m).bits for m in raw]))
    return values


@pytest.mark.parametrize('law_id', ['N1', 'N2', 'N3', 'N4', 'N5', 'N6'])
def test_witnesses_are_genuine(law_id):
    law = get_law(law_id)
    report = exhaustive_search(law, 2, 2)
    assert report.outcome == 'witness'
    values = _rebuild(law, report.witness, 2)
    assert not law.predicate(*values)


@pytest.mark.parametrize('law_id', ['N1', 'N2', 'N3', 'N4', 'N5', 'N6'])
def test_witness_is_least_in_full_enumeration(law_id):
    law = get_law(law_id)
    domains = [role_domain(role, 2, 2) for role in law.arity]
    first = next(i for i, b in enumerate(product(*domains)) if not law.predicate(*b))
    assert exhaustive_search(law, 2, 2).cases == first + 1


def test_exhaustive_bounds():
    with pytest.raises(BoundError):
        exhaustive_search(get_law('L2'), 9, 9)
    with pytest.raises(BoundError):
        exhaustive_search(get_law('L2'), 4, 4, SearchConfig(ceiling=1000))


def test_parallel_search_matches_sequential():
    law = get_law('N2')
    sequential = exhaustive_search(law, 3, 2, SearchConfig(workers=1))
    parallel = exhaustive_search(law, 3, 2, SearchConfig(workers=2, chunk_size=500))
    assert parallel.to_json() == sequential.to_json()
    passing = exhaustive_search(get_law('L10'), 3, 2, SearchConfig(workers=2, chunk_size=200))
    assert passing.outcome == 'pass'
    assert passing.cases == 36 * 36


def test_random_search_is_reproducible():
    first = random_search(get_law('L4'), 6, 4, 300, 42)
    second = random_search(get_law('L4'), 6, 4, 300, 42)
    assert first.outcome == 'pass'
    assert first.to_json() == second.to_json()
    assert random_search(get_law('L9'), 5, 3, 200, 7).outcome == 'pass'


def test_random_search_finds_non_law():
    report = random_search(get_law('N5'), 3, 2, 500, 0)
    assert report.outcome == 'witness'
    assert report.seed == 0


def test_random_search_bounds():
    with pytest.raises(BoundError):
        random_search(get_law('L2'), 17, 2, 10, 0)


def test_search_dispatch():
    assert search(get_law('N4'), 'exhaustive', 2, 1).outcome == 'witness'
    assert search(get_law('L2'), 'random', 4, 3, trials=50, seed=3).mode == 'random'
    with pytest.raises(FamilyAlgebraError):
        search(get_law('L2'), 'symbolic')


def test_report_json_is_stable():
    report = exhaustive_search(get_law('N1'), 2, 1)
    d = json.loads(report.to_json())
    assert d['law'] == 'N1'
    assert d['outcome'] == 'witness'
    assert d['expectation_met'] is True
    assert report.to_json() == exhaustive_search(get_law('N1'), 2, 1).to_json()


def test_explore_tally_sums_and_closed_cases_are_equal():
    result = explore_q213(3, 2)
    assert sum(result.tally.values()) == result.cases == 36 * 36 * 8
    assert result.closed_cases > 0
    assert result.closed_unequal == 0
    for cls, example in result.examples.items():
        u = make_universe(3)
        a = SetFamily(u, [make_subset(u, m).bits for m in example['A']])
        b = SetFamily(u, [make_subset(u, m).bits for m in example['B']])
        y = PrincipalIdeal(make_subset(u, example['Y']))
        assert classify_q213(a, b, y) == cls


def test_explore_empty_apex_is_equal():
    u = make_universe(2)
    empty = PrincipalIdeal(Subset(u, 0))
    for a, b in product(role_domain('family', 2, 2), repeat=2):
        assert classify_q213(a, b, empty) == 'equal'


def test_explore_parallel_matches_sequential():
    seq = explore_q213(2, 2, config=SearchConfig(workers=1))
    par = explore_q213(2, 2, config=SearchConfig(workers=2, chunk_size=50))
    assert seq.to_dict() == par.to_dict()


def test_explore_closed_operands():
    result = explore_q213(2, 2, closed_operands=True)
    assert result.tally['equal'] == result.cases


def test_explore_bound():
    with pytest.raises(BoundError):
        explore_q213(5, 1)


def test_regression_fixtures_pass():
    results = regression_fixtures()
    assert len(results) == 3
    for r in results:
        assert r.passed, [c for c, ok in r.checks if not ok]


@pytest.mark.slow
@pytest.mark.parametrize('law_id', ['L4', 'L5', 'L7', 'L8', 'L9'])
def test_ideal_laws_on_four_points(law_id):
    assert exhaustive_search(get_law(law_id), 4, 2).outcome == 'pass'


@pytest.mark.slow
@pytest.mark.parametrize('law_id', ['L13', 'L15', 'L16'])
def test_unary_laws_on_four_points(law_id):
    assert exhaustive_search(get_law(law_id), 4, 3).outcome == 'pass'

"""
法则检验模块
恒等式、包含关系与反例（非法则）的注册表，穷举/随机搜索引擎，
包含关系探索器，以及两个手算例子的回归夹具

搜索空间按规范序（操作数元组的字典序）编号；并行时把编号区间切块，
各块返回块内最小见证编号，整体取最小值，因此结果与调度无关。
"""

import json
import logging
import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, islice, product
from math import comb
from multiprocessing import Pool
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from modules.algebra import (
    PrincipalIdeal, ideal_star, is_intersection_closed, is_semigroup, join, join_all,
    join_ideals, semigroup_closure, star, star_ideal, adjoin, s_adjoin,
    generated_ideal_family, ideal_from_family, is_ideal,
)
from modules.core import (
    BoundError, EmptyFamilyError, FamilyAlgebraError, SetFamily, Subset, Universe,
    complement_family, family_relations, make_subset, make_universe,
)

logger = logging.getLogger(__name__)

FAMILY = 'family'
SEMIGROUP = 'semigroup'
APEX = 'ideal-apex'

IDENTITY = 'identity'
INCLUSION = 'inclusion'
NON_LAW = 'non-law'

DEFAULT_CASE_CEILING = 10 ** 7
MAX_EXHAUSTIVE_UNIVERSE = 5
MAX_RANDOM_UNIVERSE = 16
MAX_EXPLORE_UNIVERSE = 4


class UnknownLawError(FamilyAlgebraError):
    """注册表中没有该法则"""


class ArityError(FamilyAlgebraError):
    """操作数个数或角色不匹配"""


@dataclass(frozen=True)
class Law:
    """一条待检验的断言；kind=non-law 表示期望找到反例"""
    id: str
    roles: Tuple[Tuple[str, str], ...]
    kind: str
    statement: str
    anchor: str
    predicate: Callable[..., bool] = field(compare=False, repr=False)
    default_universe: int = 3
    default_members: int = 3

    @property
    def arity(self) -> Tuple[str, ...]:
        return tuple(kind for _, kind in self.roles)

    @property
    def role_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.roles)


@dataclass
class SearchConfig:
    """搜索配置：用例上限、并行进程数、分块大小"""
    ceiling: int = DEFAULT_CASE_CEILING
    workers: int = field(default_factory=lambda: int(os.environ.get('FAMALG_WORKERS', '1')))
    chunk_size: int = 20000


@dataclass
class SearchReport:
    """一次检验的结果"""
    law_id: str
    kind: str
    mode: str
    universe_size: int
    max_members: Optional[int]
    cases: int
    outcome: str
    witness: Optional[Dict[str, Any]] = None
    seed: Optional[int] = None
    trials: Optional[int] = None

    @property
    def expectation_met(self) -> bool:
        return (self.kind == NON_LAW) == (self.outcome == 'witness')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'law': self.law_id,
            'kind': self.kind,
            'mode': self.mode,
            'universe_size': self.universe_size,
            'max_members': self.max_members,
            'cases': self.cases,
            'outcome': self.outcome,
            'witness': self.witness,
            'seed': self.seed,
            'trials': self.trials,
            'expectation_met': self.expectation_met,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# 谓词
# ---------------------------------------------------------------------------

def _si(s: SetFamily, i: PrincipalIdeal) -> SetFamily:
    return star_ideal(s, i).materialize()


def _is(i: PrincipalIdeal, s: SetFamily) -> SetFamily:
    return ideal_star(i, s).materialize()


def _empty_set(f: SetFamily) -> Subset:
    return Subset(f.universe, 0)


def _full_set(f: SetFamily) -> Subset:
    return Subset(f.universe, f.universe.full_mask)


def _drop_one(f: SetFamily) -> List[SetFamily]:
    """去掉一个成员得到的全部非空子族"""
    if len(f) < 2:
        return []
    return [SetFamily._trusted(f.universe, f.maskset - {m}) for m in f.masks]


def p_join_of_semigroups(s1, s2) -> bool:
    return is_semigroup(join(s1, s2))


def p_closure_of_join(a, b) -> bool:
    return semigroup_closure(join(a, b)) == join(semigroup_closure(a), semigroup_closure(b))


def p_closure_of_join3(a, b, c) -> bool:
    return semigroup_closure(join_all([a, b, c])) == join_all(
        [semigroup_closure(a), semigroup_closure(b), semigroup_closure(c)])


def p_star_ideal_distributes(s1, s2, y) -> bool:
    return _si(join(s1, s2), y) == join(_si(s1, y), _si(s2, y))


def p_ideal_star_distributes(s1, s2, y) -> bool:
    return _is(y, join(s1, s2)) == join(_is(y, s1), _is(y, s2))


def p_distributes3(s1, s2, s3, y) -> bool:
    parts = [s1, s2, s3]
    joined = join_all(parts)
    return (_si(joined, y) == join_all([_si(s, y) for s in parts])
            and _is(y, joined) == join_all([_is(y, s) for s in parts]))


def p_star_ideal_join_ideals(s, y1, y2) -> bool:
    both = join_ideals(y1, y2)
    whole = _si(s, both)
    left, right = _si(s, y1), _si(s, y2)
    return left <= whole and right <= whole and join(left, right) <= whole


def p_star_ideal_join_ideals_reverse(s, y1, y2) -> bool:
    return _si(s, join_ideals(y1, y2)) <= join(_si(s, y1), _si(s, y2))


def p_join_ideals_star(y1, y2, y3, s) -> bool:
    both = join_ideals(y1, y2)
    whole = _is(both, s)
    if whole != join(_is(y1, s), _is(y2, s)):
        return False
    if not (_is(y1, s) <= whole and _is(y2, s) <= whole):
        return False
    all3 = join_ideals(both, y3)
    return _is(all3, s) == join_all([_is(y, s) for y in (y1, y2, y3)])


def p_ideal_extension(s, y) -> bool:
    left = _is(y, s)
    right = _si(s, y)
    if not (s <= left <= right):
        return False
    if not (is_semigroup(left) and is_semigroup(right)):
        return False
    return _is(y, left) == left and _si(right, y) == right


def p_join_within_star(a, b) -> bool:
    j = join(a, b)
    return j <= star(a, b) and j <= star(b, a)


def p_monotone(a, b) -> bool:
    j, s = join(a, b), star(a, b)
    for smaller in _drop_one(a):
        if not (join(smaller, b) <= j and star(smaller, b) <= s):
            return False
    for smaller in _drop_one(b):
        if not (join(a, smaller) <= j and star(a, smaller) <= s):
            return False
    return True


def p_self_join(a) -> bool:
    aa = join(a, a)
    if not a <= aa:
        return False
    return aa == a if is_semigroup(a) else True


def p_complements_meet_closed(s) -> bool:
    return is_intersection_closed(complement_family(s))


def p_empty_adjoined(a, b) -> bool:
    empty = _empty_set(a)
    return (a <= join(a, adjoin(b, empty))
            and b <= join(adjoin(a, empty), b)
            and a <= join(a, adjoin(a, empty)))


def p_adjoined_closure(a) -> bool:
    if not (is_semigroup(s_adjoin(a, _empty_set(a))) and is_semigroup(s_adjoin(a, _full_set(a)))):
        return False
    member = Subset(a.universe, a.masks[0])
    return adjoin(a, member) == a and s_adjoin(a, member) == semigroup_closure(a)


def p_generated_structures(a) -> bool:
    s = semigroup_closure(a)
    ideal_family = generated_ideal_family(a)
    return (is_semigroup(s) and semigroup_closure(s) == s and s <= ideal_family
            and is_ideal(ideal_family) and ideal_from_family(s) == ideal_from_family(a))


def n_closure_of_union(a, b) -> bool:
    union = SetFamily._trusted(a.universe, a.maskset | b.maskset)
    sa, sb = semigroup_closure(a), semigroup_closure(b)
    return semigroup_closure(union) == SetFamily._trusted(a.universe, sa.maskset | sb.maskset)


def n_star_ideal_of_join(s1, s2, y) -> bool:
    return _si(s1, y) <= _si(join(s1, s2), y)


def n_ideal_star_of_join(s1, s2, y) -> bool:
    return _is(y, s2) <= _is(y, join(s1, s2))


def n_join_contains(a, b) -> bool:
    return a <= join(a, b)


def n_union_of_semigroups(s1, s2) -> bool:
    return is_semigroup(SetFamily._trusted(s1.universe, s1.maskset | s2.maskset))


def _roles(*pairs: str) -> Tuple[Tuple[str, str], ...]:
    it = iter(pairs)
    return tuple(zip(it, it))


_BUILTIN = (
    Law('L1', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP), INCLUSION,
        'S1 v S2 is union-closed', 'join of union-closed families', p_join_of_semigroups),
    Law('L2', _roles('A', FAMILY, 'B', FAMILY), IDENTITY,
        'S(A v B) = S(A) v S(B)', 'closure commutes with join', p_closure_of_join),
    Law('L3', _roles('A', FAMILY, 'B', FAMILY, 'C', FAMILY), IDENTITY,
        'S(A v B v C) = S(A) v S(B) v S(C)', 'closure commutes with n-ary join',
        p_closure_of_join3, 3, 2),
    Law('L4', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP, 'Y', APEX), IDENTITY,
        '(S1 v S2) * P(Y) = (S1 * P(Y)) v (S2 * P(Y))', 'star with an ideal distributes over join',
        p_star_ideal_distributes),
    Law("L4'", _roles('A', FAMILY, 'B', FAMILY, 'Y', APEX), IDENTITY,
        '(A v B) * P(Y) = (A * P(Y)) v (B * P(Y)) for arbitrary families',
        'star with an ideal distributes over join, without closure (engine-verified)',
        p_star_ideal_distributes),
    Law('L5', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP, 'Y', APEX), IDENTITY,
        'P(Y) * (S1 v S2) = (P(Y) * S1) v (P(Y) * S2)', 'ideal star distributes over join',
        p_ideal_star_distributes),
    Law('L6', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP, 'S3', SEMIGROUP, 'Y', APEX), IDENTITY,
        'both distributive laws for three semigroups', 'finite collections of semigroups',
        p_distributes3, 2, 2),
    Law('L7', _roles('S', SEMIGROUP, 'Y1', APEX, 'Y2', APEX), INCLUSION,
        '(S * P(Y1)) v (S * P(Y2)) <= S * (P(Y1) v P(Y2)) and S * P(Yi) <= S * (P(Y1) v P(Y2))',
        'star with a join of ideals', p_star_ideal_join_ideals),
    Law('L8', _roles('Y1', APEX, 'Y2', APEX, 'Y3', APEX, 'S', SEMIGROUP), IDENTITY,
        '(P(Y1) v P(Y2)) * S = (P(Y1) * S) v (P(Y2) * S), inclusions, and the three-ideal version',
        'join of ideals starred with a semigroup', p_join_ideals_star, 3, 2),
    Law('L9', _roles('S', SEMIGROUP, 'Y', APEX), IDENTITY,
        'S <= P(Y) * S <= S * P(Y), both semigroups, both idempotent',
        'extending a semigroup by an ideal', p_ideal_extension),
    Law('L10', _roles('A', FAMILY, 'B', FAMILY), INCLUSION,
        'A v B <= A * B and A v B <= B * A', 'A u B = (A \\ B) u B', p_join_within_star),
    Law('L11', _roles('A', FAMILY, 'B', FAMILY), INCLUSION,
        'join and star are monotone in both arguments', 'monotonicity of v and *', p_monotone),
    Law('L12', _roles('A', FAMILY), INCLUSION,
        'A <= A v A, with equality for union-closed A', 'self-join', p_self_join),
    Law('L13', _roles('S', SEMIGROUP), INCLUSION,
        'complements of a union-closed family are intersection-closed', 'complement family',
        p_complements_meet_closed),
    Law('L14', _roles('A', FAMILY, 'B', FAMILY), INCLUSION,
        'A <= A v B_0, B <= A_0 v B, A <= A v A_0', 'adjoining the empty set', p_empty_adjoined),
    Law('L15', _roles('A', FAMILY), INCLUSION,
        'S_0(A) and S_X(A) are union-closed; adjoining a member changes nothing',
        'adjoined families', p_adjoined_closure),
    Law('L16', _roles('A', FAMILY), IDENTITY,
        'S(A) is union-closed and idempotent, S(A) <= I(A), I(A) = P(uA) is an ideal',
        'generated semigroup and ideal', p_generated_structures),
    Law('N1', _roles('A', FAMILY, 'B', FAMILY), NON_LAW,
        'S(A u B) = S(A) u S(B)', 'closure of a union of families', n_closure_of_union, 2, 1),
    Law('N2', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP, 'Y', APEX), NON_LAW,
        'S1 * P(Y) <= (S1 v S2) * P(Y)', 'star with an ideal after joining', n_star_ideal_of_join, 2, 2),
    Law('N3', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP, 'Y', APEX), NON_LAW,
        'P(Y) * S2 <= P(Y) * (S1 v S2)', 'ideal star after joining', n_ideal_star_of_join, 2, 2),
    Law('N4', _roles('A', FAMILY, 'B', FAMILY), NON_LAW,
        'A <= A v B', 'join need not contain its operands', n_join_contains, 2, 1),
    Law('N5', _roles('S1', SEMIGROUP, 'S2', SEMIGROUP), NON_LAW,
        'S1 u S2 is union-closed', 'union of semigroups', n_union_of_semigroups, 2, 1),
    Law('N6', _roles('S', SEMIGROUP, 'Y1', APEX, 'Y2', APEX), NON_LAW,
        'S * (P(Y1) v P(Y2)) <= (S * P(Y1)) v (S * P(Y2))',
        'star with a join of ideals, reverse inclusion', p_star_ideal_join_ideals_reverse, 2, 1),
)

_ALIASES = {"L4P": "L4'", "L4p": "L4'"}


def builtin_laws() -> List[Law]:
    """内置法则注册表"""
    return list(_BUILTIN)


def get_law(law_id: str) -> Law:
    law_id = _ALIASES.get(law_id, law_id)
    for law in _BUILTIN:
        if law.id == law_id:
            return law
    raise UnknownLawError(f"unknown law id {law_id!r}")


# ---------------------------------------------------------------------------
# 操作数空间
# ---------------------------------------------------------------------------

def count_families(universe_size: int, max_members: int) -> int:
    n = 1 << universe_size
    return sum(comb(n, r) for r in range(1, max_members + 1))


def count_domain(role: str, universe_size: int, max_members: int) -> int:
    if role == APEX:
        return 1 << universe_size
    return count_families(universe_size, max_members)


def estimate_cases(roles: Sequence[str], universe_size: int, max_members: int) -> int:
    total = 1
    for role in roles:
        total *= count_domain(role, universe_size, max_members)
    return total


@lru_cache(maxsize=64)
def role_domain(role: str, universe_size: int, max_members: int) -> tuple:
    """某一角色的全部取值，按规范序排列"""
    u = make_universe(universe_size)
    if role == APEX:
        return tuple(PrincipalIdeal(Subset(u, m)) for m in range(1 << universe_size))
    combos = sorted(
        c for r in range(1, max_members + 1) for c in combinations(range(1 << universe_size), r)
    )
    families = tuple(SetFamily._trusted(u, c) for c in combos)
    if role == SEMIGROUP:
        return tuple(semigroup_closure(f) for f in families)
    return families


def describe_operand(value) -> Any:
    if isinstance(value, PrincipalIdeal):
        return value.apex.elements()
    if isinstance(value, Subset):
        return value.elements()
    return value.to_lists()


def describe_binding(law: Law, binding: Sequence) -> Dict[str, Any]:
    return {name: describe_operand(v) for name, v in zip(law.role_names, binding)}


# ---------------------------------------------------------------------------
# 单例检验
# ---------------------------------------------------------------------------

def _coerce(law: Law, binding) -> List:
    if isinstance(binding, dict):
        missing = [n for n in law.role_names if n not in binding]
        extra = [n for n in binding if n not in law.role_names]
        if missing or extra:
            raise ArityError(f"law {law.id} expects roles {law.role_names}, got {tuple(binding)}")
        binding = [binding[n] for n in law.role_names]
    binding = list(binding)
    if len(binding) != len(law.roles):
        raise ArityError(f"law {law.id} expects {len(law.roles)} operands, got {len(binding)}")
    return binding


def check_law(law: Law, binding, auto_close: bool = False) -> SearchReport:
    """对单个操作数绑定求值一次"""
    values = []
    universe: Optional[Universe] = None
    for (name, role), value in zip(law.roles, _coerce(law, binding)):
        if role == APEX:
            if isinstance(value, Subset):
                value = PrincipalIdeal(value)
            if not isinstance(value, PrincipalIdeal):
                raise ArityError(f"operand {name} of {law.id} must be an ideal apex")
            u = value.universe
        else:
            if not isinstance(value, SetFamily):
                raise ArityError(f"operand {name} of {law.id} must be a family")
            if not value:
                raise EmptyFamilyError(f"operand {name} of {law.id} must be non-empty")
            if role == SEMIGROUP and not is_semigroup(value):
                if not auto_close:
                    raise FamilyAlgebraError(f"operand {name} of {law.id} is not union-closed")
                value = semigroup_closure(value)
            u = value.universe
        if universe is None:
            universe = u
        elif u != universe:
            raise FamilyAlgebraError(f"operand {name} of {law.id} lives on another universe")
        values.append(value)
    holds = bool(law.predicate(*values))
    return SearchReport(
        law_id=law.id, kind=law.kind, mode='single', universe_size=universe.size,
        max_members=None, cases=1, outcome='pass' if holds else 'witness',
        witness=None if holds else describe_binding(law, values),
    )


# ---------------------------------------------------------------------------
# 穷举搜索
# ---------------------------------------------------------------------------

def _scan_range(law: Law, universe_size: int, max_members: int, start: int, stop: int) -> Optional[int]:
    domains = [role_domain(role, universe_size, max_members) for role in law.arity]
    for index, binding in enumerate(islice(product(*domains), start, stop), start):
        if not law.predicate(*binding):
            return index
    return None


def _scan_chunk(task: Tuple[str, int, int, int, int]) -> Optional[int]:
    law_id, universe_size, max_members, start, stop = task
    return _scan_range(get_law(law_id), universe_size, max_members, start, stop)


def _chunks(total: int, size: int) -> List[Tuple[int, int]]:
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _is_registered(law: Law) -> bool:
    try:
        return get_law(law.id) is law
    except UnknownLawError:
        return False


def exhaustive_search(law: Law, universe_size: Optional[int] = None, max_members: Optional[int] = None,
                      config: Optional[SearchConfig] = None) -> SearchReport:
    """
    按规范序穷举全部操作数绑定

    Returns:
        pass 及用例数，或规范序最小的见证
    """
    config = config or SearchConfig()
    universe_size = law.default_universe if universe_size is None else universe_size
    max_members = law.default_members if max_members is None else max_members
    if not 1 <= universe_size <= MAX_EXHAUSTIVE_UNIVERSE:
        raise BoundError(f"exhaustive search supports universe sizes 1..{MAX_EXHAUSTIVE_UNIVERSE}, got {universe_size}")
    if max_members < 1:
        raise BoundError("max_members must be at least 1")
    total = estimate_cases(law.arity, universe_size, max_members)
    if total > config.ceiling:
        raise BoundError(f"{law.id}: {total} cases exceed the ceiling {config.ceiling}")

    logger.info(f"穷举检验 {law.id}: |X|={universe_size}, 成员上限={max_members}, 共 {total} 个用例")
    if config.workers > 1 and total > config.chunk_size and _is_registered(law):
        tasks = [(law.id, universe_size, max_members, lo, hi) for lo, hi in _chunks(total, config.chunk_size)]
        with Pool(processes=config.workers) as pool:
            found = [w for w in pool.imap_unordered(_scan_chunk, tasks) if w is not None]
        least = min(found) if found else None
    else:
        least = _scan_range(law, universe_size, max_members, 0, total)

    witness = None
    cases = total
    if least is not None:
        domains = [role_domain(role, universe_size, max_members) for role in law.arity]
        binding = next(islice(product(*domains), least, None))
        witness = describe_binding(law, binding)
        cases = least + 1
        logger.info(f"{law.id} 找到见证（第 {cases} 个用例）: {witness}")
    return SearchReport(
        law_id=law.id, kind=law.kind, mode='exhaustive', universe_size=universe_size,
        max_members=max_members, cases=cases, outcome='pass' if witness is None else 'witness',
        witness=witness,
    )


# ---------------------------------------------------------------------------
# 随机搜索
# ---------------------------------------------------------------------------

def _sample_operand(rng: random.Random, role: str, u: Universe, max_members: int):
    if role == APEX:
        return PrincipalIdeal(Subset(u, rng.getrandbits(u.size)))
    count = rng.randint(1, min(max_members, 1 << u.size))
    family = SetFamily._trusted(u, rng.sample(range(1 << u.size), count))
    return semigroup_closure(family) if role == SEMIGROUP else family


def random_search(law: Law, universe_size: int, max_members: int, trials: int, seed: int = 0) -> SearchReport:
    """带种子的可复现抽样检验；返回第一个见证"""
    if not 1 <= universe_size <= MAX_RANDOM_UNIVERSE:
        raise BoundError(f"random search supports universe sizes 1..{MAX_RANDOM_UNIVERSE}, got {universe_size}")
    if max_members < 1 or trials < 1:
        raise BoundError("max_members and trials must be positive")
    u = make_universe(universe_size)
    rng = random.Random(seed)
    logger.info(f"随机检验 {law.id}: |X|={universe_size}, 试验 {trials} 次, seed={seed}")
    witness = None
    cases = trials
    for trial in range(trials):
        binding = [_sample_operand(rng, role, u, max_members) for role in law.arity]
        if not law.predicate(*binding):
            witness = describe_binding(law, binding)
            cases = trial + 1
            logger.info(f"{law.id} 随机找到见证（第 {cases} 次）")
            break
    return SearchReport(
        law_id=law.id, kind=law.kind, mode='random', universe_size=universe_size,
        max_members=max_members, cases=cases, outcome='pass' if witness is None else 'witness',
        witness=witness, seed=seed, trials=trials,
    )


def search(law: Law, mode: str = 'exhaustive', universe_size: Optional[int] = None,
           max_members: Optional[int] = None, trials: int = 1000, seed: int = 0,
           config: Optional[SearchConfig] = None) -> SearchReport:
    if mode == 'exhaustive':
        return exhaustive_search(law, universe_size, max_members, config)
    if mode == 'random':
        return random_search(law, universe_size or law.default_universe,
                             max_members or law.default_members, trials, seed)
    raise FamilyAlgebraError(f"unknown search mode {mode!r}")


# ---------------------------------------------------------------------------
# 包含关系探索：S(A v B) * P(Y) 与 S((A v B) * P(Y))
# ---------------------------------------------------------------------------

EQUAL = 'equal'
LEFT_IN_RIGHT = 'left⊂right'
RIGHT_IN_LEFT = 'right⊂left'
INCOMPARABLE = 'incomparable'
CLASSES = (EQUAL, LEFT_IN_RIGHT, RIGHT_IN_LEFT, INCOMPARABLE)

_RELATION_TO_CLASS = {
    'equal': EQUAL, 'subfamily': LEFT_IN_RIGHT, 'superfamily': RIGHT_IN_LEFT, 'incomparable': INCOMPARABLE,
}


@dataclass
class ExplorationReport:
    """探索结果：分类计数与每类的最小例子"""
    universe_size: int
    max_members: int
    closed_operands: bool
    cases: int
    tally: Dict[str, int]
    examples: Dict[str, Dict[str, Any]]
    closed_cases: int
    closed_unequal: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'universe_size': self.universe_size,
            'max_members': self.max_members,
            'closed_operands': self.closed_operands,
            'cases': self.cases,
            'tally': dict(self.tally),
            'examples': dict(self.examples),
            'closed_cases': self.closed_cases,
            'closed_unequal': self.closed_unequal,
        }


def classify_q213(a: SetFamily, b: SetFamily, y: PrincipalIdeal) -> str:
    ab = join(a, b)
    left = _si(semigroup_closure(ab), y)
    right = semigroup_closure(_si(ab, y))
    return _RELATION_TO_CLASS[family_relations(left, right)]


def _explore_range(universe_size: int, max_members: int, closed: bool, start: int, stop: int):
    role = SEMIGROUP if closed else FAMILY
    fams = role_domain(role, universe_size, max_members)
    apexes = role_domain(APEX, universe_size, max_members)
    tally = {c: 0 for c in CLASSES}
    least: Dict[str, int] = {}
    closed_cases = closed_unequal = 0
    for index, (a, b, y) in enumerate(islice(product(fams, fams, apexes), start, stop), start):
        cls = classify_q213(a, b, y)
        tally[cls] += 1
        least.setdefault(cls, index)
        if is_semigroup(a) and is_semigroup(b):
            closed_cases += 1
            closed_unequal += cls != EQUAL
    return tally, least, closed_cases, closed_unequal


def _explore_chunk(task):
    return _explore_range(*task)


def explore_q213(universe_size: int, max_members: int, closed_operands: bool = False,
                 config: Optional[SearchConfig] = None) -> ExplorationReport:
    """对所有 (A, B, Y) 比较 S(A v B)*P(Y) 与 S((A v B)*P(Y))，只做统计不做断言"""
    config = config or SearchConfig()
    if not 1 <= universe_size <= MAX_EXPLORE_UNIVERSE:
        raise BoundError(f"exploration supports universe sizes 1..{MAX_EXPLORE_UNIVERSE}, got {universe_size}")
    if max_members < 1:
        raise BoundError("max_members must be at least 1")
    role = SEMIGROUP if closed_operands else FAMILY
    total = estimate_cases((role, role, APEX), universe_size, max_members)
    if total > config.ceiling:
        raise BoundError(f"exploration needs {total} cases, over the ceiling {config.ceiling}")
    logger.info(f"包含关系探索: |X|={universe_size}, 成员上限={max_members}, 共 {total} 个用例")

    if config.workers > 1 and total > config.chunk_size:
        tasks = [(universe_size, max_members, closed_operands, lo, hi)
                 for lo, hi in _chunks(total, config.chunk_size)]
        with Pool(processes=config.workers) as pool:
            parts = list(pool.imap_unordered(_explore_chunk, tasks))
    else:
        parts = [_explore_range(universe_size, max_members, closed_operands, 0, total)]

    tally = {c: 0 for c in CLASSES}
    least: Dict[str, int] = {}
    closed_cases = closed_unequal = 0
    for part_tally, part_least, part_closed, part_unequal in parts:
        for cls, count in part_tally.items():
            tally[cls] += count
        for cls, index in part_least.items():
            least[cls] = min(index, least.get(cls, index))
        closed_cases += part_closed
        closed_unequal += part_unequal

    fams = role_domain(role, universe_size, max_members)
    apexes = role_domain(APEX, universe_size, max_members)
    examples = {}
    for cls in CLASSES:
        if cls in least:
            a, b, y = next(islice(product(fams, fams, apexes), least[cls], None))
            examples[cls] = {'A': a.to_lists(), 'B': b.to_lists(), 'Y': y.apex.elements()}
    return ExplorationReport(universe_size, max_members, closed_operands, total, tally, examples,
                             closed_cases, closed_unequal)


# ---------------------------------------------------------------------------
# 手算例子的回归夹具
# ---------------------------------------------------------------------------

@dataclass
class FixtureResult:
    name: str
    checks: List[Tuple[str, bool]]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'passed': self.passed,
                'checks': [{'check': c, 'passed': ok} for c, ok in self.checks]}


def _family(u: Universe, *subsets: Subset) -> SetFamily:
    return SetFamily._trusted(u, (s.bits for s in subsets))


def four_point_fixture() -> FixtureResult:
    """X={a,b,c,d}, A={a,b}, B={b,c}, D={c,d}"""
    u = make_universe(4, ['a', 'b', 'c', 'd'])
    a, b, d = make_subset(u, [0, 1]), make_subset(u, [1, 2]), make_subset(u, [2, 3])
    x = make_subset(u, range(4))
    abc = make_subset(u, [0, 1, 2])
    fa, fb = _family(u, a), _family(u, b, d)
    sa, sb = semigroup_closure(fa), semigroup_closure(fb)
    union = SetFamily._trusted(u, fa.maskset | fb.maskset)
    checks = [
        ('S(A) = {A}', sa == fa),
        ('S(B) = {B, D, B u D}', sb == _family(u, b, d, b | d)),
        ('A v B = {{a,b,c}, X}', join(fa, fb) == _family(u, abc, x)),
        ('S(A v B) = {{a,b,c}, X}', semigroup_closure(join(fa, fb)) == _family(u, abc, x)),
        ('S(A) v S(B) = S(A v B)', join(sa, sb) == semigroup_closure(join(fa, fb))),
        ('S(A u B) has 6 members, S(A) u S(B) has 4',
         len(semigroup_closure(union)) == 6 and len(sa.maskset | sb.maskset) == 4),
        ('S(A u B) != S(A) u S(B)',
         semigroup_closure(union) != SetFamily._trusted(u, sa.maskset | sb.maskset)),
    ]
    return FixtureResult('four-point closures', checks)


def complementary_pair_fixture(size: int = 2, a_elems: Sequence[int] = (0,)) -> FixtureResult:
    """A 与 B = X\\A，S1={A,X}, S2={B,X}, I=P(A), J=P(B)"""
    u = make_universe(size)
    a = make_subset(u, a_elems)
    if a.bits == 0 or a.bits == u.full_mask:
        raise FamilyAlgebraError("A must be a non-empty proper subset")
    b, x = a.complement(), make_subset(u, range(size))
    empty = make_subset(u, [])
    s1, s2 = _family(u, a, x), _family(u, b, x)
    i, j = PrincipalIdeal(a), PrincipalIdeal(b)
    s12 = join(s1, s2)
    checks = [
        ('empty in S1*I', empty in star_ideal(s1, i)),
        ('A in S1*I', a in star_ideal(s1, i)),
        ('empty not in (S1 v S2)*I', empty not in star_ideal(s12, i)),
        ('A not in (S1 v S2)*I', a not in star_ideal(s12, i)),
        ('I*(S1 v S2) = {X}', _is(i, s12) == _family(u, x)),
        ('J*(S1 v S2) = {X}', _is(j, s12) == _family(u, x)),
        ('B in I*S2', b in ideal_star(i, s2)),
        ('A in J*S1', a in ideal_star(j, s1)),
        ('empty and B in S2*J', empty in star_ideal(s2, j) and b in star_ideal(s2, j)),
        ('empty and B not in (S1 v S2)*J', empty not in star_ideal(s12, j) and b not in star_ideal(s12, j)),
    ]
    return FixtureResult(f'complementary pair |X|={size}, A={list(a_elems)}', checks)


def regression_fixtures() -> List[FixtureResult]:
    results = [
        four_point_fixture(),
        complementary_pair_fixture(2, (0,)),
        complementary_pair_fixture(3, (0, 1)),
    ]
    for r in results:
        logger.info(f"夹具 {r.name}: {'通过' if r.passed else '失败'}")
    return results

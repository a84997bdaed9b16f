"""
有限群模型模块
用有限阿贝尔群 Z_n1 × ... × Z_nk 实现陪集划分、选择集（横截）、
子群结构、平移作用，以及带零测度理想的加权计数测度
"""

import logging
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from modules.algebra import (
    PrincipalIdeal, is_semigroup, join_all, s_adjoin, semigroup_closure, star_ideal,
)
from modules.core import (
    BoundError, GroupError, SetFamily, Subset, Universe, UniverseMismatchError,
    iter_bits, make_universe,
)

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 64
TRANSVERSAL_CEILING = 10 ** 5
MAX_MEASURE_UNIVERSE = 10
MAX_COSETS_FOR_UNIONS = 20

_FACTOR = re.compile(r'Z(\d+)$')


@dataclass(frozen=True)
class GroupModel:
    """
    有限阿贝尔群 Z_n1 × ... × Z_nk

    元素按混合进制编码为 0..N-1，第一个分量为最高位；
    元素集合同时作为大小为 N 的全集使用。
    """
    moduli: Tuple[int, ...]
    universe: Universe = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not self.moduli or any(not isinstance(n, int) or n < 1 for n in self.moduli):
            raise GroupError(f"moduli must be positive integers, got {list(self.moduli)}")
        order = 1
        for n in self.moduli:
            order *= n
        if order > MAX_GROUP_ORDER:
            raise GroupError(f"group order {order} exceeds {MAX_GROUP_ORDER}")
        if len(self.moduli) == 1:
            labels = [str(i) for i in range(order)]
        else:
            labels = ['(' + ','.join(map(str, self._decode(i))) + ')' for i in range(order)]
        object.__setattr__(self, 'universe', make_universe(order, labels))

    @property
    def order(self) -> int:
        return self.universe.size

    @property
    def name(self) -> str:
        return 'x'.join(f'Z{n}' for n in self.moduli)

    def elements(self) -> range:
        return range(self.order)

    def _decode(self, index: int) -> Tuple[int, ...]:
        digits = []
        for n in reversed(self.moduli):
            index, r = divmod(index, n)
            digits.append(r)
        return tuple(reversed(digits))

    def decode(self, index: int) -> Tuple[int, ...]:
        self.check_element(index)
        return self._decode(index)

    def encode(self, components: Sequence[int]) -> int:
        if len(components) != len(self.moduli):
            raise GroupError(f"{self.name} elements have {len(self.moduli)} components, got {len(components)}")
        index = 0
        for c, n in zip(components, self.moduli):
            if not 0 <= c < n:
                raise GroupError(f"component {c} out of range for Z{n}")
            index = index * n + c
        return index

    def check_element(self, index: int):
        if not isinstance(index, int) or not 0 <= index < self.order:
            raise GroupError(f"element {index} out of range for {self.name}")

    def add(self, a: int, b: int) -> int:
        da, db = self._decode(a), self._decode(b)
        return self.encode([(x + y) % n for x, y, n in zip(da, db, self.moduli)])

    def neg(self, a: int) -> int:
        return self.encode([(-x) % n for x, n in zip(self._decode(a), self.moduli)])

    def parse_element(self, token: str) -> int:
        """解析 "3" 或 "(1,0)" 形式的元素"""
        token = token.strip()
        if token.startswith('('):
            if not token.endswith(')'):
                raise GroupError(f"malformed element {token!r}")
            try:
                parts = [int(p) for p in token[1:-1].split(',')]
            except ValueError:
                raise GroupError(f"malformed element {token!r}") from None
            return self.encode(parts)
        try:
            value = int(token)
        except ValueError:
            raise GroupError(f"malformed element {token!r}") from None
        if len(self.moduli) == 1:
            self.check_element(value)
            return value
        raise GroupError(f"elements of {self.name} are written as tuples, got {token!r}")

    def translation(self, t: int) -> List[int]:
        """平移 x -> x+t 的置换表"""
        self.check_element(t)
        return [self.add(x, t) for x in self.elements()]

    def check_axioms(self) -> bool:
        """穷举检验结合律、交换律、单位元与逆元"""
        els = self.elements()
        for a in els:
            if self.add(a, 0) != a or self.add(a, self.neg(a)) != 0:
                return False
            for b in els:
                ab = self.add(a, b)
                if ab != self.add(b, a):
                    return False
                for c in els:
                    if self.add(ab, c) != self.add(a, self.add(b, c)):
                        return False
        return True

    def __str__(self) -> str:
        return self.name


def parse_group(text: str) -> GroupModel:
    """解析 "Z6" 或 "Z2xZ2" 形式的群"""
    moduli = []
    for part in text.strip().split('x'):
        m = _FACTOR.match(part.strip())
        if not m:
            raise GroupError(f"malformed group {text!r}; expected e.g. Z6 or Z2xZ2")
        moduli.append(int(m.group(1)))
    return GroupModel(tuple(moduli))


# ---------------------------------------------------------------------------
# 子群与陪集
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """加法封闭且含 0 的子集"""
    group: GroupModel
    elements: Subset

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def bits(self) -> int:
        return self.elements.bits

    def is_trivial(self) -> bool:
        return self.elements.bits == 1

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __str__(self) -> str:
        return str(self.elements)


def _closure_bits(g: GroupModel, seed: int) -> int:
    bits = seed | 1
    while True:
        grown = bits
        for a in iter_bits(bits):
            for b in iter_bits(bits):
                grown |= 1 << g.add(a, b)
        if grown == bits:
            return bits
        bits = grown


def subgroup_generated(g: GroupModel, gens: Sequence[int]) -> Subgroup:
    """包含生成元的最小子群"""
    seed = 0
    for x in gens:
        g.check_element(x)
        seed |= 1 << x
    return Subgroup(g, Subset(g.universe, _closure_bits(g, seed)))


def make_subgroup(g: GroupModel, elements: Sequence[int]) -> Subgroup:
    """校验给定元素集合确是子群"""
    seed = 0
    for x in elements:
        g.check_element(x)
        seed |= 1 << x
    if not seed & 1 or _closure_bits(g, seed) != seed:
        raise GroupError(f"{sorted(elements)} is not a subgroup of {g.name}")
    return Subgroup(g, Subset(g.universe, seed))


def all_subgroups(g: GroupModel) -> List[Subgroup]:
    """全部子群，按元素位向量升序"""
    found = {1}
    frontier = [1]
    while frontier:
        h = frontier.pop()
        for x in g.elements():
            if h >> x & 1:
                continue
            k = _closure_bits(g, h | 1 << x)
            if k not in found:
                found.add(k)
                frontier.append(k)
    logger.debug(f"{g.name} 共有 {len(found)} 个子群")
    return [Subgroup(g, Subset(g.universe, b)) for b in sorted(found)]


def subgroup_lattice(g: GroupModel) -> nx.DiGraph:
    """子群格的 Hasse 图：边 H -> K 表示 H 是 K 的极大真子群"""
    subs = all_subgroups(g)
    order = nx.DiGraph()
    for h in subs:
        order.add_node(h.bits, label=str(h), order=h.order)
    for h, k in combinations(subs, 2):
        if h.bits & ~k.bits == 0:
            order.add_edge(h.bits, k.bits)
        elif k.bits & ~h.bits == 0:
            order.add_edge(k.bits, h.bits)
    hasse = nx.transitive_reduction(order)
    hasse.add_nodes_from(order.nodes(data=True))
    return hasse


def translate(a: Subset, t: int, g: GroupModel) -> Subset:
    """A + t"""
    if a.universe != g.universe:
        raise UniverseMismatchError("subset does not live on the group")
    g.check_element(t)
    bits = 0
    for x in iter_bits(a.bits):
        bits |= 1 << g.add(x, t)
    return Subset(a.universe, bits)


def _translate_mask(mask: int, table: Sequence[int]) -> int:
    bits = 0
    for x in iter_bits(mask):
        bits |= 1 << table[x]
    return bits


@dataclass(frozen=True)
class CosetPartition:
    subgroup: Subgroup
    cosets: Tuple[Subset, ...]

    @property
    def group(self) -> GroupModel:
        return self.subgroup.group

    def __len__(self) -> int:
        return len(self.cosets)

    def coset_of(self, x: int) -> Subset:
        for c in self.cosets:
            if x in c:
                return c
        raise GroupError(f"element {x} is not covered")


def cosets_of(q: Subgroup) -> CosetPartition:
    """陪集划分，按最小元素排序"""
    g = q.group
    covered = 0
    cosets = []
    for t in g.elements():
        if covered >> t & 1:
            continue
        coset = translate(q.elements, t, g)
        covered |= coset.bits
        cosets.append(coset)
    return CosetPartition(q, tuple(cosets))


def coset_family(b: Subgroup) -> SetFamily:
    return SetFamily._trusted(b.group.universe, (c.bits for c in cosets_of(b).cosets))


@dataclass(frozen=True)
class Transversal:
    """每个陪集恰取一个元素的选择集；构造时不校验，见 is_valid"""
    partition: CosetPartition
    picks: Subset

    @property
    def is_valid(self) -> bool:
        return is_transversal(self.picks, self.partition)

    def __str__(self) -> str:
        return str(self.picks)


def is_transversal(v: Subset, p: CosetPartition) -> bool:
    if v.universe != p.group.universe:
        raise UniverseMismatchError("pick set does not live on the group")
    return all(len(v & c) == 1 for c in p.cosets)


def transversal_count(p: CosetPartition) -> int:
    return p.subgroup.order ** len(p.cosets)


def enumerate_transversals(p: CosetPartition, ceiling: int = TRANSVERSAL_CEILING) -> Iterator[Transversal]:
    """全部选择集，按位向量升序"""
    count = transversal_count(p)
    if count > ceiling:
        raise BoundError(f"{count} transversals exceed the ceiling {ceiling}")
    masks = []
    for picks in product(*(c.elements() for c in p.cosets)):
        bits = 0
        for x in picks:
            bits |= 1 << x
        masks.append(bits)
    u = p.group.universe
    return (Transversal(p, Subset(u, b)) for b in sorted(masks))


def vitali_partition_check(v: Transversal) -> bool:
    """{V+q : q∈Q} 两两不交且覆盖全群"""
    g = v.partition.group
    covered = 0
    for q in iter_bits(v.partition.subgroup.bits):
        shifted = translate(v.picks, q, g).bits
        if covered & shifted:
            return False
        covered |= shifted
    return covered == g.universe.full_mask


def translate_transversal_check(v: Transversal, t: int) -> bool:
    return is_transversal(translate(v.picks, t, v.partition.group), v.partition)


def proper_coset_union_check(b: Subgroup) -> bool:
    """真子陪集族之并是群的真子集，且与被略去的陪集不交"""
    cosets = cosets_of(b).cosets
    if len(cosets) < 2:
        raise GroupError(f"subgroup {b} has a single coset")
    if len(cosets) > MAX_COSETS_FOR_UNIONS:
        raise BoundError(f"{len(cosets)} cosets give too many sub-collections to enumerate")
    full = b.group.universe.full_mask
    k = len(cosets)
    for chosen in range(1, (1 << k) - 1):
        union = 0
        for i in iter_bits(chosen):
            union |= cosets[i].bits
        if union == full:
            return False
        for i in range(k):
            if not chosen >> i & 1 and cosets[i].bits & union:
                return False
    return True


def trivial_intersection_pair(g: GroupModel) -> Optional[Tuple[Subgroup, Subgroup]]:
    """交为 {0} 的规范序最小非平凡子群对"""
    nontrivial = [h for h in all_subgroups(g) if not h.is_trivial()]
    for h1, h2 in combinations(nontrivial, 2):
        if h1.bits & h2.bits == 1:
            return h1, h2
    return None


def translation_invariance_check(f: SetFamily, g: GroupModel) -> bool:
    """∀A∈f, ∀t∈G: A+t ∈ f"""
    if f.universe != g.universe:
        raise UniverseMismatchError("family does not live on the group")
    for t in g.elements():
        table = g.translation(t)
        if any(_translate_mask(m, table) not in f.maskset for m in f.masks):
            return False
    return True


def transversal_family(p: CosetPartition, ceiling: int = TRANSVERSAL_CEILING) -> SetFamily:
    """全部选择集构成的集族 𝒱(Q)"""
    return SetFamily._trusted(p.group.universe, (v.picks.bits for v in enumerate_transversals(p, ceiling)))


def selector_union_invariance_check(p: CosetPartition) -> bool:
    """选择集的全部有限并构成平移不变集族"""
    unions = semigroup_closure(transversal_family(p))
    return translation_invariance_check(unions, p.group)


# ---------------------------------------------------------------------------
# 加权测度
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedMeasure:
    """μ(A) = Σ_{i∈A} w_i，权重为非负有理数"""
    universe: Universe
    weights: Tuple[Fraction, ...]


def make_measure(u: Universe, weights: Sequence) -> WeightedMeasure:
    """
    创建加权测度

    Args:
        u: 全集
        weights: 每个元素一个权重，可为 int、Fraction 或 "1/2" 之类的字符串
    """
    if len(weights) != u.size:
        raise GroupError(f"expected {u.size} weights, got {len(weights)}")
    parsed = []
    for w in weights:
        try:
            value = Fraction(w)
        except (ValueError, ZeroDivisionError):
            raise GroupError(f"malformed weight {w!r}") from None
        if value < 0:
            raise GroupError(f"weights must be non-negative, got {value}")
        parsed.append(value)
    return WeightedMeasure(u, tuple(parsed))


def _mask_measure(m: WeightedMeasure, mask: int) -> Fraction:
    return sum((m.weights[i] for i in iter_bits(mask)), Fraction(0))


def measure(m: WeightedMeasure, a: Subset) -> Fraction:
    if a.universe != m.universe:
        raise UniverseMismatchError("subset does not live on the measure's universe")
    return _mask_measure(m, a.bits)


def null_ideal(m: WeightedMeasure) -> PrincipalIdeal:
    """零测集理想 P({i : w_i = 0})"""
    apex = 0
    for i, w in enumerate(m.weights):
        if w == 0:
            apex |= 1 << i
    return PrincipalIdeal(Subset(m.universe, apex))


def _require_small(m: WeightedMeasure):
    if m.universe.size > MAX_MEASURE_UNIVERSE:
        raise BoundError(f"exhaustive measure checks support universes up to {MAX_MEASURE_UNIVERSE}")


def additivity_check(m: WeightedMeasure) -> bool:
    """μ(A∪B) + μ(A∩B) = μ(A) + μ(B)，穷举全部 (A, B)"""
    _require_small(m)
    n = 1 << m.universe.size
    values = [_mask_measure(m, a) for a in range(n)]
    if values[0] != 0:
        return False
    return all(values[a | b] + values[a & b] == values[a] + values[b] for a in range(n) for b in range(n))


def measure_lemma_check(m: WeightedMeasure) -> bool:
    """零测集理想正确，且 μ(AΔB)=0 蕴含 μ(A)=μ(B)"""
    _require_small(m)
    n = 1 << m.universe.size
    values = [_mask_measure(m, a) for a in range(n)]
    apex = null_ideal(m).apex.bits
    if any((values[a] == 0) != (a & ~apex == 0) for a in range(n)):
        return False
    return all(values[a] == values[b] for a in range(n) for b in range(n) if values[a ^ b] == 0)


def measure_invariance_check(m: WeightedMeasure, g: GroupModel) -> bool:
    """μ 平移不变当且仅当权重为常数"""
    if m.universe != g.universe:
        raise UniverseMismatchError("measure does not live on the group")
    masks = range(1 << g.order) if g.order <= 8 else [1 << i for i in g.elements()]
    invariant = True
    for t in g.elements():
        table = g.translation(t)
        if any(_mask_measure(m, _translate_mask(a, table)) != _mask_measure(m, a) for a in masks):
            invariant = False
            break
    constant = len(set(m.weights)) == 1
    return invariant == constant


def composition_check(b1: Subgroup, b2: Subgroup, q: Subgroup, m: WeightedMeasure) -> Dict[str, bool]:
    """
    模型集族 S(ℬ1)、S(ℬ2)、S(𝒱) 与零测理想 𝒩 的组合性质

    Returns:
        各项性质名称到是否成立的映射
    """
    g = b1.group
    if not (b2.group == g and q.group == g and m.universe == g.universe):
        raise UniverseMismatchError("composition operands must share one group")
    fam1, fam2 = coset_family(b1), coset_family(b2)
    sel = transversal_family(cosets_of(q))
    s1, s2, sv = semigroup_closure(fam1), semigroup_closure(fam2), semigroup_closure(sel)
    null = null_ideal(m)
    empty = Subset(g.universe, 0)

    def si(f):
        return star_ideal(f, null).materialize()

    joined = join_all([s1, s2, sv])
    adjoined = join_all([s_adjoin(fam1, empty), s_adjoin(fam2, empty), sv])
    results = {
        'join distributes over star with the null ideal': si(joined) == join_all([si(s1), si(s2), si(sv)]),
        'selector part survives adjoining the empty set': si(sv) <= si(adjoined),
        'selectors within selectors joined with B_0': sel <= join_all([sel, fam1.with_member(0)]),
        'cosets within V_0 joined with cosets': fam1 <= join_all([sel.with_member(0), fam1]),
        'S(B) star null ideal is union-closed': is_semigroup(si(s1)),
    }
    logger.info(f"组合检验 {g.name}: {sum(results.values())}/{len(results)} 项成立")
    return results


# ---------------------------------------------------------------------------
# 检验汇总（供脚本与命令行共用）
# ---------------------------------------------------------------------------

@dataclass
class ModelResult:
    check: str
    passed: bool
    cases: int = 0
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'check': self.check, 'passed': self.passed, 'cases': self.cases, 'details': self.details}


MODEL_CHECKS = (
    'vitali-partition', 'transversal-count', 'coset-union', 'trivial-pair', 'invariance',
    'measure-lemma', 'lattice', 'selector-invariance', 'composition', 'measure-invariance',
)


def _need(value, what: str, check: str):
    if value is None:
        raise GroupError(f"model {check} needs {what}")
    return value


def sample_transversals(p: CosetPartition, count: int, seed: int = 0) -> List[Transversal]:
    """按种子随机抽取选择集（不经过枚举）"""
    rng = random.Random(seed)
    u = p.group.universe
    out = []
    for _ in range(count):
        bits = 0
        for c in p.cosets:
            bits |= 1 << rng.choice(c.elements())
        out.append(Transversal(p, Subset(u, bits)))
    return out


def run_model_check(check: str, group: GroupModel, subgroup: Optional[Subgroup] = None,
                    other: Optional[Subgroup] = None, weights: Optional[WeightedMeasure] = None,
                    ceiling: int = TRANSVERSAL_CEILING, seed: int = 0) -> ModelResult:
    """
    执行一项命名的模型检验

    Args:
        check: MODEL_CHECKS 中的名称
        group: 群模型
        subgroup: 主子群（Q 或 B）
        other: 第二个子群（composition 使用）
        weights: 加权测度
    """
    if check not in MODEL_CHECKS:
        raise GroupError(f"unknown model check {check!r}; choose from {', '.join(MODEL_CHECKS)}")
    logger.info(f"模型检验 {check} on {group.name}")

    if check == 'trivial-pair':
        pair = trivial_intersection_pair(group)
        detail = {'pair': None if pair is None else [h.elements.labels() for h in pair]}
        return ModelResult(check, True, len(all_subgroups(group)), detail)

    if check == 'lattice':
        hasse = subgroup_lattice(group)
        return ModelResult(check, group.check_axioms(), hasse.number_of_nodes(), {
            'subgroups': [hasse.nodes[n]['label'] for n in sorted(hasse.nodes)],
            'covers': sorted([hasse.nodes[a]['label'], hasse.nodes[b]['label']] for a, b in hasse.edges),
        })

    if check in ('measure-lemma', 'measure-invariance'):
        m = _need(weights, 'declared weights', check)
        if check == 'measure-lemma':
            ok = additivity_check(m) and measure_lemma_check(m)
            return ModelResult(check, ok, 4 ** m.universe.size,
                               {'null_apex': null_ideal(m).apex.labels()})
        return ModelResult(check, measure_invariance_check(m, group), group.order,
                           {'constant_weights': len(set(m.weights)) == 1})

    q = _need(subgroup, 'a subgroup', check)
    p = cosets_of(q)

    if check == 'vitali-partition':
        count = transversal_count(p)
        if count <= ceiling:
            picks = list(enumerate_transversals(p, ceiling))
            mode = 'exhaustive'
        else:
            picks = sample_transversals(p, 100, seed)
            mode = 'sampled'
        ok = all(vitali_partition_check(v) and all(translate_transversal_check(v, t) for t in group.elements())
                 for v in picks)
        return ModelResult(check, ok, len(picks), {'mode': mode, 'subgroup': q.elements.labels()})

    if check == 'transversal-count':
        expected = transversal_count(p)
        actual = sum(1 for _ in enumerate_transversals(p, ceiling))
        return ModelResult(check, actual == expected, actual, {'expected': expected, 'cosets': len(p)})

    if check == 'coset-union':
        return ModelResult(check, proper_coset_union_check(q), 2 ** len(p) - 2, {'cosets': len(p)})

    if check == 'invariance':
        fam = coset_family(q)
        closed = semigroup_closure(fam)
        ok_fam = translation_invariance_check(fam, group)
        ok_closed = translation_invariance_check(closed, group)
        return ModelResult(check, ok_fam and ok_closed, len(closed),
                           {'cosets': fam.to_lists(), 'closure_members': len(closed)})

    if check == 'selector-invariance':
        return ModelResult(check, selector_union_invariance_check(p), transversal_count(p), {})

    # composition
    b2 = _need(other, 'a second subgroup (other=)', check)
    m = weights or make_measure(group.universe, [1] * group.order)
    results = composition_check(q, b2, q, m)
    return ModelResult(check, all(results.values()), len(results), results)

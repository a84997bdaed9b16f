"""
集族代数模块
生成半群 S(𝒜)、生成理想 I(𝒜)、并联 ∨、星运算 *，以及主理想运算

有限全集上每个理想都等于 P(Y)，因此理想只保存顶点 Y。
星运算与理想的成员判定使用闭式：
    x ∈ 𝒮*P(Y)  ⇔  ∃A∈𝒮: A\\Y ⊆ x ⊆ A∪Y
    x ∈ P(Y)*𝒮  ⇔  ∃S∈𝒮: S ⊆ x ⊆ S∪Y
两式与定义式枚举的等价性由测试保证。
"""

import logging
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Optional, Set

from modules.core import (
    BoundError, SetFamily, Subset, Universe, check_same_universe, iter_bits, iter_submasks,
)

logger = logging.getLogger(__name__)

STAR_EAGER_LIMIT = 10 ** 6
MATERIALIZE_LIMIT = 2 ** 20


def _popcount(mask: int) -> int:
    return bin(mask).count('1')


# ---------------------------------------------------------------------------
# 掩码层面的核心运算（供法则引擎的内层循环直接调用）
# ---------------------------------------------------------------------------

def join_masks(a: Iterable[int], b: Iterable[int]) -> Set[int]:
    b = tuple(b)
    return {x | y for x in a for y in b}


def star_masks(a: Iterable[int], b: Iterable[int]) -> Set[int]:
    b = tuple(b)
    return {(x & ~b1) | b2 for x in a for b1 in b for b2 in b}


def closure_masks(masks: Iterable[int]) -> Set[int]:
    """工作表不动点：每个新成员只与生成元取并"""
    gens = sorted(set(masks))
    result = set(gens)
    frontier = list(gens)
    while frontier:
        x = frontier.pop()
        for y in gens:
            z = x | y
            if z not in result:
                result.add(z)
                frontier.append(z)
    return result


def star_ideal_masks(masks: Iterable[int], apex: int) -> Set[int]:
    out = set()
    for a in masks:
        base = a & ~apex
        for sub in iter_submasks(apex):
            out.add(base | sub)
    return out


def ideal_star_masks(masks: Iterable[int], apex: int) -> Set[int]:
    out = set()
    for s in masks:
        for sub in iter_submasks(apex & ~s):
            out.add(s | sub)
    return out


def is_union_closed_masks(masks) -> bool:
    ms = masks if isinstance(masks, (set, frozenset)) else set(masks)
    seq = sorted(ms)
    for i, x in enumerate(seq):
        for y in seq[i + 1:]:
            if x | y not in ms:
                return False
    return True


# ---------------------------------------------------------------------------
# 类型
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrincipalIdeal:
    """主理想 P(Y)，只保存顶点 Y"""
    apex: Subset

    @property
    def universe(self) -> Universe:
        return self.apex.universe

    def __contains__(self, item) -> bool:
        bits = item.bits if isinstance(item, Subset) else item
        return bits & ~self.apex.bits == 0

    def size(self) -> int:
        return 1 << len(self.apex)

    def materialize(self, limit: int = MATERIALIZE_LIMIT) -> SetFamily:
        if self.size() > limit:
            raise BoundError(f"P(Y) has {self.size()} members, over the limit {limit}")
        return SetFamily._trusted(self.universe, iter_submasks(self.apex.bits))

    def __str__(self) -> str:
        return f"P({self.apex})"


def make_ideal(apex: Subset) -> PrincipalIdeal:
    return PrincipalIdeal(apex)


class ClosureHandle:
    """
    S(generators) 的句柄

    成员判定不需要物化；物化结果至多计算一次，且与并发调用次序无关。
    """

    def __init__(self, generators: SetFamily):
        generators.require_nonempty('generator family')
        self.generators = generators
        self._materialized: Optional[SetFamily] = None
        self._lock = threading.Lock()

    def __contains__(self, item) -> bool:
        return member_of_closure(item, self.generators)

    @property
    def materialized(self) -> Optional[SetFamily]:
        return self._materialized

    def materialize(self) -> SetFamily:
        if self._materialized is None:
            with self._lock:
                if self._materialized is None:
                    self._materialized = semigroup_closure(self.generators)
                    logger.debug(f"物化闭包: {len(self.generators)} 个生成元 -> {len(self._materialized)} 个成员")
        return self._materialized


class _Decider:
    """成员判定器 + 可选物化"""

    def __init__(self, family: SetFamily):
        family.require_nonempty()
        self.family = family

    @property
    def universe(self) -> Universe:
        return self.family.universe

    def __contains__(self, item) -> bool:
        if isinstance(item, Subset):
            check_same_universe(self.family, item)
            item = item.bits
        return self.decide(item)

    def decide(self, x: int) -> bool:
        raise NotImplementedError

    def materialize(self, limit: int = MATERIALIZE_LIMIT) -> SetFamily:
        raise NotImplementedError


class StarIdealDecider(_Decider):
    """𝒮*P(Y)"""

    def __init__(self, family: SetFamily, ideal: PrincipalIdeal):
        super().__init__(family)
        check_same_universe(family, ideal.apex)
        self.ideal = ideal

    def decide(self, x: int) -> bool:
        y = self.ideal.apex.bits
        return any((a & ~y) & ~x == 0 and x & ~(a | y) == 0 for a in self.family.masks)

    def materialize(self, limit: int = MATERIALIZE_LIMIT) -> SetFamily:
        bound = len(self.family) * self.ideal.size()
        if bound > limit:
            raise BoundError(f"star with P(Y) may have {bound} members, over the limit {limit}")
        return SetFamily._trusted(self.universe, star_ideal_masks(self.family.masks, self.ideal.apex.bits))


class IdealStarDecider(_Decider):
    """P(Y)*𝒮"""

    def __init__(self, ideal: PrincipalIdeal, family: SetFamily):
        super().__init__(family)
        check_same_universe(family, ideal.apex)
        self.ideal = ideal

    def decide(self, x: int) -> bool:
        y = self.ideal.apex.bits
        return any(s & ~x == 0 and x & ~(s | y) == 0 for s in self.family.masks)

    def materialize(self, limit: int = MATERIALIZE_LIMIT) -> SetFamily:
        bound = len(self.family) * self.ideal.size()
        if bound > limit:
            raise BoundError(f"P(Y) star family may have {bound} members, over the limit {limit}")
        return SetFamily._trusted(self.universe, ideal_star_masks(self.family.masks, self.ideal.apex.bits))


class StarDecider(_Decider):
    """一般的 f*g，仅在规模超过立即物化上限时使用"""

    def __init__(self, family: SetFamily, other: SetFamily):
        super().__init__(family)
        other.require_nonempty()
        check_same_universe(family, other)
        self.other = other

    def decide(self, x: int) -> bool:
        g = self.other.masks
        for a in self.family.masks:
            for b2 in g:
                if b2 & ~x:
                    continue
                rest = x & ~b2
                for b1 in g:
                    kept = a & ~b1
                    if kept & ~x == 0 and rest & ~kept == 0:
                        return True
        return False

    def materialize(self, limit: int = STAR_EAGER_LIMIT) -> SetFamily:
        return star(self.family, self.other, limit)


# ---------------------------------------------------------------------------
# 集族运算
# ---------------------------------------------------------------------------

def _binary_pre(f: SetFamily, g: SetFamily):
    f.require_nonempty('left operand')
    g.require_nonempty('right operand')
    check_same_universe(f, g)


def join(f: SetFamily, g: SetFamily) -> SetFamily:
    """𝒜∨ℬ = {A∪B : A∈𝒜, B∈ℬ}"""
    _binary_pre(f, g)
    return SetFamily._trusted(f.universe, join_masks(f.masks, g.masks))


def join_all(families: List[SetFamily]) -> SetFamily:
    """n 元并联（左折叠）"""
    if not families:
        raise ValueError("join_all needs at least one family")
    return reduce(join, families)


def star(f: SetFamily, g: SetFamily, limit: int = STAR_EAGER_LIMIT) -> SetFamily:
    """𝒜*ℬ = {(A\\B₁)∪B₂ : A∈𝒜, B₁,B₂∈ℬ}"""
    _binary_pre(f, g)
    work = len(f) * len(g) ** 2
    if work > limit:
        raise BoundError(f"star needs {work} evaluations, over the limit {limit}; use star_decider")
    return SetFamily._trusted(f.universe, star_masks(f.masks, g.masks))


def star_decider(f: SetFamily, g: SetFamily) -> StarDecider:
    return StarDecider(f, g)


def semigroup_closure(f: SetFamily) -> SetFamily:
    """S(𝒜)：包含 𝒜 的最小并封闭集族"""
    f.require_nonempty()
    return SetFamily._trusted(f.universe, closure_masks(f.masks))


def member_of_closure(x, f: SetFamily) -> bool:
    """不物化 S(f) 判定 x ∈ S(f)：f 中含于 x 的成员之并恰为 x"""
    f.require_nonempty()
    if isinstance(x, Subset):
        check_same_universe(f, x)
        x = x.bits
    covered = 0
    found = False
    for a in f.masks:
        if a & ~x == 0:
            covered |= a
            found = True
    return found and covered == x


def ideal_from_family(f: SetFamily) -> PrincipalIdeal:
    """I(𝒜) = P(∪𝒜)"""
    f.require_nonempty()
    return PrincipalIdeal(Subset(f.universe, f.union_all()))


def generated_ideal_family(f: SetFamily, limit: int = MATERIALIZE_LIMIT) -> SetFamily:
    return ideal_from_family(f).materialize(limit)


def is_semigroup(f: SetFamily) -> bool:
    """两两并封闭（有限并封闭由归纳得到）"""
    f.require_nonempty()
    return is_union_closed_masks(f.maskset)


def is_intersection_closed(f: SetFamily) -> bool:
    f.require_nonempty()
    ms = f.maskset
    seq = f.masks
    return all(x & y in ms for i, x in enumerate(seq) for y in seq[i + 1:])


def is_ideal(f: SetFamily) -> bool:
    """并封闭且向下封闭；向下封闭只需检查去掉单个元素"""
    if not is_semigroup(f):
        return False
    ms = f.maskset
    return all(m & ~(1 << i) in ms for m in f.masks for i in iter_bits(m))


def star_ideal(f: SetFamily, i: PrincipalIdeal) -> StarIdealDecider:
    """𝒮*ℐ 的判定器"""
    return StarIdealDecider(f, i)


def ideal_star(i: PrincipalIdeal, f: SetFamily) -> IdealStarDecider:
    """ℐ*𝒮 的判定器"""
    return IdealStarDecider(i, f)


def adjoin(f: SetFamily, y: Subset) -> SetFamily:
    """𝒜_Y = 𝒜 ∪ {Y}"""
    check_same_universe(f, y)
    return f.with_member(y.bits)


def s_adjoin(f: SetFamily, y: Subset) -> SetFamily:
    """S_Y(𝒜) = S(𝒜) ∪ {Y}"""
    check_same_universe(f, y)
    return semigroup_closure(f).with_member(y.bits)


def join_ideals(i1: PrincipalIdeal, i2: PrincipalIdeal) -> PrincipalIdeal:
    """P(Y₁)∨P(Y₂) = P(Y₁∪Y₂)"""
    return PrincipalIdeal(i1.apex.union(i2.apex))

"""
基础表示模块
有限全集、子集（位向量）与集族（规范化、去重、外延相等）

所有值构造后不可变，可在并发任务之间安全共享。
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

MAX_UNIVERSE_SIZE = 64


class FamilyAlgebraError(ValueError):
    """所有领域错误的基类"""


class UniverseError(FamilyAlgebraError):
    """全集大小或标签非法"""


class UniverseMismatchError(FamilyAlgebraError):
    """两个操作数不在同一全集上"""


class EmptyFamilyError(FamilyAlgebraError):
    """需要非空集族的位置传入了空集族"""


class BoundError(FamilyAlgebraError):
    """枚举或物化超过配置上限"""


class GroupError(FamilyAlgebraError):
    """群、子群或群元素非法"""


class ScriptError(FamilyAlgebraError):
    """脚本词法/语法/求值错误，带行列号"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{message} at {line}:{column}" if line else message)


@dataclass(frozen=True)
class Universe:
    """有限全集 X，最多64个带标签的元素"""
    size: int
    labels: Tuple[str, ...]

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UniverseError(f"unknown element {label!r}") from None

    def label_of(self, index: int) -> str:
        return self.labels[index]

    def __repr__(self) -> str:
        return f"Universe({self.size})"


def make_universe(size: int, labels: Optional[Sequence[str]] = None) -> Universe:
    """
    创建全集

    Args:
        size: 元素个数，1..64
        labels: 可选的元素名称列表，默认 "0".."size-1"
    """
    if not isinstance(size, int) or not 1 <= size <= MAX_UNIVERSE_SIZE:
        raise UniverseError(f"universe size must be in 1..{MAX_UNIVERSE_SIZE}, got {size}")
    if labels is None:
        labels = [str(i) for i in range(size)]
    labels = tuple(str(label) for label in labels)
    if len(labels) != size:
        raise UniverseError(f"expected {size} labels, got {len(labels)}")
    seen = set()
    for label in labels:
        if label in seen:
            raise UniverseError(f"duplicate label {label!r}")
        seen.add(label)
    return Universe(size, labels)


def _check_same(a: Universe, b: Universe):
    if a != b:
        raise UniverseMismatchError(f"universe mismatch: {a!r} vs {b!r}")


def iter_bits(mask: int) -> Iterator[int]:
    """按升序迭代掩码中的元素下标"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def iter_submasks(mask: int) -> Iterator[int]:
    """迭代 mask 的全部子掩码（含 0 与自身），按降序"""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Subset:
    """全集上的子集，按位存储成员"""
    universe: Universe
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.universe.size:
            raise UniverseError(f"bits {self.bits:#x} exceed universe of size {self.universe.size}")

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return bin(self.bits).count('1')

    def __contains__(self, index: int) -> bool:
        return bool(self.bits >> index & 1)

    def __lt__(self, other: 'Subset') -> bool:
        return self.bits < other.bits

    def issubset(self, other: 'Subset') -> bool:
        _check_same(self.universe, other.universe)
        return self.bits & ~other.bits == 0

    def union(self, other: 'Subset') -> 'Subset':
        _check_same(self.universe, other.universe)
        return Subset(self.universe, self.bits | other.bits)

    def intersection(self, other: 'Subset') -> 'Subset':
        _check_same(self.universe, other.universe)
        return Subset(self.universe, self.bits & other.bits)

    def difference(self, other: 'Subset') -> 'Subset':
        _check_same(self.universe, other.universe)
        return Subset(self.universe, self.bits & ~other.bits)

    def symmetric_difference(self, other: 'Subset') -> 'Subset':
        _check_same(self.universe, other.universe)
        return Subset(self.universe, self.bits ^ other.bits)

    def complement(self) -> 'Subset':
        return Subset(self.universe, self.universe.full_mask & ~self.bits)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference
    __invert__ = complement

    def elements(self) -> List[int]:
        return list(iter_bits(self.bits))

    def labels(self) -> List[str]:
        return [self.universe.labels[i] for i in iter_bits(self.bits)]

    def __str__(self) -> str:
        return '{' + ','.join(self.labels()) + '}'


def make_subset(u: Universe, elems: Iterable[int]) -> Subset:
    """由元素下标列表创建子集，重复下标合并"""
    bits = 0
    for i in elems:
        if not 0 <= i < u.size:
            raise UniverseError(f"element index {i} out of range for universe of size {u.size}")
        bits |= 1 << i
    return Subset(u, bits)


def set_ops(op: str, a: Subset, b: Optional[Subset] = None) -> Subset:
    """按名称执行布尔运算：union/intersection/difference/symmetric_difference/complement"""
    if op == 'complement':
        return a.complement()
    if b is None:
        raise FamilyAlgebraError(f"operation {op} needs two operands")
    ops = {
        'union': Subset.union,
        'intersection': Subset.intersection,
        'difference': Subset.difference,
        'symmetric_difference': Subset.symmetric_difference,
    }
    if op not in ops:
        raise FamilyAlgebraError(f"unknown set operation {op!r}")
    return ops[op](a, b)


class SetFamily:
    """
    集族：成员按无符号整数序严格递增、无重复

    内部以掩码元组保存，相等性为外延相等。
    """

    __slots__ = ('universe', 'masks', '_maskset')

    def __init__(self, universe: Universe, masks: Iterable[int]):
        self.universe = universe
        self.masks: Tuple[int, ...] = tuple(sorted(set(masks)))
        self._maskset = frozenset(self.masks)
        if self.masks and (self.masks[0] < 0 or self.masks[-1] >> universe.size):
            raise UniverseError("family member outside universe")

    @classmethod
    def _trusted(cls, universe: Universe, masks: Iterable[int]) -> 'SetFamily':
        # 调用方保证掩码均在全集内
        fam = cls.__new__(cls)
        fam.universe = universe
        fam._maskset = frozenset(masks)
        fam.masks = tuple(sorted(fam._maskset))
        return fam

    @property
    def members(self) -> List[Subset]:
        return [Subset(self.universe, m) for m in self.masks]

    @property
    def maskset(self) -> frozenset:
        return self._maskset

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[int]:
        return iter(self.masks)

    def __bool__(self) -> bool:
        return bool(self.masks)

    def __contains__(self, item) -> bool:
        if isinstance(item, Subset):
            _check_same(self.universe, item.universe)
            item = item.bits
        return item in self._maskset

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetFamily):
            return NotImplemented
        return self.universe == other.universe and self.masks == other.masks

    def __hash__(self) -> int:
        return hash((self.universe.size, self.masks))

    def __le__(self, other: 'SetFamily') -> bool:
        _check_same(self.universe, other.universe)
        return self._maskset <= other._maskset

    def __lt__(self, other: 'SetFamily') -> bool:
        return self <= other and self != other

    def union_all(self) -> int:
        bits = 0
        for m in self.masks:
            bits |= m
        return bits

    def with_member(self, mask: int) -> 'SetFamily':
        return SetFamily._trusted(self.universe, self._maskset | {mask})

    def require_nonempty(self, what: str = 'family'):
        if not self.masks:
            raise EmptyFamilyError(f"{what} must be non-empty")

    def to_lists(self) -> List[List[int]]:
        return [list(iter_bits(m)) for m in self.masks]

    def __str__(self) -> str:
        return '{' + ','.join(str(Subset(self.universe, m)) for m in self.masks) + '}'

    def __repr__(self) -> str:
        return f"SetFamily({self})"


def check_same_universe(*items):
    """校验若干子集/集族位于同一全集"""
    first = items[0].universe
    for item in items[1:]:
        _check_same(first, item.universe)


def make_family(u: Universe, subsets: Iterable[Subset]) -> SetFamily:
    """创建规范化集族，允许为空"""
    masks = []
    for s in subsets:
        _check_same(u, s.universe)
        masks.append(s.bits)
    return SetFamily._trusted(u, masks)


def family_relations(f: SetFamily, g: SetFamily) -> str:
    """外延比较两个集族：equal / subfamily / superfamily / incomparable"""
    _check_same(f.universe, g.universe)
    a, b = f.maskset, g.maskset
    if a == b:
        return 'equal'
    if a < b:
        return 'subfamily'
    if a > b:
        return 'superfamily'
    return 'incomparable'


def complement_family(f: SetFamily) -> SetFamily:
    """{X\\S : S ∈ f}"""
    f.require_nonempty()
    full = f.universe.full_mask
    return SetFamily._trusted(f.universe, (full & ~m for m in f.masks))

"""
脚本语言模块
词法/语法分析（带行列号的错误）、规范化打印、表达式求值与脚本执行

语法要点：每行一条语句，# 之后为注释；表达式中 v（并联）优先级高于 *（星运算），
二者均为左结合；~ 与后缀 + {集合} 作用于原子。
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from modules.algebra import (
    MATERIALIZE_LIMIT, PrincipalIdeal, adjoin, ideal_from_family, ideal_star, join,
    join_ideals, semigroup_closure, star, star_ideal,
)
from modules.core import (
    FamilyAlgebraError, GroupError, ScriptError, SetFamily, Subset, Universe,
    complement_family, make_universe,
)
from modules.laws import (
    MAX_EXPLORE_UNIVERSE, SearchConfig, UnknownLawError, explore_q213, get_law, search,
)
from modules.models import (
    MODEL_CHECKS, TRANSVERSAL_CEILING, GroupModel, Subgroup, WeightedMeasure, make_measure,
    parse_group, run_model_check, subgroup_generated,
)
from modules.report import Report

logger = logging.getLogger(__name__)

KEYWORDS = ('universe', 'set', 'family', 'group', 'subgroup', 'weights', 'eval', 'check', 'explore', 'model')
RESERVED = set(KEYWORDS) | {'S', 'I', 'v'}
CHECK_OPTIONS = ('universe', 'maxfam', 'trials', 'seed', 'workers')
MODEL_OPTIONS = ('subgroup', 'other')

_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_'\-]*)
  | (?P<punct>[{}\[\](),=<>*+~/])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize_line(text: str, line: int) -> List[Token]:
    """切分一行；# 之后为注释"""
    cut = text.find('#')
    if cut >= 0:
        text = text[:cut]
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScriptError(f"unexpected character {text[pos]!r}", line, pos + 1)
        if m.lastgroup != 'ws':
            kind = 'punct' if m.lastgroup == 'punct' else m.lastgroup
            tokens.append(Token(kind, m.group(), line, pos + 1))
        pos = m.end()
    return tokens


# ---------------------------------------------------------------------------
# 语法树
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    line: int = field(default=0, compare=False, repr=False)
    col: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class NameRef(Node):
    name: str = ''
    kind: str = 'family'


@dataclass(frozen=True)
class SetLit(Node):
    labels: Tuple[str, ...] = ()


@dataclass(frozen=True)
class FamLit(Node):
    items: Tuple[Node, ...] = ()


@dataclass(frozen=True)
class Closure(Node):
    arg: Node = None


@dataclass(frozen=True)
class IdealOf(Node):
    arg: Node = None


@dataclass(frozen=True)
class Complement(Node):
    arg: Node = None


@dataclass(frozen=True)
class Adjoin(Node):
    arg: Node = None
    item: Node = None


@dataclass(frozen=True)
class Join(Node):
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class Star(Node):
    left: Node = None
    right: Node = None


@dataclass(frozen=True)
class Statement:
    line: int = field(default=0, compare=False, repr=False)
    source: str = field(default='', compare=False, repr=False)


@dataclass(frozen=True)
class UniverseDecl(Statement):
    labels: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SetDecl(Statement):
    name: str = ''
    value: SetLit = None


@dataclass(frozen=True)
class FamilyDecl(Statement):
    name: str = ''
    expr: Node = None


@dataclass(frozen=True)
class GroupDecl(Statement):
    spec: str = ''


@dataclass(frozen=True)
class SubgroupDecl(Statement):
    name: str = ''
    generators: Tuple[str, ...] = ()


@dataclass(frozen=True)
class WeightsDecl(Statement):
    weights: Tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class EvalStmt(Statement):
    expr: Node = None


@dataclass(frozen=True)
class CheckStmt(Statement):
    law_id: str = ''
    mode: str = 'exhaustive'
    options: Tuple[Tuple[str, int], ...] = ()


@dataclass(frozen=True)
class ExploreStmt(Statement):
    universe_size: int = 3
    max_members: int = 2
    closed: bool = False


@dataclass(frozen=True)
class ModelStmt(Statement):
    check: str = ''
    options: Tuple[Tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...] = ()

    def render(self) -> str:
        return '\n'.join(render_statement(s) for s in self.statements) + '\n'


# ---------------------------------------------------------------------------
# 规范化打印
# ---------------------------------------------------------------------------

def _render_set(labels: Tuple[str, ...]) -> str:
    return '{' + ','.join(labels) + '}'


def render_expr(node: Node) -> str:
    if isinstance(node, NameRef):
        return node.name
    if isinstance(node, SetLit):
        return _render_set(node.labels)
    if isinstance(node, FamLit):
        return '[' + ', '.join(render_expr(i) for i in node.items) + ']'
    if isinstance(node, Closure):
        return f'S({render_expr(node.arg)})'
    if isinstance(node, IdealOf):
        return f'I({render_expr(node.arg)})'
    if isinstance(node, Complement):
        inner = render_expr(node.arg)
        return f'~({inner})' if isinstance(node.arg, (Join, Star)) else f'~{inner}'
    if isinstance(node, Adjoin):
        inner = render_expr(node.arg)
        if isinstance(node.arg, (Join, Star, Complement)):
            inner = f'({inner})'
        return f'{inner} + {render_expr(node.item)}'
    if isinstance(node, Join):
        left = render_expr(node.left)
        right = render_expr(node.right)
        if isinstance(node.left, Star):
            left = f'({left})'
        if isinstance(node.right, (Join, Star)):
            right = f'({right})'
        return f'{left} v {right}'
    if isinstance(node, Star):
        right = render_expr(node.right)
        if isinstance(node.right, Star):
            right = f'({right})'
        return f'{render_expr(node.left)} * {right}'
    raise TypeError(f"not an expression node: {node!r}")


def render_statement(s: Statement) -> str:
    if isinstance(s, UniverseDecl):
        if s.labels == tuple(str(i) for i in range(len(s.labels))):
            return f'universe {len(s.labels)}'
        return 'universe ' + ' '.join(s.labels)
    if isinstance(s, SetDecl):
        return f'set {s.name} = {render_expr(s.value)}'
    if isinstance(s, FamilyDecl):
        return f'family {s.name} = {render_expr(s.expr)}'
    if isinstance(s, GroupDecl):
        return f'group {s.spec}'
    if isinstance(s, SubgroupDecl):
        return f'subgroup {s.name} = <' + ','.join(s.generators) + '>'
    if isinstance(s, WeightsDecl):
        return 'weights ' + ' '.join(str(w) for w in s.weights)
    if isinstance(s, EvalStmt):
        return f'eval {render_expr(s.expr)}'
    if isinstance(s, CheckStmt):
        opts = ''.join(f' {k}={v}' for k, v in s.options)
        return f'check {s.law_id} {s.mode}{opts}'
    if isinstance(s, ExploreStmt):
        tail = ' closed' if s.closed else ''
        return f'explore q213 universe={s.universe_size} maxfam={s.max_members}{tail}'
    if isinstance(s, ModelStmt):
        return f'model {s.check}' + ''.join(f' {k}={v}' for k, v in s.options)
    raise TypeError(f"not a statement: {s!r}")


# ---------------------------------------------------------------------------
# 语法分析
# ---------------------------------------------------------------------------

class Parser:
    """逐行解析；声明先于使用，名称种类在解析期确定"""

    def __init__(self):
        self.universe: Optional[Universe] = None
        self.group: Optional[GroupModel] = None
        self.names: Dict[str, str] = {}
        self.tokens: List[Token] = []
        self.pos = 0
        self.line = 0

    # -- 记号游标 --

    def _peek(self, offset: int = 0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def _at(self, text: str) -> bool:
        tok = self._peek()
        return tok is not None and tok.kind == 'punct' and tok.text == text

    def _end_col(self) -> int:
        if self.tokens:
            last = self.tokens[-1]
            return last.col + len(last.text)
        return 1

    def _advance(self) -> Token:
        tok = self._peek()
        if tok is None:
            raise ScriptError("unexpected end of line", self.line, self._end_col())
        self.pos += 1
        return tok

    def _expect(self, text: str) -> Token:
        tok = self._peek()
        if tok is None or tok.text != text:
            where = tok.col if tok else self._end_col()
            found = repr(tok.text) if tok else 'end of line'
            raise ScriptError(f"expected {text!r}, found {found}", self.line, where)
        self.pos += 1
        return tok

    def _expect_kind(self, kind: str, what: str) -> Token:
        tok = self._peek()
        if tok is None or tok.kind != kind:
            where = tok.col if tok else self._end_col()
            raise ScriptError(f"expected {what}", self.line, where)
        self.pos += 1
        return tok

    def _done(self):
        tok = self._peek()
        if tok is not None:
            raise ScriptError(f"unexpected {tok.text!r}", tok.line, tok.col)

    # -- 入口 --

    def parse(self, text: str) -> Script:
        statements = []
        for lineno, raw in enumerate(text.lstrip('\ufeff').splitlines(), 1):
            self.tokens = tokenize_line(raw, lineno)
            self.pos = 0
            self.line = lineno
            if not self.tokens:
                continue
            source = raw.split('#', 1)[0].strip()
            statements.append(self._statement(source))
        return Script(tuple(statements))

    def _statement(self, source: str) -> Statement:
        head = self._advance()
        handler = {
            'universe': self._universe, 'set': self._set, 'family': self._family,
            'group': self._group, 'subgroup': self._subgroup, 'weights': self._weights,
            'eval': self._eval, 'check': self._check, 'explore': self._explore, 'model': self._model,
        }.get(head.text if head.kind == 'name' else None)
        if handler is None:
            raise ScriptError(f"unknown statement {head.text!r}", head.line, head.col)
        stmt = handler(head, source)
        self._done()
        return stmt

    # -- 声明 --

    def _require_universe(self, tok: Token):
        if self.universe is None:
            raise ScriptError("no universe or group declared", tok.line, tok.col)

    def _declare(self, tok: Token, kind: str):
        name = tok.text
        if name in RESERVED:
            raise ScriptError(f"{name!r} is reserved", tok.line, tok.col)
        if name in self.names:
            raise ScriptError(f"name {name} already declared", tok.line, tok.col)
        if self.universe is not None and name in self.universe.labels:
            raise ScriptError(f"name {name} clashes with an element label", tok.line, tok.col)
        self.names[name] = kind

    def _universe(self, head: Token, source: str) -> UniverseDecl:
        if self.universe is not None:
            raise ScriptError("a universe or group is already active", head.line, head.col)
        toks = []
        while self._peek() is not None:
            toks.append(self._advance())
        if not toks:
            raise ScriptError("universe needs a size or element names", head.line, self._end_col())
        if any(t.kind == 'punct' for t in toks):
            bad = next(t for t in toks if t.kind == 'punct')
            raise ScriptError(f"unexpected {bad.text!r}", bad.line, bad.col)
        try:
            if len(toks) == 1 and toks[0].kind == 'int':
                self.universe = make_universe(int(toks[0].text))
            else:
                self.universe = make_universe(len(toks), [t.text for t in toks])
        except FamilyAlgebraError as e:
            raise ScriptError(str(e), head.line, toks[0].col) from None
        clash = [t for t in toks if t.text in RESERVED]
        if clash:
            raise ScriptError(f"{clash[0].text!r} is reserved", clash[0].line, clash[0].col)
        return UniverseDecl(head.line, source, self.universe.labels)

    def _group(self, head: Token, source: str) -> GroupDecl:
        if self.universe is not None:
            raise ScriptError("a universe or group is already active", head.line, head.col)
        tok = self._expect_kind('name', 'a group such as Z6 or Z2xZ2')
        try:
            self.group = parse_group(tok.text)
        except GroupError as e:
            raise ScriptError(str(e), tok.line, tok.col) from None
        self.universe = self.group.universe
        return GroupDecl(head.line, source, self.group.name)

    def _set(self, head: Token, source: str) -> SetDecl:
        self._require_universe(head)
        name = self._expect_kind('name', 'a set name')
        self._expect('=')
        value = self._setlit()
        self._declare(name, 'set')
        return SetDecl(head.line, source, name.text, value)

    def _family(self, head: Token, source: str) -> FamilyDecl:
        self._require_universe(head)
        name = self._expect_kind('name', 'a family name')
        self._expect('=')
        expr = self._expr()
        self._declare(name, 'family')
        return FamilyDecl(head.line, source, name.text, expr)

    def _subgroup(self, head: Token, source: str) -> SubgroupDecl:
        if self.group is None:
            raise ScriptError("subgroup needs a declared group", head.line, head.col)
        name = self._expect_kind('name', 'a subgroup name')
        self._expect('=')
        self._expect('<')
        gens = []
        if not self._at('>'):
            while True:
                gens.append(self._group_element())
                if self._at(','):
                    self._advance()
                    continue
                break
        self._expect('>')
        self._declare(name, 'subgroup')
        return SubgroupDecl(head.line, source, name.text, tuple(gens))

    def _group_element(self) -> str:
        tok = self._peek()
        if tok is None:
            raise ScriptError("expected a group element", self.line, self._end_col())
        text = self._element_text()
        try:
            index = self.group.parse_element(text)
        except GroupError as e:
            raise ScriptError(str(e), tok.line, tok.col) from None
        return self.universe.label_of(index)

    def _weights(self, head: Token, source: str) -> WeightsDecl:
        self._require_universe(head)
        weights = []
        while self._peek() is not None:
            if self._at(','):
                self._advance()
                continue
            num = self._expect_kind('int', 'a non-negative rational weight')
            value = Fraction(int(num.text))
            if self._at('/'):
                self._advance()
                den = self._expect_kind('int', 'a denominator')
                if int(den.text) == 0:
                    raise ScriptError("zero denominator", den.line, den.col)
                value = Fraction(int(num.text), int(den.text))
            weights.append(value)
        if len(weights) != self.universe.size:
            raise ScriptError(f"expected {self.universe.size} weights, got {len(weights)}", head.line, head.col)
        return WeightsDecl(head.line, source, tuple(weights))

    # -- 执行语句 --

    def _eval(self, head: Token, source: str) -> EvalStmt:
        expr = self._expr()
        self._require_universe(head)
        return EvalStmt(head.line, source, expr)

    def _options(self, allowed: Tuple[str, ...]) -> Dict[str, Token]:
        opts = {}
        while self._peek() is not None and self._peek(1) is not None and self._peek(1).text == '=':
            key = self._advance()
            self._advance()
            if key.text not in allowed:
                raise ScriptError(f"unknown option {key.text!r}", key.line, key.col)
            opts[key.text] = self._advance()
        return opts

    def _int_option(self, tok: Token) -> int:
        if tok.kind != 'int':
            raise ScriptError(f"expected an integer, found {tok.text!r}", tok.line, tok.col)
        return int(tok.text)

    def _check(self, head: Token, source: str) -> CheckStmt:
        law_tok = self._expect_kind('name', 'a law id')
        try:
            law = get_law(law_tok.text)
        except UnknownLawError as e:
            raise ScriptError(str(e), law_tok.line, law_tok.col) from None
        mode = 'exhaustive'
        tok = self._peek()
        if tok is not None and tok.text in ('exhaustive', 'random'):
            mode = self._advance().text
        opts = self._options(CHECK_OPTIONS)
        options = tuple((k, self._int_option(opts[k])) for k in CHECK_OPTIONS if k in opts)
        return CheckStmt(head.line, source, law.id, mode, options)

    def _explore(self, head: Token, source: str) -> ExploreStmt:
        what = self._expect_kind('name', "an exploration name ('q213')")
        if what.text != 'q213':
            raise ScriptError(f"unknown exploration {what.text!r}", what.line, what.col)
        opts = self._options(('universe', 'maxfam'))
        closed = False
        tok = self._peek()
        if tok is not None and tok.text == 'closed':
            self._advance()
            closed = True
        size = self._int_option(opts['universe']) if 'universe' in opts else 3
        maxfam = self._int_option(opts['maxfam']) if 'maxfam' in opts else 2
        if not 1 <= size <= MAX_EXPLORE_UNIVERSE:
            where = opts['universe'] if 'universe' in opts else what
            raise ScriptError(f"exploration supports universes up to {MAX_EXPLORE_UNIVERSE}", where.line, where.col)
        return ExploreStmt(head.line, source, size, maxfam, closed)

    def _model(self, head: Token, source: str) -> ModelStmt:
        if self.group is None:
            raise ScriptError("model needs a declared group", head.line, head.col)
        check = self._expect_kind('name', 'a model check')
        if check.text not in MODEL_CHECKS:
            raise ScriptError(f"unknown model check {check.text!r}", check.line, check.col)
        opts = self._options(MODEL_OPTIONS)
        for tok in opts.values():
            if self.names.get(tok.text) != 'subgroup':
                raise ScriptError(f"unknown subgroup {tok.text}", tok.line, tok.col)
        options = tuple((k, opts[k].text) for k in MODEL_OPTIONS if k in opts)
        return ModelStmt(head.line, source, check.text, options)

    # -- 表达式 --

    def _expr(self) -> Node:
        node = self._term()
        while self._at('*'):
            op = self._advance()
            node = Star(op.line, op.col, node, self._term())
        return node

    def _term(self) -> Node:
        node = self._atom()
        while True:
            tok = self._peek()
            if tok is None or tok.kind != 'name' or tok.text != 'v':
                return node
            self._advance()
            node = Join(tok.line, tok.col, node, self._atom())

    def _atom(self) -> Node:
        node = self._primary()
        while self._at('+'):
            op = self._advance()
            node = Adjoin(op.line, op.col, node, self._set_operand())
        return node

    def _primary(self) -> Node:
        tok = self._peek()
        if tok is None:
            raise ScriptError("expected an expression", self.line, self._end_col())
        if tok.kind == 'punct':
            if tok.text == '~':
                self._advance()
                return Complement(tok.line, tok.col, self._atom())
            if tok.text == '(':
                self._advance()
                inner = self._expr()
                self._expect(')')
                return inner
            if tok.text == '[':
                return self._famlit()
            if tok.text == '{':
                return self._brace()
            raise ScriptError(f"unexpected {tok.text!r}", tok.line, tok.col)
        nxt = self._peek(1)
        if tok.kind == 'name' and tok.text in ('S', 'I') and nxt is not None and nxt.text == '(':
            self._advance()
            self._advance()
            inner = self._expr()
            self._expect(')')
            cls = Closure if tok.text == 'S' else IdealOf
            return cls(tok.line, tok.col, inner)
        if tok.kind == 'name' and tok.text in self.names:
            self._advance()
            return NameRef(tok.line, tok.col, tok.text, self.names[tok.text])
        raise ScriptError(f"unknown identifier {tok.text}", tok.line, tok.col)

    def _element_text(self) -> str:
        tok = self._advance()
        if tok.kind in ('name', 'int'):
            return tok.text
        if tok.text == '(':
            parts = [self._expect_kind('int', 'a tuple component').text]
            while self._at(','):
                self._advance()
                parts.append(self._expect_kind('int', 'a tuple component').text)
            self._expect(')')
            return '(' + ','.join(parts) + ')'
        raise ScriptError(f"expected an element, found {tok.text!r}", tok.line, tok.col)

    def _element(self) -> str:
        tok = self._peek()
        if self.universe is None and tok is not None:
            self._require_universe(tok)
        text = self._element_text()
        if text in self.universe.labels:
            return text
        if text.isdigit() and int(text) < self.universe.size:
            return self.universe.label_of(int(text))
        raise ScriptError(f"unknown element {text}", tok.line, tok.col)

    def _canonical_labels(self, labels: List[str]) -> Tuple[str, ...]:
        indices = sorted({self.universe.index_of(l) for l in labels})
        return tuple(self.universe.label_of(i) for i in indices)

    def _setlit(self) -> SetLit:
        open_tok = self._expect('{')
        labels = []
        if not self._at('}'):
            while True:
                labels.append(self._element())
                if self._at(','):
                    self._advance()
                    continue
                break
        self._expect('}')
        return SetLit(open_tok.line, open_tok.col, self._canonical_labels(labels))

    def _set_operand(self) -> Node:
        """+ 之后：集合字面量或集合名"""
        tok = self._peek()
        if tok is not None and tok.text == '{':
            return self._setlit()
        if tok is not None and self.names.get(tok.text) in ('set', 'subgroup'):
            self._advance()
            return NameRef(tok.line, tok.col, tok.text, self.names[tok.text])
        where = tok.col if tok else self._end_col()
        raise ScriptError("expected a set after '+'", self.line, where)

    def _famlit(self) -> FamLit:
        open_tok = self._expect('[')
        items = []
        if not self._at(']'):
            while True:
                items.append(self._set_operand())
                if self._at(','):
                    self._advance()
                    continue
                break
        self._expect(']')
        return FamLit(open_tok.line, open_tok.col, tuple(items))

    def _brace(self) -> Node:
        """{...}：元素组成集合字面量，集合组成集族字面量"""
        open_tok = self._expect('{')
        sets, elems = [], []
        if not self._at('}'):
            while True:
                tok = self._peek()
                if tok is not None and tok.text == '{':
                    sets.append(self._setlit())
                elif tok is not None and self.names.get(tok.text) in ('set', 'subgroup'):
                    self._advance()
                    sets.append(NameRef(tok.line, tok.col, tok.text, self.names[tok.text]))
                else:
                    elems.append(self._element())
                if sets and elems:
                    raise ScriptError("cannot mix elements and sets in one literal", open_tok.line, open_tok.col)
                if self._at(','):
                    self._advance()
                    continue
                break
        self._expect('}')
        if sets:
            return FamLit(open_tok.line, open_tok.col, tuple(sets))
        return SetLit(open_tok.line, open_tok.col, self._canonical_labels(elems))


def parse_script(text: str) -> Script:
    return Parser().parse(text)


# ---------------------------------------------------------------------------
# 求值
# ---------------------------------------------------------------------------

Value = Union[SetFamily, PrincipalIdeal]


class Evaluator:
    """表达式求值环境"""

    def __init__(self, materialize_limit: int = MATERIALIZE_LIMIT):
        self.universe: Optional[Universe] = None
        self.group: Optional[GroupModel] = None
        self.sets: Dict[str, Subset] = {}
        self.values: Dict[str, Value] = {}
        self.subgroups: Dict[str, Subgroup] = {}
        self.weights: Optional[WeightedMeasure] = None
        self.materialize_limit = materialize_limit
        self.warnings: List[str] = []

    def subset(self, labels: Tuple[str, ...]) -> Subset:
        bits = 0
        for label in labels:
            bits |= 1 << self.universe.index_of(label)
        return Subset(self.universe, bits)

    def _as_subset(self, node: Node) -> Subset:
        if isinstance(node, SetLit):
            return self.subset(node.labels)
        if node.kind == 'subgroup':
            return self.subgroups[node.name].elements
        return self.sets[node.name]

    def _family(self, value: Value) -> SetFamily:
        if isinstance(value, PrincipalIdeal):
            return value.materialize(self.materialize_limit)
        return value

    def eval(self, node: Node) -> Value:
        try:
            return self._eval(node)
        except ScriptError:
            raise
        except FamilyAlgebraError as e:
            raise ScriptError(str(e), node.line, node.col) from None

    def _eval(self, node: Node) -> Value:
        if isinstance(node, NameRef):
            if node.kind == 'family':
                return self.values[node.name]
            return SetFamily._trusted(self.universe, [self._as_subset(node).bits])
        if isinstance(node, SetLit):
            return SetFamily._trusted(self.universe, [self.subset(node.labels).bits])
        if isinstance(node, FamLit):
            return SetFamily._trusted(self.universe, [self._as_subset(i).bits for i in node.items])
        if isinstance(node, Closure):
            return semigroup_closure(self._family(self.eval(node.arg)))
        if isinstance(node, IdealOf):
            inner = self.eval(node.arg)
            if isinstance(inner, PrincipalIdeal):
                msg = f"redundant I(...) applied to an ideal at {node.line}:{node.col}"
                logger.warning(msg)
                self.warnings.append(msg)
                return inner
            return ideal_from_family(inner)
        if isinstance(node, Complement):
            return complement_family(self._family(self.eval(node.arg)))
        if isinstance(node, Adjoin):
            return adjoin(self._family(self.eval(node.arg)), self._as_subset(node.item))
        if isinstance(node, Join):
            left, right = self.eval(node.left), self.eval(node.right)
            if isinstance(left, PrincipalIdeal) and isinstance(right, PrincipalIdeal):
                return join_ideals(left, right)
            return join(self._family(left), self._family(right))
        if isinstance(node, Star):
            left, right = self.eval(node.left), self.eval(node.right)
            if isinstance(right, PrincipalIdeal):
                return star_ideal(self._family(left), right).materialize(self.materialize_limit)
            if isinstance(left, PrincipalIdeal):
                return ideal_star(left, right).materialize(self.materialize_limit)
            return star(left, right)
        raise TypeError(f"not an expression node: {node!r}")


def eval_expr(ctx: Evaluator, expr: Node) -> Value:
    return ctx.eval(expr)


def render_value(value: Value) -> str:
    return str(value)


# ---------------------------------------------------------------------------
# 执行
# ---------------------------------------------------------------------------

class ScriptRunner:
    """按顺序执行脚本语句，汇总到 Report"""

    def __init__(self, config: Optional[SearchConfig] = None, seed: int = 0,
                 transversal_ceiling: int = TRANSVERSAL_CEILING):
        self.config = config or SearchConfig()
        self.seed = seed
        self.transversal_ceiling = transversal_ceiling
        self.ctx = Evaluator()
        self.explorations = []

    def run(self, script: Union[Script, str]) -> Report:
        if isinstance(script, str):
            script = parse_script(script)
        report = Report()
        for stmt in script.statements:
            self._run(stmt, report)
        return report

    def _run(self, stmt: Statement, report: Report):
        ctx = self.ctx
        text = render_statement(stmt)
        if isinstance(stmt, UniverseDecl):
            ctx.universe = make_universe(len(stmt.labels), stmt.labels)
        elif isinstance(stmt, GroupDecl):
            ctx.group = parse_group(stmt.spec)
            ctx.universe = ctx.group.universe
        elif isinstance(stmt, SetDecl):
            ctx.sets[stmt.name] = ctx.subset(stmt.value.labels)
        elif isinstance(stmt, FamilyDecl):
            ctx.values[stmt.name] = ctx.eval(stmt.expr)
        elif isinstance(stmt, SubgroupDecl):
            gens = [ctx.universe.index_of(g) for g in stmt.generators]
            ctx.subgroups[stmt.name] = subgroup_generated(ctx.group, gens)
        elif isinstance(stmt, WeightsDecl):
            ctx.weights = make_measure(ctx.universe, stmt.weights)
        elif isinstance(stmt, EvalStmt):
            ctx.warnings = []
            value = ctx.eval(stmt.expr)
            data = {
                'value': render_value(value),
                'type': 'ideal' if isinstance(value, PrincipalIdeal) else 'family',
                'members': value.size() if isinstance(value, PrincipalIdeal) else len(value),
            }
            if ctx.warnings:
                data['warnings'] = list(ctx.warnings)
            report.add('eval', text, True, data)
        elif isinstance(stmt, CheckStmt):
            opts = dict(stmt.options)
            config = SearchConfig(self.config.ceiling, opts.get('workers', self.config.workers),
                                  self.config.chunk_size)
            result = search(get_law(stmt.law_id), stmt.mode, opts.get('universe'), opts.get('maxfam'),
                            trials=opts.get('trials', 1000), seed=opts.get('seed', self.seed), config=config)
            report.add('check', text, result.expectation_met, result.to_dict())
        elif isinstance(stmt, ExploreStmt):
            result = explore_q213(stmt.universe_size, stmt.max_members, stmt.closed, self.config)
            self.explorations.append(result)
            report.add('explore', text, result.closed_unequal == 0, result.to_dict())
        elif isinstance(stmt, ModelStmt):
            opts = dict(stmt.options)
            subgroup = ctx.subgroups.get(opts['subgroup']) if 'subgroup' in opts else self._last_subgroup()
            other = ctx.subgroups.get(opts['other']) if 'other' in opts else None
            result = run_model_check(stmt.check, ctx.group, subgroup, other, ctx.weights,
                                     self.transversal_ceiling, self.seed)
            report.add('model', text, result.passed, result.to_dict())

    def _last_subgroup(self) -> Optional[Subgroup]:
        if not self.ctx.subgroups:
            return None
        return list(self.ctx.subgroups.values())[-1]


def run_script(text: str, config: Optional[SearchConfig] = None, seed: int = 0) -> Report:
    return ScriptRunner(config, seed).run(text)

"""
报告模块
按语句汇总结果，输出人类可读文本或结构化 JSON，并提供 pandas 表格视图
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List

import pandas as pd

from modules.utils import format_number

logger = logging.getLogger(__name__)

SCHEMA = 'famalg-report/1'


@dataclass
class Section:
    """一条语句的结果；ok 表示期望是否满足"""
    kind: str
    statement: str
    ok: bool
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'statement': self.statement, 'ok': self.ok, 'data': self.data}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'Section':
        return cls(d['kind'], d['statement'], d['ok'], d.get('data', {}))


@dataclass
class Report:
    sections: List[Section] = field(default_factory=list)
    schema: str = SCHEMA

    def add(self, kind: str, statement: str, ok: bool, data: Dict[str, Any] = None) -> Section:
        section = Section(kind, statement, ok, data or {})
        self.sections.append(section)
        return section

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.sections)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': self.schema,
            'ok': self.ok,
            'sections': [s.to_dict() for s in self.sections],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> 'Report':
        d = json.loads(text)
        if d.get('schema') != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls([Section.from_dict(s) for s in d['sections']], d['schema'])

    def render_text(self) -> str:
        lines = []
        for s in self.sections:
            mark = 'ok ' if s.ok else 'FAIL'
            lines.append(f"[{mark}] {s.kind}: {s.statement}")
            lines.extend('    ' + line for line in _describe(s))
        lines.append('')
        lines.append('all expectations met' if self.ok else 'expectation violated')
        return '\n'.join(lines)


def _describe(s: Section) -> List[str]:
    d = s.data
    if s.kind == 'eval':
        return [f"= {d['value']}"]
    if s.kind == 'check':
        head = f"{d['outcome']} after {format_number(d['cases'])} cases ({d['mode']}, kind={d['kind']})"
        out = [head]
        if d.get('witness'):
            out.extend(f"{role} = {value}" for role, value in d['witness'].items())
        return out
    if s.kind == 'explore':
        out = [f"{format_number(d['cases'])} cases"]
        out.extend(f"{cls}: {count}" for cls, count in d['tally'].items())
        out.append(f"union-closed operands: {d['closed_cases']} cases, {d['closed_unequal']} unequal")
        return out
    if s.kind == 'model':
        out = [f"{'pass' if d['passed'] else 'fail'} over {d['cases']} cases"]
        out.extend(f"{k}: {v}" for k, v in d.get('details', {}).items())
        return out
    if s.kind == 'fixture':
        return [f"{'ok ' if c['passed'] else 'FAIL'} {c['check']}" for c in d.get('checks', [])]
    return [json.dumps(d, sort_keys=True, ensure_ascii=False)] if d else []


def laws_frame(laws: Iterable) -> pd.DataFrame:
    """法则注册表的表格视图"""
    rows = [{
        'id': law.id,
        'kind': law.kind,
        'roles': ', '.join(f'{name}:{role}' for name, role in law.roles),
        'statement': law.statement,
        'anchor': law.anchor,
        'default_bound': f'{law.default_universe},{law.default_members}',
    } for law in laws]
    return pd.DataFrame(rows, columns=['id', 'kind', 'roles', 'statement', 'anchor', 'default_bound'])


def tally_frame(tally: Dict[str, int]) -> pd.DataFrame:
    """探索分类计数的表格视图，含占比"""
    df = pd.DataFrame({'class': list(tally.keys()), 'cases': list(tally.values())})
    total = df['cases'].sum()
    df['share'] = df['cases'] / total if total else 0.0
    return df


def export_csv(df: pd.DataFrame, path: str) -> str:
    df.to_csv(path, index=False, encoding='utf-8')
    logger.info(f"表格已导出至: {path}")
    return path

import json

import pytest

from modules.laws import builtin_laws, exhaustive_search, get_law
from modules.report import SCHEMA, Report, export_csv, laws_frame, tally_frame


def _sample_report() -> Report:
    report = Report()
    report.add('eval', 'eval S(FA v FB)', True, {'value': '{{a,b,c},{a,b,c,d}}', 'type': 'family', 'members': 2})
    report.add('check', 'check N1 exhaustive', True, exhaustive_search(get_law('N1'), 2, 1).to_dict())
    report.add('explore', 'explore q213 universe=1 maxfam=1', True, {
        'cases': 8, 'tally': {'equal': 8, 'left⊂right': 0, 'right⊂left': 0, 'incomparable': 0},
        'closed_cases': 8, 'closed_unequal': 0,
    })
    return report


def test_json_round_trip():
    report = _sample_report()
    text = report.to_json()
    parsed = json.loads(text)
    assert parsed['schema'] == SCHEMA
    assert parsed['ok'] is True
    again = Report.from_json(text)
    assert again == report
    assert again.to_json() == text


def test_from_json_rejects_other_schema():
    with pytest.raises(ValueError):
        Report.from_json(json.dumps({'schema': 'other/1', 'sections': []}))


def test_ok_and_exit_code():
    report = _sample_report()
    assert report.exit_code == 0
    report.add('check', 'check N1 exhaustive universe=1 maxfam=1', False, {})
    assert not report.ok
    assert report.exit_code == 1


def test_render_text():
    text = _sample_report().render_text()
    assert '[ok ] eval: eval S(FA v FB)' in text
    assert '= {{a,b,c},{a,b,c,d}}' in text
    assert 'witness after 7 cases (exhaustive, kind=non-law)' in text
    assert 'A = [[0]]' in text
    assert 'union-closed operands: 8 cases, 0 unequal' in text
    assert text.endswith('all expectations met')
    failing = Report()
    failing.add('fixture', 'demo', False, {'checks': [{'check': 'x', 'passed': False}]})
    rendered = failing.render_text()
    assert '[FAIL] fixture: demo' in rendered
    assert rendered.endswith('expectation violated')


def test_laws_frame(tmp_path):
    df = laws_frame(builtin_laws())
    assert list(df.columns) == ['id', 'kind', 'roles', 'statement', 'anchor', 'default_bound']
    assert len(df) == len(builtin_laws())
    assert df.loc[df['id'] == 'N1', 'default_bound'].item() == '2,1'
    path = export_csv(df, str(tmp_path / 'laws.csv'))
    assert (tmp_path / 'laws.csv').read_text(encoding='utf-8').startswith('id,kind,roles')
    assert path.endswith('laws.csv')


def test_tally_frame():
    df = tally_frame({'equal': 6, 'incomparable': 2})
    assert df['cases'].tolist() == [6, 2]
    assert df['share'].tolist() == [0.75, 0.25]

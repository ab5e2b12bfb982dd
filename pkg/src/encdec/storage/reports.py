import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd
from jinja2 import Environment, StrictUndefined

from ..models.analysis import CausalReport, GroupDecision, RelevanceMatrix

logger = logging.getLogger(__name__)

_TEXT_TEMPLATE = """\
Encoding/decoding causal analysis ({{ report.paradigm.value }} paradigm, condition {{ report.condition_symbol }})
schema {{ report.schema_version }}
{% for side, kind in report.model_types.items() %}  {{ side }}: {{ kind }}
{% endfor %}
{% for title, table in tables %}
{{ title }}
{{ table }}
{% endfor %}
{% if chance %}
Decoding accuracy vs chance: {{ chance }}
{% endif %}
Partition
{% for label, members in quadrants %}  {{ label }}: {{ members }}
{% endfor %}
Statements
{% for s in report.statements %}  [{{ s.rule or '--' }}] ({{ s.model }}) {{ s.text }}
{% endfor %}
{% if report.combined %}
Combined inferences
{% for c in report.combined %}  {{ c.text }}
{% endfor %}{% endif %}
{% if report.warnings %}
Warnings
{% for w in report.warnings %}  {{ w }}
{% endfor %}{% endif %}
{% if report.notes %}
Notes
{% for n in report.notes %}  {{ n }}
{% endfor %}{% endif %}
Provenance
{{ provenance }}
"""

_environment = Environment(
    undefined=StrictUndefined, keep_trailing_newline=True, autoescape=False
)
_template = _environment.from_string(_TEXT_TEMPLATE)


def _fmt(value: float) -> str:
    return f'{value:.3g}' if value >= 1e-3 or value == 0 else f'{value:.2e}'


def matrix_table(
    matrix: RelevanceMatrix, decisions: Optional[List[GroupDecision]] = None
) -> str:
    """Subjects as rows, features as columns, with a trailing KSp row"""
    frame = matrix.to_frame().map(_fmt)
    if matrix.pe_star is not None:
        frame['PE*'] = [f'{v:.2f}' for v in matrix.pe_star]
    if decisions:
        ksp = {d.feature: _fmt(d.ks_p.value) for d in decisions}
        row = [ksp.get(f, '') for f in matrix.features]
        if matrix.pe_star is not None:
            row.append('')
        frame.loc['KSp'] = row
        verdicts = {d.feature: d.decision.value for d in decisions}
        frame.loc['decision'] = [verdicts.get(f, '') for f in matrix.features] + (
            [''] if matrix.pe_star is not None else []
        )
    return frame.to_string()


def decisions_table(decisions: List[GroupDecision]) -> str:
    frame = pd.DataFrame(
        {
            'KS': [round(d.ks_statistic, 4) for d in decisions],
            'KSp': [_fmt(d.ks_p.value) for d in decisions],
            'decision': [d.decision.value for d in decisions],
        },
        index=pd.Index([d.feature for d in decisions], name='feature'),
    )
    return frame.to_string()


def _members(features: List[str]) -> str:
    return '{' + ', '.join(features) + '}'


def render_text(report: CausalReport) -> str:
    tables: List[Tuple[str, str]] = []
    if report.encoding is not None:
        tables.append(
            ('Encoding p-values', matrix_table(report.encoding, report.encoding_decisions))
        )
    if report.decoding is not None:
        tables.append(
            ('Decoding p-values', matrix_table(report.decoding, report.decoding_decisions))
        )

    chance = None
    if report.chance_test is not None:
        t = report.chance_test
        chance = f'W+={t.w_plus:g}, z={t.z:.4f}, p={t.p.value:.4e} (n={t.n}, mu0={t.mu0:g})'

    part = report.partition
    quadrants = [
        ('+enc +dec', _members(part.enc_dec)),
        ('+enc -dec', _members(part.enc_only)),
        ('-enc +dec', _members(part.dec_only)),
        ('-enc -dec', _members(part.neither)),
        ('indeterminate', _members(part.indeterminate)),
    ]
    return _template.render(
        report=report,
        tables=tables,
        chance=chance,
        quadrants=quadrants,
        provenance=json.dumps(report.provenance, indent=2, sort_keys=True),
    )


def render_json(report: CausalReport) -> str:
    return report.model_dump_json(indent=2) + '\n'


def write_report(report: CausalReport, output_dir: Path, name: str = 'report') -> Tuple[Path, Path]:
    """Write ``<name>.json`` and ``<name>.txt`` under ``output_dir``"""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    json_path = output_dir / f'{name}.json'
    text_path = output_dir / f'{name}.txt'
    json_path.write_text(render_json(report), encoding='utf-8')
    text_path.write_text(render_text(report), encoding='utf-8')
    logger.info(f'Report written to {json_path} and {text_path}')
    return json_path, text_path

"""DAG and SEM fixture text files

One edge per line (``a -> b``, chains ``a -> b -> c`` allowed), plus
``key: value`` directives::

    # chain with a hidden confounder
    S -> X1 -> X2
    H -> X2
    hidden: H
    condition: S
    paradigm: stimulus
    seed: 7
    mech: X1 = linear(S:1.5; sd=1.0)
    mech: X2 = quadratic(X1:0.8, H:1.0; sd=0.5)
    mech: S = bernoulli(p=0.5)

Nodes without a ``mech:`` line get default mechanisms drawn from ``seed``.
"""

import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..exceptions import ArgumentError, InputFormatError
from ..models.analysis import Paradigm
from ..models.data import (
    BernoulliRoot,
    LinearGaussian,
    LogisticSink,
    Mechanism,
    Quadratic,
    Sem,
)
from ..models.graph import Dag
from ..synth.sampler import build_sem

logger = logging.getLogger(__name__)

_NAME = re.compile(r'^[A-Za-z_][\w.]*$')
_MECH = re.compile(r'^(?P<node>[^=\s]+)\s*=\s*(?P<kind>\w+)\s*\((?P<args>.*)\)\s*$')
_DIRECTIVES = ('hidden', 'nodes', 'condition', 'paradigm', 'seed', 'mech')
_PARAMETERS = {'linear': {'sd'}, 'quadratic': {'sd'}, 'bernoulli': {'p'}, 'logistic': {'bias'}}


class Fixture(BaseModel):
    """A parsed fixture: the graph plus optional SEM settings"""

    model_config = ConfigDict(frozen=True)

    dag: Dag
    condition: Optional[str] = None
    paradigm: Paradigm = Paradigm.STIMULUS
    seed: int = Field(0, ge=0)
    mechanisms: Dict[str, Mechanism] = Field(default_factory=dict)
    source: Optional[Path] = None

    def to_sem(self, condition: Optional[str] = None) -> Sem:
        condition = condition or self.condition
        if condition is None:
            raise ArgumentError(
                f'{self.source or "fixture"}: no condition node (add "condition: <node>")'
            )
        try:
            return build_sem(
                self.dag, condition, self.paradigm, self.mechanisms, seed=self.seed
            )
        except ValidationError as e:
            raise ArgumentError(
                f'{self.source or "fixture"}: {e.errors()[0]["msg"]}'
            ) from e


def _check_name(name: str, path: Optional[Path], line: int) -> str:
    if not _NAME.match(name):
        raise InputFormatError(f'invalid node name {name!r}', path=path, line=line)
    return name


def _names(value: str, path: Optional[Path], line: int) -> List[str]:
    return [_check_name(n.strip(), path, line) for n in value.split(',') if n.strip()]


def _number(text: str, path: Optional[Path], line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputFormatError(f'expected a number, got {text!r}', path=path, line=line)


def parse_mechanism(text: str, path: Optional[Path] = None, line: int = 0) -> Tuple[str, Mechanism]:
    """``node = kind(parent:w, ...; key=value)`` to (node, Mechanism)"""
    match = _MECH.match(text.strip())
    if not match:
        raise InputFormatError(
            f'malformed mechanism {text.strip()!r}', path=path, line=line
        )
    node = _check_name(match['node'], path, line)
    kind = match['kind'].lower()
    weighted, _, options = match['args'].partition(';')

    weights: Dict[str, float] = {}
    params: Dict[str, float] = {}
    for part in (p.strip() for p in weighted.split(',')):
        if not part:
            continue
        if '=' in part:
            key, _, value = part.partition('=')
            params[key.strip()] = _number(value.strip(), path, line)
        elif ':' in part:
            parent, _, value = part.partition(':')
            weights[_check_name(parent.strip(), path, line)] = _number(
                value.strip(), path, line
            )
        else:
            raise InputFormatError(
                f'expected parent:weight or key=value, got {part!r}', path=path, line=line
            )
    for part in (p.strip() for p in options.split(',')):
        if part:
            key, sep, value = part.partition('=')
            if not sep:
                raise InputFormatError(
                    f'expected key=value, got {part!r}', path=path, line=line
                )
            params[key.strip()] = _number(value.strip(), path, line)

    if kind not in _PARAMETERS:
        raise InputFormatError(f'unknown mechanism kind {kind!r}', path=path, line=line)
    unknown = sorted(set(params) - _PARAMETERS[kind])
    if unknown:
        raise InputFormatError(
            f'{kind} takes no parameter {unknown[0]!r}', path=path, line=line
        )

    try:
        if kind == 'linear':
            return node, LinearGaussian(weights=weights, **params)
        if kind == 'quadratic':
            return node, Quadratic(weights=weights, **params)
        if kind == 'bernoulli':
            if weights:
                raise InputFormatError(
                    'a bernoulli root takes no parent weights', path=path, line=line
                )
            return node, BernoulliRoot(**params)
        return node, LogisticSink(weights=weights, **params)
    except ValidationError as e:
        raise InputFormatError(
            f'invalid {kind} mechanism for {node}: {e.errors()[0]["msg"]}',
            path=path,
            line=line,
        ) from e


def parse_fixture(text: str, path: Optional[Path] = None) -> Fixture:
    nodes: List[str] = []
    edges: List[Tuple[str, str]] = []
    hidden: List[str] = []
    settings: Dict[str, object] = {}
    mechanisms: Dict[str, Mechanism] = {}

    def add_node(name: str) -> None:
        if name not in nodes:
            nodes.append(name)

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        if '->' in line:
            chain = [_check_name(p.strip(), path, number) for p in line.split('->')]
            for tail, head in zip(chain, chain[1:]):
                add_node(tail)
                add_node(head)
                edges.append((tail, head))
            continue

        key, sep, value = line.partition(':')
        key = key.strip().lower()
        if not sep or key not in _DIRECTIVES:
            raise InputFormatError(f'cannot parse {line!r}', path=path, line=number)
        value = value.strip()

        if key == 'hidden':
            hidden.extend(_names(value, path, number))
        elif key == 'nodes':
            for name in _names(value, path, number):
                add_node(name)
        elif key == 'condition':
            settings['condition'] = _check_name(value, path, number)
        elif key == 'paradigm':
            try:
                settings['paradigm'] = Paradigm(value.lower())
            except ValueError:
                raise InputFormatError(
                    f'unknown paradigm {value!r}', path=path, line=number
                )
        elif key == 'seed':
            settings['seed'] = int(_number(value, path, number))
        else:
            node, mechanism = parse_mechanism(value, path, number)
            if node in mechanisms:
                raise InputFormatError(
                    f'second mechanism for {node}', path=path, line=number
                )
            mechanisms[node] = mechanism

    for name in hidden + list(mechanisms):
        add_node(name)
    if not nodes:
        raise InputFormatError('no nodes declared', path=path)
    try:
        dag = Dag.from_edges(edges, nodes=nodes, hidden=hidden)
        return Fixture(dag=dag, mechanisms=mechanisms, source=path, **settings)
    except ValidationError as e:
        where = f'{path}: ' if path else ''
        raise ArgumentError(f'{where}{e.errors()[0]["msg"]}') from e


def read_fixture(path: Path) -> Fixture:
    path = Path(path)
    if not path.is_file():
        raise ArgumentError(f'Fixture file not found: {path}')
    fixture = parse_fixture(path.read_text(encoding='utf-8'), path)
    logger.info(f'Read fixture {path}: {fixture.dag}')
    return fixture


def read_dag(path: Path) -> Dag:
    return read_fixture(path).dag


def read_sem(path: Path) -> Sem:
    return read_fixture(path).to_sem()

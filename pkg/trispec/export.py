"""Machine-readable output for spectra and censuses.

``OutputRecord`` is the top-level JSON document emitted by the CLI. CSV
rows are ``lambda,degree_l,multiplicity`` with an empty ``degree_l`` for
euclidean entries.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .core import DomainError, SpectrumEntry, TriangleSignature
from .settings import NORMALIZATION_NOTE

CSV_HEADER = ('lambda', 'degree_l', 'multiplicity')


def default_metadata(seed: Optional[int] = None, **extra: Any) -> Dict[str, Any]:
    from . import __version__

    meta: Dict[str, Any] = {'version': __version__, 'normalization': NORMALIZATION_NOTE}
    if seed is not None:
        meta['seed'] = seed
    meta.update(extra)
    return meta


@dataclass
class OutputRecord:
    group: List[int]
    geometry: str
    entries: List[SpectrumEntry] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if isinstance(self.group, TriangleSignature):
            self.group = list(self.group.as_tuple())
        lambdas = [e.lambda_ for e in self.entries]
        if lambdas != sorted(lambdas):
            raise DomainError('entries must be sorted by ascending eigenvalue')

    def to_dict(self) -> Dict[str, Any]:
        return {
            'group': list(self.group),
            'geometry': self.geometry,
            'entries': [{'lambda': e.lambda_, 'degree_l': e.degree_l, 'multiplicity': e.mult}
                        for e in self.entries],
            'metadata': dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OutputRecord':
        entries = [SpectrumEntry(int(e['lambda']), int(e['multiplicity']),
                                 None if e.get('degree_l') is None else int(e['degree_l']))
                   for e in data.get('entries', [])]
        return cls([int(x) for x in data['group']], str(data['geometry']), entries,
                   dict(data.get('metadata', {})))

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> 'OutputRecord':
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for e in self.entries:
            writer.writerow((e.lambda_, '' if e.degree_l is None else e.degree_l, e.mult))
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f'# group {tuple(self.group)} ({self.geometry})']
        for e in self.entries:
            if e.degree_l is None:
                lines.append(f'lambda={e.lambda_} mult={e.mult}')
            else:
                lines.append(f'l={e.degree_l} lambda={e.lambda_} mult={e.mult}')
        return '\n'.join(lines) + '\n'

    def render(self, fmt: str) -> str:
        if fmt == 'json':
            return self.to_json() + '\n'
        if fmt == 'csv':
            return self.to_csv()
        if fmt == 'text':
            return self.to_text()
        raise DomainError(f'unknown output format {fmt!r}')


def write_record(record: OutputRecord, path: Union[str, Path], fmt: str = 'json') -> Path:
    """Write ``record`` to ``path`` in ``fmt`` and return the path."""
    path = Path(path)
    text = record.render(fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        fh.write(text)
    return path

# Copyright 2024 The offtopic Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
Gold-standard labels.

The native format is comma-separated text with the header ``collection_id,uri_m,label``. The tab-separated
layout of the public gold-standard repository (``id, memento-datetime, URI-M, judgement``) is converted by
:func:`import_goldstandard_tsv`.
"""

import csv
import os
import re
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, List

import pandas as pd

from offtopic.errors import EmptyInputError, GoldStandardParseError
from offtopic.protocol import TopicStatus
from offtopic.utils.logging_utils import get_logger

__all__ = [
    'GoldLabel', 'GOLD_COLUMNS', 'parse_label', 'load_gold_standard', 'import_goldstandard_tsv', 'write_gold_standard',
    'gold_standard_summary'
]

logger = get_logger(__file__)

GOLD_COLUMNS = ['collection_id', 'uri_m', 'label']

_LABELS = {
    'on-topic': TopicStatus.ON_TOPIC,
    'ontopic': TopicStatus.ON_TOPIC,
    'on': TopicStatus.ON_TOPIC,
    'off-topic': TopicStatus.OFF_TOPIC,
    'offtopic': TopicStatus.OFF_TOPIC,
    'off': TopicStatus.OFF_TOPIC,
}

# http://wayback.archive-it.org/<collection>/<14 digits>/<original>
_ARCHIVEIT_URIM_RE = re.compile(r'^https?://[^/]+/(?P<collection>\d+)/(?P<mdt>\d{14})(?P<mod>[a-z]{2}_)?/')


@dataclass(frozen=True)
class GoldLabel:
    uri_m: str
    label: TopicStatus
    collection_id: str

    @property
    def off_topic(self) -> bool:
        return self.label is TopicStatus.OFF_TOPIC


def parse_label(token: str, line: int = None) -> TopicStatus:
    key = str(token).strip().lower().replace('_', '-').replace(' ', '-')
    if key not in _LABELS:
        raise GoldStandardParseError(f'unknown label {token!r}', line=line)
    return _LABELS[key]


def _check_unique(labels: List[GoldLabel], lines: List[int]):
    seen = {}
    for label, line in zip(labels, lines):
        if label.uri_m in seen:
            raise GoldStandardParseError(f'{label.uri_m} already labeled on line {seen[label.uri_m]}', line=line)
        seen[label.uri_m] = line


def load_gold_standard(path: str) -> List[GoldLabel]:
    if not os.path.exists(path) or os.path.getsize(path) == 0:
        raise EmptyInputError(f'gold standard {path} is empty or missing')
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    missing = [c for c in GOLD_COLUMNS if c not in frame.columns]
    if missing:
        raise GoldStandardParseError(f'{path}: missing columns {missing}, expected header {",".join(GOLD_COLUMNS)}',
                                     line=1)
    labels, lines = [], []
    for i, row in enumerate(frame.itertuples(index=False)):
        line = i + 2  # header is line 1
        if not row.uri_m.strip():
            raise GoldStandardParseError('empty uri_m', line=line)
        labels.append(GoldLabel(uri_m=row.uri_m.strip(), label=parse_label(row.label, line),
                                collection_id=row.collection_id.strip()))
        lines.append(line)
    if not labels:
        raise EmptyInputError(f'gold standard {path} has no labels')
    _check_unique(labels, lines)
    return labels


def import_goldstandard_tsv(path: str) -> List[GoldLabel]:
    """Read the tab-separated gold-standard layout.

    The collection id comes from the URI-M path. When the datetime embedded in the URI-M disagrees with the
    memento-datetime column, the URI-M is rewritten to use the column value.
    """
    labels, lines = [], []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for line, fields in enumerate(csv.reader(f, delimiter='\t'), start=1):
            if not fields or not ''.join(fields).strip():
                continue
            if len(fields) != 4:
                raise GoldStandardParseError(f'expected 4 tab-separated fields, got {len(fields)}', line=line)
            _, mdt, uri_m, judgement = (x.strip() for x in fields)
            if line == 1 and fields[0].strip() == 'id':
                continue
            match = _ARCHIVEIT_URIM_RE.match(uri_m)
            if match is None:
                raise GoldStandardParseError(f'not an Archive-It URI-M: {uri_m}', line=line)
            if mdt and match.group('mdt') != mdt:
                logger.warning(f'line {line}: datetime {match.group("mdt")} in {uri_m} does not match {mdt}, fixed')
                uri_m = uri_m[:match.start('mdt')] + mdt + uri_m[match.end('mdt'):]
            labels.append(GoldLabel(uri_m=uri_m, label=parse_label(judgement, line),
                                    collection_id=match.group('collection')))
            lines.append(line)
    if not labels:
        raise EmptyInputError(f'gold standard {path} has no labels')
    _check_unique(labels, lines)
    return labels


def write_gold_standard(labels: Iterable[GoldLabel], path: str):
    frame = pd.DataFrame([(g.collection_id, g.uri_m, g.label.value) for g in labels], columns=GOLD_COLUMNS)
    frame.to_csv(path, index=False)


def gold_standard_summary(labels: Iterable[GoldLabel]) -> pd.DataFrame:
    """Per collection: number of mementos, number off-topic and the off-topic share."""
    counts = OrderedDict()
    for g in labels:
        total, off = counts.get(g.collection_id, (0, 0))
        counts[g.collection_id] = (total + 1, off + int(g.off_topic))
    rows = [(cid, total, off, off / total) for cid, (total, off) in counts.items()]
    return pd.DataFrame(rows, columns=['collection_id', 'mementos', 'off_topic', 'off_topic_share'])

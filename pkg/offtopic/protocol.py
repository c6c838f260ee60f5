# Copyright 2024 Bytedance Ltd. and/or its affiliates
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
Implement the data types passed between the stages of detection: TimeMaps and their mementos, preprocessed
documents, per-measure results and the collection report. All of them are immutable once built, except the
report, which the engine assembles as a single writer.
"""

from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import formatdate, parsedate_to_datetime
from enum import Enum
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union
from urllib.parse import urlsplit

from offtopic.errors import UsageError

__all__ = [
    'TopicStatus', 'PreprocessingFlags', 'MementoRef', 'TimeMap', 'MementoDocument', 'MeasureResult', 'MementoEntry',
    'ReportError', 'CollectionReport', 'overall_topic_status', 'parse_http_date', 'format_http_date',
    'memento_timestamp', 'is_absolute_uri'
]


class TopicStatus(str, Enum):
    ON_TOPIC = 'on-topic'
    OFF_TOPIC = 'off-topic'

    def __str__(self):
        return self.value


def is_absolute_uri(uri: str) -> bool:
    if not uri or any(c.isspace() for c in uri):
        return False
    parts = urlsplit(uri)
    return bool(parts.scheme) and bool(parts.netloc or parts.path)


def parse_http_date(value: str) -> int:
    """Parse an RFC 1123 datetime ("Tue, 03 Jan 2012 01:43:26 GMT") into UTC epoch seconds."""
    try:
        dt = parsedate_to_datetime(value.strip())
    except (TypeError, ValueError, IndexError) as e:
        raise ValueError(f'unparseable datetime {value!r}') from e
    if dt is None:
        raise ValueError(f'unparseable datetime {value!r}')
    # "-0000" zones come back naive and still mean UTC
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def format_http_date(epoch: int) -> str:
    return formatdate(epoch, usegmt=True)


def memento_timestamp(epoch: int) -> str:
    """14-digit wayback timestamp, e.g. 20120103014326."""
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime('%Y%m%d%H%M%S')


@dataclass(frozen=True)
class PreprocessingFlags:
    removed_boilerplate: bool = False
    tokenized: bool = False
    stemmed: bool = False

    def to_dict(self) -> Dict[str, bool]:
        # key order is part of the report format
        return {
            'stemmed': self.stemmed,
            'tokenized': self.tokenized,
            'removed boilerplate': self.removed_boilerplate,
        }


@dataclass(frozen=True)
class MementoRef:
    uri_m: str
    memento_datetime: int
    rel_hints: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not is_absolute_uri(self.uri_m):
            raise ValueError(f'URI-M must be an absolute URI. Got {self.uri_m!r}')
        if not isinstance(self.rel_hints, frozenset):
            object.__setattr__(self, 'rel_hints', frozenset(self.rel_hints))

    @property
    def http_datetime(self) -> str:
        return format_http_date(self.memento_datetime)


@dataclass(frozen=True)
class TimeMap:
    uri_t: str
    original_uri: str
    mementos: Tuple[MementoRef, ...] = ()

    def __post_init__(self):
        if not isinstance(self.mementos, tuple):
            object.__setattr__(self, 'mementos', tuple(self.mementos))
        for prev, cur in zip(self.mementos, self.mementos[1:]):
            assert prev.memento_datetime <= cur.memento_datetime, \
                f'mementos of {self.uri_t} must be ordered by memento-datetime'

    def __len__(self):
        return len(self.mementos)


@dataclass(frozen=True)
class MementoDocument:
    """One memento's raw bytes plus whatever derivations preprocessing produced."""
    ref: MementoRef
    raw_bytes: bytes
    extracted_text: Optional[str] = None
    tokens: Optional[Tuple[str, ...]] = None
    term_frequencies: Optional[Mapping[str, int]] = None
    preprocessing_flags: PreprocessingFlags = field(default_factory=PreprocessingFlags)

    def __post_init__(self):
        if self.tokens is not None:
            assert self.extracted_text is not None, 'tokens require extracted text'
            if not isinstance(self.tokens, tuple):
                object.__setattr__(self, 'tokens', tuple(self.tokens))
        if self.term_frequencies is not None:
            assert self.tokens is not None, 'term frequencies require tokens'
            if not isinstance(self.term_frequencies, MappingProxyType):
                object.__setattr__(self, 'term_frequencies', MappingProxyType(dict(self.term_frequencies)))


@dataclass(frozen=True)
class MeasureResult:
    measure_id: str
    comparison_score: Optional[Union[float, int]]
    threshold: Union[float, int]
    topic_status: TopicStatus
    preprocessing_flags: PreprocessingFlags = field(default_factory=PreprocessingFlags)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        record = dict(self.preprocessing_flags.to_dict())
        record['comparison score'] = self.comparison_score
        record['topic status'] = self.topic_status.value
        if self.error is not None:
            record['error'] = self.error
        return record


def overall_topic_status(results: Iterable[Union[MeasureResult, TopicStatus]]) -> TopicStatus:
    """Logical or over the verdicts: one off-topic measure makes the memento off-topic."""
    statuses = [r.topic_status if isinstance(r, MeasureResult) else TopicStatus(r) for r in results]
    if not statuses:
        raise UsageError('overall topic status needs at least one measure result')
    if any(s is TopicStatus.OFF_TOPIC for s in statuses):
        return TopicStatus.OFF_TOPIC
    return TopicStatus.ON_TOPIC


@dataclass(frozen=True)
class MementoEntry:
    timemap_measures: Mapping[str, MeasureResult]
    overall_topic_status: TopicStatus

    @classmethod
    def from_results(cls, results: List[MeasureResult]) -> 'MementoEntry':
        measures = MappingProxyType({r.measure_id: r for r in results})
        return cls(timemap_measures=measures, overall_topic_status=overall_topic_status(results))

    def to_dict(self) -> dict:
        return {
            'timemap measures': {measure_id: r.to_dict() for measure_id, r in self.timemap_measures.items()},
            'overall topic status': self.overall_topic_status.value,
        }


@dataclass(frozen=True)
class ReportError:
    stage: str
    message: str
    uri_t: Optional[str] = None
    uri_m: Optional[str] = None

    def to_dict(self) -> dict:
        return {'stage': self.stage, 'uri_t': self.uri_t, 'uri_m': self.uri_m, 'message': self.message}


@dataclass
class CollectionReport:
    """URI-T -> URI-M -> measure results, plus the failures met on the way."""
    timemaps: Dict[str, Dict[str, MementoEntry]] = field(default_factory=dict)
    errors: List[ReportError] = field(default_factory=list)

    def add_timemap(self, uri_t: str, results: Mapping[str, List[MeasureResult]]):
        assert uri_t not in self.timemaps, f'{uri_t} is already in the report'
        self.timemaps[uri_t] = {uri_m: MementoEntry.from_results(rs) for uri_m, rs in results.items()}

    def add_error(self, stage: str, message: str, uri_t: str = None, uri_m: str = None):
        self.errors.append(ReportError(stage=stage, message=message, uri_t=uri_t, uri_m=uri_m))

    def iter_results(self):
        for uri_t, mementos in self.timemaps.items():
            for uri_m, entry in mementos.items():
                for measure_id, result in entry.timemap_measures.items():
                    yield uri_t, uri_m, entry, result

    def to_dict(self) -> dict:
        return {
            uri_t: {uri_m: entry.to_dict() for uri_m, entry in mementos.items()}
            for uri_t, mementos in self.timemaps.items()
        }

    def __len__(self):
        return len(self.timemaps)

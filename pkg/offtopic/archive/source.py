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
Turn an input argument (``timemap=...``, ``warc=...``, ``archiveit=...``) into TimeMaps.
"""

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

from offtopic.archive.archiveit import (ARCHIVEIT_BASE_URL, ARCHIVEIT_WAYBACK_URL, archiveit_timemap_uri,
                                        discover_archiveit_seeds)
from offtopic.archive.fetcher import MementoFetcher, decode_body
from offtopic.archive.timemap import parse_link_timemap
from offtopic.archive.warc import ingest_warc
from offtopic.errors import EmptyInputError, FetchFailedError, TimeMapParseError, UsageError
from offtopic.protocol import ReportError, TimeMap, is_absolute_uri
from offtopic.utils.logging_utils import get_logger

__all__ = ['SourceKind', 'CollectionSource', 'ResolvedSource', 'resolve_source']

logger = get_logger(__file__)


class SourceKind(str, Enum):
    TIMEMAP = 'timemap'
    WARC = 'warc'
    ARCHIVEIT = 'archiveit'


@dataclass(frozen=True)
class CollectionSource:
    kind: SourceKind
    arguments: Tuple[str, ...]

    def __post_init__(self):
        try:
            object.__setattr__(self, 'kind', SourceKind(self.kind))
        except ValueError:
            raise UsageError(f'unknown input type {self.kind!r}, expected one of '
                             f'{", ".join(k.value for k in SourceKind)}') from None
        object.__setattr__(self, 'arguments', tuple(a.strip() for a in self.arguments if a.strip()))
        if not self.arguments:
            raise UsageError(f'input type {self.kind.value} needs at least one argument')
        if self.kind is SourceKind.ARCHIVEIT:
            if len(self.arguments) != 1 or not self.arguments[0].isdigit():
                raise UsageError(f'archiveit input takes exactly one decimal collection id, got {self.arguments}')

    @classmethod
    def parse(cls, spec: str) -> 'CollectionSource':
        """``timemap=<uri>,<uri>`` / ``warc=<file>,<file>`` / ``archiveit=<id>``"""
        kind, sep, args = (spec or '').partition('=')
        if not sep or not args.strip():
            raise UsageError(f'malformed input spec {spec!r}, expected <type>=<args>')
        return cls(kind=kind.strip().lower(), arguments=tuple(args.split(',')))

    def __str__(self):
        return f'{self.kind.value}={",".join(self.arguments)}'


@dataclass
class ResolvedSource:
    timemaps: List[TimeMap] = field(default_factory=list)
    errors: List[ReportError] = field(default_factory=list)


def _load_timemap(uri_t: str, fetcher: MementoFetcher) -> TimeMap:
    if not is_absolute_uri(uri_t) and os.path.isfile(uri_t):
        with open(uri_t, 'rb') as f:
            return parse_link_timemap(decode_body(f.read()), uri_t=os.path.abspath(uri_t))
    record = fetcher.fetch(uri_t)
    return parse_link_timemap(decode_body(record.body, record.content_type), uri_t=record.final_uri)


def resolve_source(source: CollectionSource,
                   fetcher: MementoFetcher,
                   archiveit_base_url: str = ARCHIVEIT_BASE_URL,
                   archiveit_wayback_url: str = ARCHIVEIT_WAYBACK_URL) -> ResolvedSource:
    """Resolve ``source`` to TimeMaps. TimeMaps that cannot be fetched or parsed are recorded as errors."""
    resolved = ResolvedSource()

    if source.kind is SourceKind.WARC:
        missing = [p for p in source.arguments if not os.path.isfile(p)]
        if missing:
            raise UsageError(f'WARC file not found: {", ".join(missing)}')
        resolved.timemaps = ingest_warc(source.arguments, fetcher.cache, errors=resolved.errors)
        return resolved

    if source.kind is SourceKind.ARCHIVEIT:
        collection_id = source.arguments[0]
        seeds = discover_archiveit_seeds(collection_id, fetcher, base_url=archiveit_base_url)
        uri_ts = [archiveit_timemap_uri(collection_id, seed, archiveit_wayback_url) for seed in seeds]
    else:
        uri_ts = list(dict.fromkeys(source.arguments))

    seen_uri_ts = set()
    for i, uri_t in enumerate(uri_ts):
        try:
            tm = _load_timemap(uri_t, fetcher)
        except (FetchFailedError, TimeMapParseError, EmptyInputError, UsageError) as e:
            logger.warning(f'TimeMap {uri_t} skipped: {e}')
            resolved.errors.append(ReportError(stage='resolve', message=str(e), uri_t=uri_t))
            continue
        if tm.uri_t in seen_uri_ts:
            logger.warning(f'TimeMap {tm.uri_t} listed twice, keeping the first')
            continue
        seen_uri_ts.add(tm.uri_t)
        resolved.timemaps.append(tm)
        print(f'[{i + 1}/{len(uri_ts)}] TimeMap {tm.uri_t}: {len(tm)} mementos')
    return resolved

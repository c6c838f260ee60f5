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
Parse and serialize application/link-format TimeMaps.

Entries may be separated by commas, newlines or both; quoted parameter values may themselves contain commas
(RFC 1123 datetimes always do).
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from offtopic.errors import EmptyTimeMapError, TimeMapParseError, UsageError
from offtopic.protocol import MementoRef, TimeMap, format_http_date, parse_http_date
from offtopic.utils.logging_utils import get_logger

__all__ = ['LinkEntry', 'parse_link_format', 'parse_link_timemap', 'serialize_link_timemap', 'first_memento']

logger = get_logger(__file__)

_LINK_RE = re.compile(r'<([^>]*)>((?:\s*;\s*[^\s=;,<]+\s*=\s*(?:"[^"]*"|[^\s;,<]*))*)')
_PARAM_RE = re.compile(r';\s*([^\s=;,<]+)\s*=\s*(?:"([^"]*)"|([^\s;,<]*))')

# rel tokens are written in this order; anything unknown goes before "memento"
_REL_ORDER = ('original', 'self', 'timemap', 'timegate', 'first', 'last', 'prev', 'next')


@dataclass
class LinkEntry:
    target_uri: str
    params: Dict[str, str] = field(default_factory=dict)

    @property
    def rels(self) -> List[str]:
        return self.params.get('rel', '').split()


def parse_link_format(text: str) -> List[LinkEntry]:
    entries = []
    for match in _LINK_RE.finditer(text):
        target, raw_params = match.group(1).strip(), match.group(2)
        params = {}
        for p in _PARAM_RE.finditer(raw_params):
            name = p.group(1).lower()
            value = p.group(2) if p.group(2) is not None else p.group(3)
            params[name] = ' '.join(value.split())
        if 'rel' not in params:
            logger.warning(f'link entry without rel attribute skipped: {target}')
            continue
        entries.append(LinkEntry(target_uri=target, params=params))
    return entries


def parse_link_timemap(text: str, uri_t: Optional[str] = None) -> TimeMap:
    """Build a TimeMap from a link-format document.

    Args:
        text: the TimeMap body.
        uri_t: the URI the document was fetched from; used when the document carries no rel="self" entry.

    Returns:
        a TimeMap whose mementos are sorted by memento-datetime.
    """
    entries = parse_link_format(text)

    original = next((e for e in entries if 'original' in e.rels), None)
    if original is None:
        raise TimeMapParseError(f'no rel="original" entry in TimeMap {uri_t or ""}'.strip())
    self_entry = next((e for e in entries if 'self' in e.rels), None)
    if self_entry is not None:
        uri_t = self_entry.target_uri
    if not uri_t:
        raise TimeMapParseError('TimeMap has no rel="self" entry and no fetch URI was given')

    mementos = []
    for entry in entries:
        rels = entry.rels
        if 'memento' not in rels:
            continue
        if 'datetime' not in entry.params:
            logger.warning(f'memento entry without datetime skipped: {entry.target_uri}')
            continue
        try:
            memento_datetime = parse_http_date(entry.params['datetime'])
            ref = MementoRef(uri_m=entry.target_uri, memento_datetime=memento_datetime, rel_hints=frozenset(rels))
        except ValueError as e:
            logger.warning(f'memento entry skipped: {e}')
            continue
        mementos.append(ref)

    if not mementos:
        raise EmptyTimeMapError(f'TimeMap {uri_t} lists no mementos')

    mementos.sort(key=lambda m: (m.memento_datetime, m.uri_m))
    return TimeMap(uri_t=uri_t, original_uri=original.target_uri, mementos=tuple(mementos))


def _rel_value(hints) -> str:
    ordered = [r for r in _REL_ORDER if r in hints]
    ordered += sorted(r for r in hints if r not in _REL_ORDER and r != 'memento')
    if 'memento' in hints:
        ordered.append('memento')
    return ' '.join(ordered)


def serialize_link_timemap(tm: TimeMap) -> str:
    lines = [f'<{tm.original_uri}>; rel="original"']
    self_line = f'<{tm.uri_t}>; rel="self"; type="application/link-format"'
    if tm.mementos:
        self_line += (f'; from="{format_http_date(tm.mementos[0].memento_datetime)}"'
                      f'; until="{format_http_date(tm.mementos[-1].memento_datetime)}"')
    lines.append(self_line)
    for m in tm.mementos:
        rel = _rel_value(m.rel_hints or {'memento'})
        lines.append(f'<{m.uri_m}>; rel="{rel}"; datetime="{m.http_datetime}"')
    return ',\n'.join(lines) + '\n'


def first_memento(tm: TimeMap) -> MementoRef:
    """The comparison baseline: the memento hinted as "first", else the earliest one.

    Equal datetimes are broken by the lexicographically smallest URI-M.
    """
    if not tm.mementos:
        raise UsageError(f'TimeMap {tm.uri_t} has no mementos')
    candidates = [m for m in tm.mementos if 'first' in m.rel_hints] or list(tm.mementos)
    return min(candidates, key=lambda m: (m.memento_datetime, m.uri_m))

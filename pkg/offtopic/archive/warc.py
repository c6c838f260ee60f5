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
Build TimeMaps out of WARC files.

Every 200 ``response`` record becomes one memento named ``warc:///<14-digit WARC-Date>/<target>``; its payload
is put in the content cache under that name so the fetcher resolves it offline. Records of one target URI form
one TimeMap named ``warc:///timemap/link/<target>``.
"""

import zlib
from collections import defaultdict
from typing import BinaryIO, Dict, Iterator, List, Optional, Sequence

from warcio.archiveiterator import ArchiveIterator
from warcio.exceptions import ArchiveLoadFailed
from warcio.statusandheaders import StatusAndHeadersParserException
from warcio.timeutils import iso_date_to_timestamp, timestamp_to_sec

from offtopic.archive.cache import ContentCache
from offtopic.errors import EmptyInputError
from offtopic.protocol import MementoRef, ReportError, TimeMap
from offtopic.utils.logging_utils import get_logger

__all__ = ['ingest_warc', 'warc_memento_uri', 'warc_timemap_uri']

logger = get_logger(__file__)

_GZIP_MAGIC = b'\x1f\x8b'
_SCAN_BLOCK = 1 << 16


def warc_memento_uri(timestamp: str, target: str) -> str:
    return f'warc:///{timestamp}/{target}'


def warc_timemap_uri(target: str) -> str:
    return f'warc:///timemap/link/{target}'


def _next_gzip_member(stream: BinaryIO, offset: int) -> Optional[int]:
    """Offset of the gzip member that follows the one starting at ``offset``, or None."""
    stream.seek(offset)
    decompressor = zlib.decompressobj(16 + zlib.MAX_WBITS)
    consumed = 0
    try:
        while not decompressor.eof:
            chunk = stream.read(_SCAN_BLOCK)
            if not chunk:
                return None
            decompressor.decompress(chunk)
            consumed += len(chunk)
    except zlib.error:
        return None
    return offset + consumed - len(decompressor.unused_data)


def _next_warc_header(stream: BinaryIO, offset: int) -> Optional[int]:
    """Offset of the first line starting with ``WARC/`` strictly after ``offset``, or None."""
    position = offset + 1
    stream.seek(position)
    tail = b''
    while True:
        chunk = stream.read(_SCAN_BLOCK)
        if not chunk:
            return None
        window = tail + chunk
        found = window.find(b'\nWARC/')
        if found >= 0:
            return position - len(tail) + found + 1
        tail = window[-len(b'\nWARC/') + 1:]
        position += len(chunk)


def _iter_records(path: str, errors: List[ReportError]) -> Iterator:
    """Every readable record of one WARC file.

    A record that cannot be parsed is reported and skipped; reading resumes at the next gzip member
    (compressed files) or the next ``WARC/`` header line (plain files).
    """
    with open(path, 'rb') as stream:
        gzipped = stream.read(2) == _GZIP_MAGIC
        start = 0
        while start is not None:
            stream.seek(start)
            records = ArchiveIterator(stream)
            next_record = start
            try:
                for record in records:
                    yield record
                    next_record = records.get_record_offset() + records.get_record_length()
                return
            except (ArchiveLoadFailed, StatusAndHeadersParserException, zlib.error) as e:
                message = f'{path}: malformed record at offset {next_record} skipped: {e}'
                logger.warning(message)
                errors.append(ReportError(stage='fetch', message=message))
                start = _next_gzip_member(stream, next_record) if gzipped else _next_warc_header(stream, next_record)
                if start is not None and start <= next_record:
                    start = None


def ingest_warc(files: Sequence[str], cache: ContentCache, errors: List[ReportError] = None) -> List[TimeMap]:
    """Group the 200 response records of ``files`` into TimeMaps; malformed records land in ``errors``."""
    errors = errors if errors is not None else []
    groups: Dict[str, List[MementoRef]] = defaultdict(list)
    used_uris = set()
    n_records = 0

    for path in files:
        for record in _iter_records(path, errors):
            if record.rec_type != 'response':
                continue
            target = record.rec_headers.get_header('WARC-Target-URI')
            warc_date = record.rec_headers.get_header('WARC-Date')
            if not target or not warc_date:
                logger.warning(f'{path}: response record without target URI or date skipped')
                continue
            if record.http_headers is None or record.http_headers.get_statuscode() != '200':
                continue
            try:
                timestamp = iso_date_to_timestamp(warc_date)
            except (ValueError, IndexError):
                logger.warning(f'{path}: unparseable WARC-Date {warc_date!r} for {target} skipped')
                continue

            try:
                body = record.content_stream().read()
            except (ArchiveLoadFailed, zlib.error) as e:
                logger.warning(f'{path}: unreadable payload for {target} skipped: {e}')
                errors.append(ReportError(stage='fetch', message=f'{path}: unreadable payload for {target}: {e}'))
                continue

            uri_m = warc_memento_uri(timestamp, target)
            if uri_m in used_uris:
                uri_m = f"{uri_m}#{record.rec_headers.get_header('WARC-Record-ID')}"
            used_uris.add(uri_m)

            seconds = timestamp_to_sec(timestamp)
            cache.put_bytes(uri_m,
                            body,
                            content_type=record.http_headers.get_header('Content-Type') or '',
                            fetched_at=seconds)
            groups[target].append(MementoRef(uri_m=uri_m, memento_datetime=seconds))
            n_records += 1

    if n_records == 0:
        raise EmptyInputError(f'no usable response records in {", ".join(files)}')

    timemaps = []
    for target in sorted(groups):
        mementos = sorted(groups[target], key=lambda m: (m.memento_datetime, m.uri_m))
        timemaps.append(TimeMap(uri_t=warc_timemap_uri(target), original_uri=target, mementos=tuple(mementos)))
    logger.info(f'{n_records} response records from {len(files)} WARC files -> {len(timemaps)} TimeMaps, '
                f'{len(errors)} malformed records')
    return timemaps

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
On-disk cache of fetched content.

Bodies are stored once under ``blobs/<sha256>``; every URI that resolved to a body gets a manifest entry under
``index/<md5(uri)>.json`` holding the digest, status, content type and fetch time.
"""

import json
import os
import time
from dataclasses import dataclass, replace
from typing import Optional

from offtopic.utils.fs import atomic_write, get_local_cache_path, key_lock, md5_encode, read_json, sha256_encode
from offtopic.utils.logging_utils import get_logger

__all__ = ['FetchRecord', 'ContentCache']

logger = get_logger(__file__)


@dataclass(frozen=True)
class FetchRecord:
    uri: str
    status_code: int
    content_type: str
    body: Optional[bytes]
    fetched_at: float
    from_cache: bool = False
    final_uri: Optional[str] = None

    def __post_init__(self):
        ok = 200 <= self.status_code < 300
        assert (self.body is not None) == (ok or self.from_cache), \
            f'body must be present iff the status is 2xx or the record is a cache hit, got {self.status_code}'
        if self.final_uri is None:
            object.__setattr__(self, 'final_uri', self.uri)


class ContentCache:

    def __init__(self, cache_dir: str):
        # directories are created on the first put
        self.cache_dir = os.path.abspath(os.path.expanduser(cache_dir))

    def _index_path(self, uri: str) -> str:
        return get_local_cache_path(md5_encode(uri), self.cache_dir, 'index', suffix='.json')

    def _blob_path(self, digest: str) -> str:
        return get_local_cache_path(digest, self.cache_dir, 'blobs')

    def __contains__(self, uri: str) -> bool:
        return os.path.exists(self._index_path(uri))

    def get(self, uri: str) -> Optional[FetchRecord]:
        index_path = self._index_path(uri)
        if not os.path.exists(index_path):
            return None
        try:
            entry = read_json(index_path)
            with open(self._blob_path(entry['digest']), 'rb') as f:
                body = f.read()
        except (OSError, ValueError, KeyError) as e:
            logger.warning(f'corrupt cache entry for {uri} ignored: {e}')
            return None
        return FetchRecord(uri=uri,
                           status_code=entry['status'],
                           content_type=entry.get('content_type', ''),
                           body=body,
                           fetched_at=entry['fetched_at'],
                           from_cache=True,
                           final_uri=entry.get('final_uri', uri))

    def put(self, uri: str, record: FetchRecord) -> FetchRecord:
        """Store ``record`` under ``uri`` and under its final URI; returns the record as a later hit would see it."""
        assert record.body is not None, f'only successful fetches are cached, got status {record.status_code}'
        digest = sha256_encode(record.body)
        blob_path = self._blob_path(digest)
        with key_lock(self.cache_dir, digest):
            if not os.path.exists(blob_path):
                atomic_write(blob_path, record.body)

        entry = {
            'uri': uri,
            'final_uri': record.final_uri,
            'digest': digest,
            'status': record.status_code,
            'content_type': record.content_type,
            'fetched_at': record.fetched_at,
        }
        for key in dict.fromkeys([uri, record.final_uri]):
            with key_lock(self.cache_dir, key):
                atomic_write(self._index_path(key), json.dumps(dict(entry, uri=key), sort_keys=True).encode())
        return replace(record, uri=uri, from_cache=True)

    def put_bytes(self, uri: str, body: bytes, content_type: str = '', fetched_at: float = None) -> FetchRecord:
        record = FetchRecord(uri=uri,
                             status_code=200,
                             content_type=content_type,
                             body=body,
                             fetched_at=time.time() if fetched_at is None else fetched_at)
        return self.put(uri, record)

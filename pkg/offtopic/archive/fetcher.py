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
Polite HTTP retrieval of raw mementos through the content cache.
"""

import re
import threading
import time
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Optional
from urllib.parse import urlsplit

import requests
from bs4.dammit import EncodingDetector
from requests.adapters import HTTPAdapter
from urllib3.util.retry import Retry

from offtopic.archive.cache import ContentCache, FetchRecord
from offtopic.errors import FetchFailedError, RedirectLoopError, UsageError
from offtopic.protocol import is_absolute_uri
from offtopic.utils.logging_utils import get_logger

__all__ = ['FetchConfig', 'HostThrottle', 'MementoFetcher', 'fetch', 'raw_memento_uri', 'decode_body']

logger = get_logger(__file__)

DEFAULT_USER_AGENT = 'offtopic/0.1 (off-topic memento detection)'

# <scheme>://<host>/<path segments>/<14 digits>[<modifier>_]/<original uri>
_WAYBACK_RE = re.compile(r'^(?P<prefix>https?://[^/]+/(?:[^/]+/)*?)(?P<ts>\d{14})(?P<mod>[a-z]{2}_)?/(?P<original>.+)$',
                         re.IGNORECASE)
_CHARSET_RE = re.compile(r'charset\s*=\s*["\']?([\w.:-]+)', re.IGNORECASE)


@dataclass
class FetchConfig:
    max_redirects: int = 10
    retries: int = 3
    backoff_factor: float = 0.5
    per_host_limit: int = 4
    min_interval: float = 0.25
    timeout: float = 30.0
    user_agent: str = DEFAULT_USER_AGENT

    def __post_init__(self):
        if self.per_host_limit < 1:
            raise UsageError(f'fetch.per_host_limit must be >= 1, got {self.per_host_limit}')
        if self.min_interval < 0 or self.retries < 0 or self.max_redirects < 0:
            raise UsageError('fetch.min_interval, fetch.retries and fetch.max_redirects must be non-negative')


class HostThrottle:
    """Caps concurrent requests per host and spaces request starts to the same host."""

    def __init__(self, per_host_limit: int = 4, min_interval: float = 0.25):
        self.per_host_limit = per_host_limit
        self.min_interval = min_interval
        self._lock = threading.Lock()
        self._slots: Dict[str, threading.BoundedSemaphore] = defaultdict(
            lambda: threading.BoundedSemaphore(self.per_host_limit))
        self._next_start: Dict[str, float] = defaultdict(float)

    @contextmanager
    def slot(self, host: str):
        with self._lock:
            semaphore = self._slots[host]
        with semaphore:
            with self._lock:
                now = time.monotonic()
                start = max(now, self._next_start[host])
                self._next_start[host] = start + self.min_interval
            # sleep before the request is sent
            if start > now:
                time.sleep(start - now)
            yield


def raw_memento_uri(uri_m: str) -> str:
    """Rewrite a wayback URI-M to its raw (``id_``) form, which the archive serves without banner or rewriting.

    URIs that do not follow the wayback pattern are returned unchanged.
    """
    match = _WAYBACK_RE.match(uri_m)
    if match is None:
        logger.warning(f'not a wayback URI-M, fetched as-is: {uri_m}')
        return uri_m
    if (match.group('mod') or '').lower() == 'id_':
        return uri_m
    return f"{match.group('prefix')}{match.group('ts')}id_/{match.group('original')}"


def decode_body(body: bytes, content_type: Optional[str] = None, charset: Optional[str] = None) -> str:
    """Decode with the explicit charset, else the Content-Type charset, else the HTML meta charset, else UTF-8.

    Undecodable bytes are replaced, so this never fails.
    """
    if body is None:
        return ''
    candidates = [charset]
    if content_type:
        match = _CHARSET_RE.search(content_type)
        candidates.append(match.group(1) if match else None)
    candidates.append(EncodingDetector.find_declared_encoding(body[:4096], is_html=True))
    for encoding in candidates:
        if not encoding:
            continue
        try:
            return body.decode(encoding, errors='replace')
        except LookupError:
            logger.debug(f'unknown charset {encoding!r} ignored')
    return body.decode('utf-8', errors='replace')


class MementoFetcher:
    """HTTP GET with retries, bounded redirects and per-host politeness, backed by a :class:`ContentCache`.

    Args:
        cache_dir: cache root.
        config: retry, redirect and politeness settings.
        session: a preconfigured ``requests.Session``; one is built from ``config`` if omitted.
        offline: never touch the network; a cache miss is a fetch failure.
    """

    def __init__(self, cache_dir: str, config: FetchConfig = None, session: requests.Session = None,
                 offline: bool = False):
        self.config = config or FetchConfig()
        self.cache = ContentCache(cache_dir)
        self.offline = offline
        self.session = session if session is not None else self._build_session()
        self.session.max_redirects = self.config.max_redirects
        self.throttle = HostThrottle(self.config.per_host_limit, self.config.min_interval)

    def _build_session(self) -> requests.Session:
        session = requests.Session()
        retry = Retry(total=self.config.retries,
                      backoff_factor=self.config.backoff_factor,
                      status_forcelist=[500, 502, 503, 504],
                      allowed_methods={'GET', 'HEAD'},
                      raise_on_status=False)
        adapter = HTTPAdapter(max_retries=retry, pool_connections=16, pool_maxsize=16)
        session.mount('http://', adapter)
        session.mount('https://', adapter)
        session.headers.update({'User-Agent': self.config.user_agent})
        return session

    def fetch(self, uri: str, use_cache: bool = True) -> FetchRecord:
        if not is_absolute_uri(uri):
            raise UsageError(f'cannot fetch a relative URI: {uri!r}')
        if use_cache:
            cached = self.cache.get(uri)
            if cached is not None:
                return cached
        parts = urlsplit(uri)
        if self.offline:
            raise FetchFailedError(uri, reason='not cached and running offline')
        if parts.scheme not in ('http', 'https'):
            raise FetchFailedError(uri, reason=f'no content stored for {parts.scheme} URI')

        try:
            with self.throttle.slot(parts.netloc):
                response = self.session.get(uri, timeout=self.config.timeout)
        except requests.TooManyRedirects as e:
            raise RedirectLoopError(uri, reason=str(e)) from e
        except requests.RequestException as e:
            raise FetchFailedError(uri, reason=type(e).__name__) from e

        if not 200 <= response.status_code < 300:
            raise FetchFailedError(uri, status=response.status_code)
        record = FetchRecord(uri=uri,
                             status_code=response.status_code,
                             content_type=response.headers.get('Content-Type', ''),
                             body=response.content,
                             fetched_at=time.time(),
                             final_uri=response.url)
        if record.final_uri != uri:
            logger.info(f'{uri} redirected to {record.final_uri}')
        self.cache.put(uri, record)
        return record


def fetch(uri: str, cache_dir: str, config: FetchConfig = None) -> FetchRecord:
    return MementoFetcher(cache_dir, config=config).fetch(uri)

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

import pytest

from offtopic.archive.cache import ContentCache
from offtopic.archive.fetcher import FetchConfig, MementoFetcher, decode_body, raw_memento_uri
from offtopic.errors import FetchFailedError, RedirectLoopError, UsageError


def test_raw_memento_uri():
    uri = 'http://wayback.archive-it.org/2950/20120103014326/http://bloombergvillenow.org/'
    raw = 'http://wayback.archive-it.org/2950/20120103014326id_/http://bloombergvillenow.org/'
    assert raw_memento_uri(uri) == raw
    assert raw_memento_uri(raw) == raw
    assert raw_memento_uri(raw_memento_uri(uri)) == raw_memento_uri(uri)
    assert raw_memento_uri('http://wayback.archive-it.org/2950/20120103014326im_/http://a.example/x.png') == \
        'http://wayback.archive-it.org/2950/20120103014326id_/http://a.example/x.png'
    assert raw_memento_uri('http://example.com/page') == 'http://example.com/page'


def test_decode_body_charset_rules():
    latin = 'café'.encode('latin-1')
    assert decode_body(latin, 'text/html; charset=ISO-8859-1') == 'café'
    meta = b'<html><head><meta charset="iso-8859-1"></head><body>caf\xe9</body></html>'
    assert 'café' in decode_body(meta, 'text/html')
    assert decode_body(b'caf\xff', 'text/plain') == 'caf�'


def test_second_fetch_is_a_cache_hit(http_site, cache_dir, fetch_config):
    uri = http_site.add('/page', '<p>hello</p>')
    fetcher = MementoFetcher(cache_dir, fetch_config)
    first = fetcher.fetch(uri)
    second = fetcher.fetch(uri)
    assert not first.from_cache
    assert second.from_cache
    assert first.body == second.body == b'<p>hello</p>'
    assert http_site.hits('/page') == 1


def test_fetch_sends_user_agent(http_site, cache_dir):
    uri = http_site.add('/ua', 'ok')
    MementoFetcher(cache_dir, FetchConfig(retries=0, min_interval=0.0, user_agent='tester/1.0')).fetch(uri)
    assert http_site.requests_seen[-1] == ('/ua', 'tester/1.0')


def test_not_found_is_fetch_failed(http_site, cache_dir, fetch_config):
    fetcher = MementoFetcher(cache_dir, fetch_config)
    with pytest.raises(FetchFailedError) as excinfo:
        fetcher.fetch(http_site.url('/missing'))
    assert excinfo.value.status == 404
    assert http_site.url('/missing') not in fetcher.cache


def test_redirect_chain_records_final_uri(http_site, cache_dir, fetch_config):
    final = http_site.add('/b', 'content of b')
    start = http_site.redirect('/a', final)
    record = MementoFetcher(cache_dir, fetch_config).fetch(start)
    assert record.body == b'content of b'
    assert record.final_uri == final
    cache = ContentCache(cache_dir)
    assert final in cache and start in cache


def test_redirect_loop(http_site, cache_dir):
    loop = http_site.redirect('/loop', '/loop')
    fetcher = MementoFetcher(cache_dir, FetchConfig(retries=0, min_interval=0.0, max_redirects=3))
    with pytest.raises(RedirectLoopError):
        fetcher.fetch(loop)


def test_offline_cache_miss(cache_dir, fetch_config):
    fetcher = MementoFetcher(cache_dir, fetch_config, offline=True)
    with pytest.raises(FetchFailedError):
        fetcher.fetch('http://unreachable.invalid/')


def test_relative_uri_rejected(cache_dir, fetch_config):
    with pytest.raises(UsageError):
        MementoFetcher(cache_dir, fetch_config).fetch('just/a/path')


def test_cache_stores_identical_bytes(cache_dir):
    cache = ContentCache(cache_dir)
    stored = cache.put_bytes('warc:///20120101000000/http://a.example/', b'\x00\x01payload', 'text/html')
    hit = cache.get('warc:///20120101000000/http://a.example/')
    assert stored.from_cache and hit.from_cache
    assert hit.body == b'\x00\x01payload'
    assert cache.get('warc:///20990101000000/http://a.example/') is None


def test_cache_lookup_creates_no_directories(tmp_path):
    root = tmp_path / 'cache'
    cache = ContentCache(str(root))
    assert cache.get('http://a.example/') is None
    assert 'http://a.example/' not in cache
    assert not root.exists()

    cache.put_bytes('http://a.example/', b'payload')
    before = sorted(p for p in root.rglob('*') if p.is_dir())
    assert cache.get('http://b.example/') is None
    assert sorted(p for p in root.rglob('*') if p.is_dir()) == before
    assert cache.get('http://a.example/').body == b'payload'

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

import random
import threading
from datetime import datetime, timedelta, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from io import BytesIO

import pytest
from warcio.statusandheaders import StatusAndHeaders
from warcio.warcwriter import WARCWriter

from offtopic.archive.fetcher import FetchConfig

SAMPLE_LINK_TIMEMAP = '''<http://bloombergvillenow.org/>; rel="original",
<http://wayback.archive-it.org/2950/timemap/link/http://bloombergvillenow.org/>; rel="self"; type="application/link-format"; from="Tue, 03 Jan 2012 01:43:26 GMT"; until="Thu, 31 May 2012 20:08:41 GMT",
<http://wayback.archive-it.org/2950/http://bloombergvillenow.org/>; rel="timegate",
<http://wayback.archive-it.org/2950/20120103014326/http://bloombergvillenow.org/>; rel="first memento"; datetime="Tue, 03 Jan 2012 01:43:26 GMT",
<http://wayback.archive-it.org/2950/20120109025617/http://bloombergvillenow.org/>; rel="memento"; datetime="Mon, 09 Jan 2012 02:56:17 GMT",
<http://wayback.archive-it.org/2950/20120531200841/http://bloombergvillenow.org/>; rel="last memento"; datetime="Thu, 31 May 2012 20:08:41 GMT"
'''


class LocalSite:
    """Routes served by the local HTTP fixture: path -> (status, headers, body)."""

    def __init__(self, base_url, routes, requests_seen):
        self.base_url = base_url
        self.routes = routes
        self.requests_seen = requests_seen

    def url(self, path):
        return f'{self.base_url}{path}'

    def add(self, path, body, status=200, content_type='text/html; charset=utf-8'):
        if isinstance(body, str):
            body = body.encode('utf-8')
        self.routes[path] = (status, {'Content-Type': content_type}, body)
        return self.url(path)

    def redirect(self, path, location, status=302):
        self.routes[path] = (status, {'Location': location}, b'')
        return self.url(path)

    def hits(self, path):
        return sum(1 for p, _ in self.requests_seen if p == path)


@pytest.fixture
def http_site():
    routes, requests_seen = {}, []

    class Handler(BaseHTTPRequestHandler):

        def do_GET(self):
            requests_seen.append((self.path, self.headers.get('User-Agent')))
            status, headers, body = routes.get(self.path, (404, {'Content-Type': 'text/plain'}, b'not found'))
            self.send_response(status)
            for name, value in headers.items():
                self.send_header(name, value)
            self.send_header('Content-Length', str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, format, *args):
            pass

    server = ThreadingHTTPServer(('127.0.0.1', 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield LocalSite(f'http://127.0.0.1:{server.server_port}', routes, requests_seen)
    server.shutdown()
    server.server_close()


@pytest.fixture
def fetch_config():
    return FetchConfig(retries=0, min_interval=0.0, timeout=5.0)


@pytest.fixture
def cache_dir(tmp_path):
    return str(tmp_path / 'cache')


def write_warc(path, records, gzip=False):
    """records: (target, iso date, status, body, content type) tuples, written as WARC response records."""
    with open(path, 'wb') as output:
        writer = WARCWriter(output, gzip=gzip)
        for target, date, status, body, content_type in records:
            if isinstance(body, str):
                body = body.encode('utf-8')
            http_headers = StatusAndHeaders(f'{status} {"OK" if status == 200 else "Error"}',
                                            [('Content-Type', content_type), ('Content-Length', str(len(body)))],
                                            protocol='HTTP/1.0')
            record = writer.create_warc_record(target,
                                               'response',
                                               payload=BytesIO(body),
                                               length=len(body),
                                               http_headers=http_headers,
                                               warc_headers_dict={'WARC-Date': date})
            writer.write_record(record)
    return str(path)


@pytest.fixture
def warc_writer():
    return write_warc


_TOPICS = {
    'garden': 'tomato soil compost seed harvest mulch basil pepper watering greenhouse trellis pruning',
    'astronomy': 'telescope galaxy nebula orbit planet comet eclipse asteroid lunar spectrum observatory',
    'cooking': 'recipe oven flour butter simmer garlic onion saucepan braise dough knead seasoning',
    'sailing': 'mast hull rudder anchor harbor tide keel spinnaker mooring regatta starboard ballast',
    'chess': 'bishop knight rook pawn castling gambit checkmate endgame opening tournament rating',
    'cycling': 'saddle derailleur cadence peloton sprint climb gears helmet pedal tubeless criterium',
    'birding': 'warbler heron migration binoculars plumage nesting sparrow falcon wetland songbird',
    'pottery': 'clay kiln glaze wheel porcelain stoneware firing trimming slip earthenware bisque',
    'beekeeping': 'hive queen honey comb pollen nectar swarm apiary smoker drone brood frames',
    'climbing': 'belay carabiner boulder crag rappel harness chalk crimp anchor quickdraw summit',
}

_FILLER = 'the and of to in is for with on this that our from about are was we it as at by'.split()

SUSPENDED_PAGE = ('<html><head><title>Account Suspended</title></head><body>'
                  '<h1>Account Suspended</h1><p>This account has been suspended.</p></body></html>')


def _topic_page(rng, topic, n_paragraphs=5, words_per_paragraph=40):
    vocab = _TOPICS[topic].split()
    paragraphs = []
    for _ in range(n_paragraphs):
        words = [rng.choice(vocab) if rng.random() < 0.6 else rng.choice(_FILLER) for _ in range(words_per_paragraph)]
        paragraphs.append(f'<p>{" ".join(words).capitalize()}.</p>')
    nav = '<ul><li><a href="/">Home</a></li><li><a href="/about">About</a></li></ul>'
    return (f'<html><head><title>{topic}</title><script>var x = 1;</script></head>'
            f'<body>{nav}<h1>All about {topic}</h1>{"".join(paragraphs)}</body></html>')


def synthetic_collection(path, n_seeds=10, n_mementos=20, off_topic_share=0.1, seed=7):
    """A WARC with ``n_seeds`` targets of ``n_mementos`` captures each; about ``off_topic_share`` of the captures
    after the first are "account suspended" pages. Returns (warc path, URI-M -> is off-topic)."""
    rng = random.Random(seed)
    start = datetime(2012, 1, 3, 1, 43, 26, tzinfo=timezone.utc)
    records, truth = [], {}
    for topic in list(_TOPICS)[:n_seeds]:
        target = f'http://{topic}.example.org/'
        for i in range(n_mementos):
            captured = start + timedelta(days=i, minutes=rng.randrange(60))
            off_topic = i > 0 and rng.random() < off_topic_share
            body = SUSPENDED_PAGE if off_topic else _topic_page(rng, topic)
            records.append((target, captured.strftime('%Y-%m-%dT%H:%M:%SZ'), 200, body, 'text/html; charset=utf-8'))
            truth[f'warc:///{captured.strftime("%Y%m%d%H%M%S")}/{target}'] = off_topic
    return write_warc(path, records), truth


@pytest.fixture
def synthetic_warc(tmp_path):
    return synthetic_collection(tmp_path / 'collection.warc')

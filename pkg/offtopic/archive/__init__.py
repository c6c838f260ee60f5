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

from .cache import ContentCache, FetchRecord
from .fetcher import FetchConfig, HostThrottle, MementoFetcher, decode_body, fetch, raw_memento_uri
from .timemap import LinkEntry, first_memento, parse_link_format, parse_link_timemap, serialize_link_timemap
from .warc import ingest_warc
from .archiveit import archiveit_timemap_uri, discover_archiveit_seeds
from .source import CollectionSource, ResolvedSource, SourceKind, resolve_source

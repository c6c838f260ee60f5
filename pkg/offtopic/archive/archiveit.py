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
Seed discovery for public Archive-It collections.
"""

from typing import List

from bs4 import BeautifulSoup

from offtopic.archive.fetcher import MementoFetcher, decode_body
from offtopic.errors import EmptyCollectionError, FetchFailedError, ScrapeError, TotalFailureError, UsageError
from offtopic.utils.logging_utils import get_logger

__all__ = ['ARCHIVEIT_BASE_URL', 'ARCHIVEIT_WAYBACK_URL', 'discover_archiveit_seeds', 'archiveit_timemap_uri']

logger = get_logger(__file__)

ARCHIVEIT_BASE_URL = 'https://archive-it.org'
ARCHIVEIT_WAYBACK_URL = 'http://wayback.archive-it.org'

# statuses that mark the end of the listing on a page past the first
_END_OF_PAGES = (404, 410)


def archiveit_timemap_uri(collection_id: str, seed: str, wayback_url: str = ARCHIVEIT_WAYBACK_URL) -> str:
    return f'{wayback_url.rstrip("/")}/{collection_id}/timemap/link/{seed}'


def _scrape_seed_page(html: str, page_uri: str) -> List[str]:
    soup = BeautifulSoup(html, 'html.parser')
    seeds = []
    for item in soup.select('.result-item'):
        url_el = item.select_one('.url')
        if url_el is None:
            raise ScrapeError(page_uri, 'result item without a .url element')
        text = url_el.get_text(' ', strip=True)
        if text[:4].lower() == 'url:':
            text = text[4:].strip()
        if text:
            seeds.append(text)
    return seeds


def discover_archiveit_seeds(collection_id: str,
                             fetcher: MementoFetcher,
                             base_url: str = ARCHIVEIT_BASE_URL,
                             max_pages: int = 10000) -> List[str]:
    """Collect the seeds listed on a collection's public pages, in page order and without duplicates.

    Pages are requested until one adds no seed that was not already seen, or a page past the first is not
    found. Any other failure after the first page raises ``ScrapeError`` so a partial seed list is never
    mistaken for the whole collection.
    """
    collection_id = str(collection_id).strip()
    if not collection_id.isdigit():
        raise UsageError(f'Archive-It collection id must be a decimal integer, got {collection_id!r}')

    seeds = []
    seen = set()
    for page in range(1, max_pages + 1):
        page_uri = f'{base_url.rstrip("/")}/collections/{collection_id}?show=Sites&page={page}'
        try:
            record = fetcher.fetch(page_uri)
        except FetchFailedError as e:
            if page == 1 and e.status is None:
                raise TotalFailureError(f'Archive-It is unreachable for collection {collection_id}: {e}') from e
            if page == 1:
                raise EmptyCollectionError(f'Archive-It collection {collection_id} is unavailable: {e}') from e
            if e.status in _END_OF_PAGES:
                break
            raise ScrapeError(page_uri, f'page {page} could not be fetched after {len(seeds)} seeds: {e}') from e
        page_seeds = _scrape_seed_page(decode_body(record.body, record.content_type), page_uri)
        if page == 1 and not page_seeds:
            raise ScrapeError(page_uri, 'no .result-item entries on the first page')
        new_seeds = [s for s in dict.fromkeys(page_seeds) if s not in seen]
        if not new_seeds:
            break
        seen.update(new_seeds)
        seeds.extend(new_seeds)
        print(f'[page {page}] collection {collection_id}: {len(new_seeds)} new seeds')

    if not seeds:
        raise EmptyCollectionError(f'Archive-It collection {collection_id} lists no seeds')
    logger.info(f'collection {collection_id}: {len(seeds)} seeds')
    return seeds

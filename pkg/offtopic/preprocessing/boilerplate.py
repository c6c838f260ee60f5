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
Boilerplate removal.

The default remover groups the document's character data by nearest block-level ancestor and drops every block
that is mostly links, or that is short and poor in stop words. A document made only of short blocks, none of
them link lists (an "account suspended" notice, say), keeps all of its blocks.
"""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from bs4 import BeautifulSoup, Comment, Doctype, NavigableString, ProcessingInstruction

from offtopic.archive.fetcher import decode_body
from offtopic.preprocessing.stopwords import DEFAULT_STOPWORD_LIST_ID, get_stopwords
from offtopic.preprocessing.tokenizer import split_words

__all__ = ['BoilerplateRemover', 'BlockHeuristicRemover', 'FullTextExtractor', 'get_remover', 'remove_boilerplate']

_TAG_RE = re.compile(r'<\s*(?:[a-zA-Z][\w:-]*|!--|!doctype)[^>]*>', re.IGNORECASE)

NON_CONTENT_TAGS = ('head', 'script', 'noscript', 'style', 'template', 'svg', 'canvas', 'iframe', 'object',
                    'embed', 'select', 'option', 'datalist', 'button')

BLOCK_TAGS = frozenset([
    'address', 'article', 'aside', 'blockquote', 'body', 'caption', 'center', 'dd', 'details', 'dialog', 'div',
    'dl', 'dt', 'fieldset', 'figcaption', 'figure', 'footer', 'form', 'h1', 'h2', 'h3', 'h4', 'h5', 'h6',
    'header', 'hr', 'html', 'li', 'main', 'nav', 'ol', 'p', 'pre', 'section', 'summary', 'table', 'tbody', 'td',
    'tfoot', 'th', 'thead', 'tr', 'ul'
])

_SKIPPED_STRINGS = (Comment, Doctype, ProcessingInstruction)


def looks_like_html(text: str) -> bool:
    return _TAG_RE.search(text) is not None


def _content_soup(html: str) -> BeautifulSoup:
    soup = BeautifulSoup(html, 'html.parser')
    for comment in soup.find_all(string=lambda s: isinstance(s, Comment)):
        comment.extract()
    for tag in soup.find_all(NON_CONTENT_TAGS):
        tag.decompose()
    return soup


@dataclass
class TextBlock:
    pieces: List[str] = field(default_factory=list)
    link_words: int = 0

    @property
    def text(self) -> str:
        return ' '.join(' '.join(self.pieces).split())


def segment_blocks(soup: BeautifulSoup) -> List[TextBlock]:
    blocks: Dict[int, TextBlock] = {}
    for string in soup.find_all(string=True):
        if isinstance(string, _SKIPPED_STRINGS) or not isinstance(string, NavigableString):
            continue
        if not string.strip():
            continue
        in_link = False
        container = None
        for parent in string.parents:
            if parent.name == 'a':
                in_link = True
            if parent.name in BLOCK_TAGS or parent.parent is None:
                container = parent
                break
        block = blocks.setdefault(id(container), TextBlock())
        block.pieces.append(str(string))
        if in_link:
            block.link_words += len(split_words(str(string)))
    return list(blocks.values())


class BoilerplateRemover(ABC):

    @abstractmethod
    def extract(self, html: str) -> str:
        """Return the content text of an HTML document."""


class FullTextExtractor(BoilerplateRemover):
    """Keeps every text block; only non-content elements are removed."""

    def extract(self, html: str) -> str:
        return '\n'.join(b.text for b in segment_blocks(_content_soup(html)) if b.text)


@dataclass
class BlockHeuristicRemover(BoilerplateRemover):
    max_link_density: float = 0.5
    min_stopword_density: float = 0.2
    min_words: int = 10
    stopword_list_id: str = DEFAULT_STOPWORD_LIST_ID

    def extract(self, html: str) -> str:
        stopwords = get_stopwords(self.stopword_list_id)
        kept, link_blocks, short_blocks = [], 0, []
        for block in segment_blocks(_content_soup(html)):
            words = split_words(block.text)
            if not words:
                continue
            link_density = block.link_words / len(words)
            stopword_density = sum(w in stopwords for w in words) / len(words)
            if link_density > self.max_link_density:
                link_blocks += 1
            elif stopword_density < self.min_stopword_density and len(words) < self.min_words:
                short_blocks.append(block.text)
            else:
                kept.append(block.text)
        if not kept and not link_blocks:
            kept = short_blocks
        return '\n'.join(kept)


_REMOVERS = {
    'heuristic-blocks': BlockHeuristicRemover,
    'none': FullTextExtractor,
}


def get_remover(method: str = 'heuristic-blocks', **kwargs) -> BoilerplateRemover:
    if method not in _REMOVERS:
        raise NotImplementedError(f'boilerplate method {method!r} is not supported')
    return _REMOVERS[method](**kwargs)


def remove_boilerplate(html: bytes,
                       charset_hint: Optional[str] = None,
                       method: str = 'heuristic-blocks',
                       content_type: Optional[str] = None,
                       **kwargs) -> str:
    """Content text of ``html``. Input without markup is returned decoded and otherwise untouched."""
    text = html if isinstance(html, str) else decode_body(html, content_type=content_type, charset=charset_hint)
    if not looks_like_html(text):
        return text
    return get_remover(method, **kwargs).extract(text)

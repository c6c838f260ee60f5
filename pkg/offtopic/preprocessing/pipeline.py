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
Turn a fetched memento into a MementoDocument carrying the derivations the configured measures need.
"""

from enum import Enum
from typing import Iterable

from offtopic.archive.cache import FetchRecord
from offtopic.preprocessing.boilerplate import remove_boilerplate
from offtopic.preprocessing.config import PreprocessConfig
from offtopic.preprocessing.tokenizer import term_frequencies, tokenize
from offtopic.protocol import MementoDocument, MementoRef, PreprocessingFlags

__all__ = ['Level', 'preprocess', 'flags_for']


class Level(str, Enum):
    """How far a document is processed; each level implies the ones before it."""
    RAW = 'raw'
    TEXT = 'text'
    TOKENS = 'tokens'
    TF = 'tf'


_ORDER = [Level.RAW, Level.TEXT, Level.TOKENS, Level.TF]


def flags_for(cfg: PreprocessConfig) -> PreprocessingFlags:
    return PreprocessingFlags(removed_boilerplate=cfg.boilerplate != 'none',
                              tokenized=True,
                              stemmed=cfg.stemmer != 'none')


def preprocess(ref: MementoRef, record: FetchRecord, cfg: PreprocessConfig, levels: Iterable[Level]) -> MementoDocument:
    depth = max((_ORDER.index(Level(level)) for level in levels), default=0)
    body = record.body or b''
    if depth == 0:
        return MementoDocument(ref=ref, raw_bytes=body)

    remover_kwargs = {'stopword_list_id': cfg.stopword_list_id} if cfg.boilerplate == 'heuristic-blocks' else {}
    text = remove_boilerplate(body, method=cfg.boilerplate, content_type=record.content_type, **remover_kwargs)
    flags = PreprocessingFlags(removed_boilerplate=cfg.boilerplate != 'none')
    if depth == 1:
        return MementoDocument(ref=ref, raw_bytes=body, extracted_text=text, preprocessing_flags=flags)

    tokens = tokenize(text, cfg)
    flags = flags_for(cfg)
    tf = term_frequencies(tokens) if depth >= 3 else None
    return MementoDocument(ref=ref,
                           raw_bytes=body,
                           extracted_text=text,
                           tokens=tuple(tokens),
                           term_frequencies=tf,
                           preprocessing_flags=flags)

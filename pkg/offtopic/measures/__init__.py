# Copyright 2024 Bytedance Ltd. and/or its affiliates
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
Measure registry. Every measure scores the first memento ``doc_f`` against a considered memento ``doc_m``;
the corpus-based ones (cosine, gensim_lsi) look both documents up in vectors built over the whole TimeMap.
"""

from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence

from offtopic.archive.fetcher import decode_body
from offtopic.preprocessing.pipeline import Level
from offtopic.protocol import MementoDocument

from . import count, sets, simhash, vectors
from .spec import MEASURE_IDS, MEASURE_SPECS, Direction, MeasureSpec, apply_threshold, get_measure_spec
from .vectors import DEFAULT_LSI_TOPICS, DocumentVector

__all__ = [
    'MEASURE_IDS', 'MEASURE_SPECS', 'Direction', 'MeasureSpec', 'apply_threshold', 'get_measure_spec',
    'required_level', 'build_corpus', 'compute_score', 'DocumentVector'
]

Corpus = Mapping[str, DocumentVector]

_LEVELS = {
    'bytecount': Level.RAW,
    'simhash-raw': Level.RAW,
    'wordcount': Level.TOKENS,
    'jaccard': Level.TOKENS,
    'sorensen': Level.TOKENS,
    'cosine': Level.TOKENS,
    'gensim_lsi': Level.TOKENS,
    'simhash-tf': Level.TF,
}


def required_level(measure_id: str) -> Level:
    get_measure_spec(measure_id)
    return _LEVELS[measure_id]


def build_corpus(measure_id: str,
                 docs: Mapping[str, Sequence[str]],
                 lsi_topics: int = DEFAULT_LSI_TOPICS) -> Optional[Dict[str, DocumentVector]]:
    """Vectors for every document of one TimeMap, keyed like ``docs``; None for measures without a corpus."""
    keys = list(docs)
    if measure_id == 'cosine':
        vecs = vectors.tfidf_vectors([docs[k] for k in keys])
    elif measure_id == 'gensim_lsi':
        vecs = vectors.lsi_vectors([docs[k] for k in keys], lsi_topics)
    else:
        return None
    return dict(zip(keys, vecs))


@lru_cache(maxsize=64)
def _raw_fingerprint(raw_bytes: bytes) -> int:
    return simhash.simhash_raw(decode_body(raw_bytes))


@lru_cache(maxsize=64)
def _tf_fingerprint(tf_items: frozenset) -> int:
    return simhash.simhash_tf(dict(tf_items))


def compute_score(measure_id: str, doc_f: MementoDocument, doc_m: MementoDocument, corpus: Corpus = None):
    if measure_id == 'bytecount':
        return count.count_distance(count.byte_count(doc_f), count.byte_count(doc_m))
    elif measure_id == 'wordcount':
        return count.count_distance(count.word_count(doc_f), count.word_count(doc_m))
    elif measure_id == 'jaccard':
        return sets.jaccard_distance(doc_f.tokens, doc_m.tokens)
    elif measure_id == 'sorensen':
        return sets.sorensen_distance(doc_f.tokens, doc_m.tokens)
    elif measure_id == 'simhash-tf':
        assert doc_f.term_frequencies is not None and doc_m.term_frequencies is not None, 'simhash-tf needs tf maps'
        return simhash.hamming(_tf_fingerprint(frozenset(doc_f.term_frequencies.items())),
                               _tf_fingerprint(frozenset(doc_m.term_frequencies.items())))
    elif measure_id == 'simhash-raw':
        return simhash.hamming(_raw_fingerprint(doc_f.raw_bytes), _raw_fingerprint(doc_m.raw_bytes))
    elif measure_id in ('cosine', 'gensim_lsi'):
        assert corpus is not None, f'{measure_id} needs the TimeMap corpus'
        return vectors.cosine(corpus[doc_f.ref.uri_m], corpus[doc_m.ref.uri_m])
    else:
        raise NotImplementedError(f'measure {measure_id} is not implemented')

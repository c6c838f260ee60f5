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
Vector-space measures: TF-IDF and LSI document vectors over one TimeMap, compared by cosine.
"""

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import List, Mapping, Sequence

import numpy as np
from scipy.linalg import svd
from sklearn.feature_extraction.text import TfidfVectorizer

from offtopic.errors import ContractViolationError, UndefinedCorpusError, UndefinedScoreError, UsageError
from offtopic.utils.logging_utils import get_logger

__all__ = ['DocumentVector', 'cosine', 'tfidf_matrix', 'tfidf_vectors', 'lsi_vectors', 'DEFAULT_LSI_TOPICS']

logger = get_logger(__file__)

DEFAULT_LSI_TOPICS = 10


@dataclass(frozen=True)
class DocumentVector:
    entries: Mapping[int, float]
    basis: str
    dimension: int = field(default=0, compare=False)

    def __post_init__(self):
        if not isinstance(self.entries, MappingProxyType):
            object.__setattr__(self, 'entries', MappingProxyType(dict(self.entries)))
        assert all(math.isfinite(w) for w in self.entries.values()), 'vector weights must be finite'
        if self.basis.startswith('lsi'):
            assert self.dimension == int(self.basis[4:-1]), \
                f'an {self.basis} vector must have {self.basis[4:-1]} dimensions, got {self.dimension}'

    @classmethod
    def from_dense(cls, row: np.ndarray, basis: str) -> 'DocumentVector':
        return cls(entries={int(i): float(row[i]) for i in np.flatnonzero(row)}, basis=basis, dimension=len(row))

    def squared_norm(self) -> float:
        return math.fsum(w * w for w in self.entries.values())


def cosine(v_f: DocumentVector, v_m: DocumentVector) -> float:
    if v_f.basis != v_m.basis:
        raise ContractViolationError(f'cannot compare a {v_f.basis} vector with a {v_m.basis} vector')
    nf, nm = v_f.squared_norm(), v_m.squared_norm()
    if nf == 0 or nm == 0:
        raise UndefinedScoreError('cosine of a zero vector')
    small, large = sorted((v_f.entries, v_m.entries), key=len)
    dot = math.fsum(w * large[i] for i, w in small.items() if i in large)
    # sqrt(nf * nm) keeps cosine(v, v) at exactly 1.0
    return min(1.0, max(0.0, dot / math.sqrt(nf * nm)))


def _identity(tokens):
    return tokens


def tfidf_matrix(timemap_docs: Sequence[Sequence[str]]):
    """Rows are L2-normalized tf * (ln((1 + N) / (1 + df)) + 1) weights."""
    vectorizer = TfidfVectorizer(analyzer=_identity, smooth_idf=True, sublinear_tf=False, norm='l2')
    try:
        matrix = vectorizer.fit_transform([list(doc) for doc in timemap_docs])
    except ValueError as e:
        raise UndefinedCorpusError(f'every document of the corpus is empty: {e}') from e
    return matrix, vectorizer


def tfidf_vectors(timemap_docs: Sequence[Sequence[str]]) -> List[DocumentVector]:
    matrix, _ = tfidf_matrix(timemap_docs)
    matrix = matrix.tocsr()
    vectors = []
    for row in range(matrix.shape[0]):
        start, end = matrix.indptr[row], matrix.indptr[row + 1]
        entries = dict(zip(matrix.indices[start:end].tolist(), matrix.data[start:end].tolist()))
        vectors.append(DocumentVector(entries=entries, basis='tfidf', dimension=matrix.shape[1]))
    return vectors


def lsi_vectors(timemap_docs: Sequence[Sequence[str]], k_topics: int = DEFAULT_LSI_TOPICS) -> List[DocumentVector]:
    """Project the TF-IDF documents onto the top ``k_topics`` left singular vectors of the term-document matrix.

    The SVD is a dense LAPACK decomposition, so repeated runs give identical vectors.
    """
    if k_topics < 1:
        raise UsageError(f'LSI needs at least one topic, got {k_topics}')
    matrix, _ = tfidf_matrix(timemap_docs)
    docs_by_terms = matrix.toarray()
    if not np.any(docs_by_terms):
        raise UndefinedCorpusError('the term-document matrix is all zeros')

    u, sigma, _ = svd(docs_by_terms.T, full_matrices=False, lapack_driver='gesdd')
    tol = sigma.max() * max(docs_by_terms.shape) * np.finfo(sigma.dtype).eps
    rank = int(np.sum(sigma > tol))
    k = min(k_topics, rank)
    if k < k_topics:
        logger.warning(f'LSI topics clamped from {k_topics} to the matrix rank {k}')

    projected = docs_by_terms @ u[:, :k]
    basis = f'lsi({k})'
    return [DocumentVector.from_dense(row, basis) for row in projected]

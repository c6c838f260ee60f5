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
Charikar Simhash over term frequencies or over the character 4-grams of the raw content.
"""

from typing import Iterable, Mapping, Tuple

import mmh3
import numpy as np

from offtopic.errors import UndefinedFingerprintError

__all__ = ['FINGERPRINT_BITS', 'feature_hash', 'charikar_fingerprint', 'simhash_tf', 'simhash_raw', 'char_ngrams',
           'hamming']

FINGERPRINT_BITS = 64
NGRAM_SIZE = 4
HASH_SEED = 0

_BIT_POSITIONS = np.arange(FINGERPRINT_BITS, dtype=np.uint64)
_CHUNK = 8192


def feature_hash(feature: str) -> int:
    return mmh3.hash64(feature, seed=HASH_SEED, signed=False)[0]


def charikar_fingerprint(weighted_features: Iterable[Tuple[str, int]]) -> int:
    """Bit i of the result is set iff the weights of features whose hash has bit i set outweigh the others."""
    features = list(weighted_features)
    if not features:
        raise UndefinedFingerprintError('no features to fingerprint')
    accumulator = np.zeros(FINGERPRINT_BITS, dtype=np.int64)
    for start in range(0, len(features), _CHUNK):
        chunk = features[start:start + _CHUNK]
        hashes = np.fromiter((feature_hash(f) for f, _ in chunk), dtype=np.uint64, count=len(chunk))
        weights = np.fromiter((w for _, w in chunk), dtype=np.int64, count=len(chunk))
        bits = ((hashes[:, None] >> _BIT_POSITIONS) & np.uint64(1)).astype(np.int64)
        accumulator += ((2 * bits - 1) * weights[:, None]).sum(axis=0)
    return sum(1 << i for i in np.flatnonzero(accumulator > 0).tolist())


def simhash_tf(tf: Mapping[str, int]) -> int:
    if not tf:
        raise UndefinedFingerprintError('empty term frequency map')
    return charikar_fingerprint(tf.items())


def char_ngrams(text: str, n: int = NGRAM_SIZE):
    return [text[i:i + n] for i in range(len(text) - n + 1)]


def simhash_raw(text: str) -> int:
    if len(text) < NGRAM_SIZE:
        raise UndefinedFingerprintError(f'content shorter than {NGRAM_SIZE} characters')
    return charikar_fingerprint((gram, 1) for gram in char_ngrams(text))


def hamming(h1: int, h2: int) -> int:
    return bin(h1 ^ h2).count('1')

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
Tokenization: lowercase, split on non-alphanumerics, drop stop words, Porter-stem.
"""

import re
from collections import Counter
from functools import lru_cache
from typing import Dict, List, Sequence

from nltk.stem.porter import PorterStemmer

from offtopic.preprocessing.config import PreprocessConfig
from offtopic.preprocessing.stopwords import get_stopwords

__all__ = ['split_words', 'stem', 'tokenize', 'term_frequencies']

# maximal runs of unicode letters and digits
_WORD_RE = re.compile(r'[^\W_]+')

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def split_words(text: str) -> List[str]:
    return _WORD_RE.findall(text.lower())


@lru_cache(maxsize=2**16)
def stem(word: str) -> str:
    return _stemmer.stem(word, to_lowercase=False)


def tokenize(text: str, cfg: PreprocessConfig = None) -> List[str]:
    cfg = cfg or PreprocessConfig()
    words = split_words(text)
    if cfg.min_token_length > 1:
        words = [w for w in words if len(w) >= cfg.min_token_length]
    if cfg.remove_stopwords:
        stopwords = get_stopwords(cfg.stopword_list_id)
        words = [w for w in words if w not in stopwords]
    if cfg.stemmer == 'porter':
        words = [stem(w) for w in words]
    return words


def term_frequencies(tokens: Sequence[str]) -> Dict[str, int]:
    return dict(Counter(tokens))

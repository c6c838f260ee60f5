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

from dataclasses import dataclass

from offtopic.errors import UsageError
from offtopic.preprocessing.stopwords import DEFAULT_STOPWORD_LIST_ID, get_stopwords

__all__ = ['PreprocessConfig', 'STEMMERS', 'BOILERPLATE_METHODS']

STEMMERS = ('porter', 'none')
BOILERPLATE_METHODS = ('heuristic-blocks', 'none')


@dataclass(frozen=True)
class PreprocessConfig:
    stopword_list_id: str = DEFAULT_STOPWORD_LIST_ID
    stemmer: str = 'porter'
    boilerplate: str = 'heuristic-blocks'
    min_token_length: int = 1
    remove_stopwords: bool = True

    def __post_init__(self):
        if self.stemmer not in STEMMERS:
            raise UsageError(f'preprocess.stemmer must be one of {STEMMERS}, got {self.stemmer!r}')
        if self.boilerplate not in BOILERPLATE_METHODS:
            raise UsageError(f'preprocess.boilerplate must be one of {BOILERPLATE_METHODS}, got {self.boilerplate!r}')
        if int(self.min_token_length) < 1:
            raise UsageError(f'preprocess.min_token_length must be >= 1, got {self.min_token_length}')
        get_stopwords(self.stopword_list_id)

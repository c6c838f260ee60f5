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
Set distances over the distinct tokens of two documents.
"""

from typing import Iterable

from offtopic.errors import UndefinedScoreError

__all__ = ['jaccard_distance', 'sorensen_distance']


def _as_sets(tokens_f: Iterable[str], tokens_m: Iterable[str]):
    a, b = set(tokens_f), set(tokens_m)
    if not a and not b:
        raise UndefinedScoreError('both documents have no tokens')
    return a, b


def jaccard_distance(tokens_f: Iterable[str], tokens_m: Iterable[str]) -> float:
    a, b = _as_sets(tokens_f, tokens_m)
    union = len(a | b)
    return (union - len(a & b)) / union


def sorensen_distance(tokens_f: Iterable[str], tokens_m: Iterable[str]) -> float:
    a, b = _as_sets(tokens_f, tokens_m)
    return 1 - 2 * len(a & b) / (len(a) + len(b))

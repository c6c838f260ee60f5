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
Byte count and word count: the relative shrinkage of the considered memento against the first one.
"""

from offtopic.errors import DegenerateFirstMementoError
from offtopic.protocol import MementoDocument

__all__ = ['count_distance', 'byte_count', 'word_count']


def count_distance(count_f: int, count_m: int) -> float:
    assert count_f >= 0 and count_m >= 0, f'counts must be non-negative, got {count_f}, {count_m}'
    if count_f == 0:
        raise DegenerateFirstMementoError('the first memento has a count of 0')
    if count_m < count_f:
        return (count_m - count_f) / count_f
    return 0.0


def byte_count(doc: MementoDocument) -> int:
    return len(doc.raw_bytes)


def word_count(doc: MementoDocument) -> int:
    assert doc.tokens is not None, f'{doc.ref.uri_m} was not tokenized'
    return len(doc.tokens)

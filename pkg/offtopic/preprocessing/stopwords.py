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
Embedded English stop lists. A list id names one frozen list; changing a list means adding a new id.

``english-v1`` is a 175-word English function-word list with contractions already split the way the tokenizer
splits them ("don't" -> "don", "t").
"""

from typing import FrozenSet

from offtopic.errors import UsageError

__all__ = ['DEFAULT_STOPWORD_LIST_ID', 'get_stopwords']

DEFAULT_STOPWORD_LIST_ID = 'english-v1'

_ENGLISH_V1 = frozenset("""
a about above across after again against ain all along also although am among an and any are aren around as at
be because been before being below between both but by
can could couldn
d did didn do does doesn doing don down during
each
few for from further
had hadn has hasn have haven having he her here hers herself him himself his how
i if in into is isn it its itself
just
ll
m ma may me might mightn more most must mustn my myself
needn no nor not now
o of off on once only or other our ours ourselves out over own
re
s same shall shan she should shouldn since so some such
t than that the their theirs them themselves then there these they this those though through to too
under unless until up upon us
ve very
was wasn we were weren what when where whether which while who whom whose why will with within without won would
wouldn
y yet you your yours yourself yourselves
""".split())

_STOPWORD_LISTS = {
    DEFAULT_STOPWORD_LIST_ID: _ENGLISH_V1,
}


def get_stopwords(list_id: str = DEFAULT_STOPWORD_LIST_ID) -> FrozenSet[str]:
    if list_id not in _STOPWORD_LISTS:
        raise UsageError(f'unknown stop list {list_id!r}, available: {", ".join(sorted(_STOPWORD_LISTS))}')
    return _STOPWORD_LISTS[list_id]

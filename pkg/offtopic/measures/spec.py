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
Measure descriptions: default thresholds, off-topic direction and score ranges.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple, Union

from offtopic.errors import ContractViolationError, UsageError
from offtopic.protocol import TopicStatus

__all__ = ['Direction', 'MeasureSpec', 'MEASURE_SPECS', 'MEASURE_IDS', 'get_measure_spec', 'apply_threshold']

_TOLERANCE = 1e-9


class Direction(str, Enum):
    SCORE_BELOW_THRESHOLD = 'score_below_threshold'
    SCORE_ABOVE_THRESHOLD = 'score_above_threshold'


@dataclass(frozen=True)
class MeasureSpec:
    measure_id: str
    default_threshold: Union[float, int]
    offtopic_direction: Direction
    requires_preprocessing: bool
    # (fully equivalent score, completely dissimilar score)
    score_range: Tuple[Union[float, int], Union[float, int]]
    corpus_based: bool = False
    integer_scores: bool = False

    @property
    def equivalent_score(self):
        return self.score_range[0]

    @property
    def lower(self):
        return min(self.score_range)

    @property
    def upper(self):
        return max(self.score_range)

    def in_range(self, value: float) -> bool:
        return self.lower - _TOLERANCE <= value <= self.upper + _TOLERANCE

    def check_threshold(self, threshold: float):
        if threshold is None or not math.isfinite(threshold) or not self.in_range(threshold):
            raise UsageError(f'threshold {threshold} for {self.measure_id} is outside [{self.lower}, {self.upper}]')


MEASURE_SPECS: Dict[str, MeasureSpec] = {
    spec.measure_id: spec for spec in [
        MeasureSpec('bytecount', -0.39, Direction.SCORE_BELOW_THRESHOLD, False, (0.0, -1.0)),
        MeasureSpec('wordcount', -0.70, Direction.SCORE_BELOW_THRESHOLD, True, (0.0, -1.0)),
        MeasureSpec('jaccard', 0.94, Direction.SCORE_ABOVE_THRESHOLD, True, (0.0, 1.0)),
        MeasureSpec('sorensen', 0.88, Direction.SCORE_ABOVE_THRESHOLD, True, (0.0, 1.0)),
        MeasureSpec('simhash-tf', 28, Direction.SCORE_ABOVE_THRESHOLD, True, (0, 64), integer_scores=True),
        MeasureSpec('simhash-raw', 25, Direction.SCORE_ABOVE_THRESHOLD, False, (0, 64), integer_scores=True),
        MeasureSpec('cosine', 0.12, Direction.SCORE_BELOW_THRESHOLD, True, (1.0, 0.0), corpus_based=True),
        MeasureSpec('gensim_lsi', 0.10, Direction.SCORE_BELOW_THRESHOLD, True, (1.0, 0.0), corpus_based=True),
    ]
}

MEASURE_IDS = tuple(MEASURE_SPECS)


def get_measure_spec(measure_id: str) -> MeasureSpec:
    if measure_id not in MEASURE_SPECS:
        raise UsageError(f'unknown measure {measure_id!r}, expected one of {", ".join(MEASURE_IDS)}')
    return MEASURE_SPECS[measure_id]


def apply_threshold(spec: MeasureSpec, score: float, threshold: Optional[float] = None) -> TopicStatus:
    """Strict comparison; a score equal to the threshold is on-topic."""
    if score is None or not math.isfinite(score) or not spec.in_range(score):
        raise ContractViolationError(f'{spec.measure_id} score {score} is outside [{spec.lower}, {spec.upper}]')
    threshold = spec.default_threshold if threshold is None else threshold
    if spec.offtopic_direction is Direction.SCORE_BELOW_THRESHOLD:
        off_topic = score < threshold
    else:
        off_topic = score > threshold
    return TopicStatus.OFF_TOPIC if off_topic else TopicStatus.ON_TOPIC

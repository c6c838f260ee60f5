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
Confusion counts, F1 and accuracy with off-topic as the positive class.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from offtopic.errors import CoverageError, UsageError
from offtopic.evaluation.gold import GoldLabel
from offtopic.protocol import TopicStatus
from offtopic.utils.logging_utils import get_logger

__all__ = ['ConfusionCounts', 'confusion', 'f1', 'accuracy', 'combine_verdicts', 'combine_measures']

logger = get_logger(__file__)

Verdict = Union[TopicStatus, str, bool]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        assert min(self.tp, self.fp, self.fn, self.tn) >= 0, f'counts must be non-negative: {self}'

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> Dict[str, int]:
        return {'tp': self.tp, 'fp': self.fp, 'fn': self.fn, 'tn': self.tn}


def _is_off_topic(verdict: Verdict) -> bool:
    if isinstance(verdict, bool):
        return verdict
    return TopicStatus(verdict) is TopicStatus.OFF_TOPIC


def confusion(verdicts: Mapping[str, Verdict],
              labels: Iterable[GoldLabel],
              missing: List[str] = None) -> ConfusionCounts:
    """Tally verdicts against gold labels. Labels without a verdict are excluded and listed in ``missing``."""
    tp = fp = fn = tn = 0
    excluded = []
    for label in labels:
        if label.uri_m not in verdicts:
            excluded.append(label.uri_m)
            continue
        predicted = _is_off_topic(verdicts[label.uri_m])
        if label.off_topic:
            tp, fn = (tp + 1, fn) if predicted else (tp, fn + 1)
        else:
            fp, tn = (fp + 1, tn) if predicted else (fp, tn + 1)
    if excluded:
        logger.warning(f'{len(excluded)} labeled mementos have no verdict and were excluded')
        if missing is not None:
            missing.extend(excluded)
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def f1(c: ConfusionCounts) -> float:
    """2TP / (2TP + FP + FN); NaN when no memento is off-topic in either the gold data or the verdicts."""
    denominator = 2 * c.tp + c.fp + c.fn
    if denominator == 0:
        return float('nan')
    return 2 * c.tp / denominator


def accuracy(c: ConfusionCounts) -> float:
    if c.total == 0:
        return float('nan')
    return (c.tp + c.tn) / c.total


def combine_verdicts(verdict_sets: Sequence[Mapping[str, Verdict]]) -> Dict[str, TopicStatus]:
    """Logical or: a memento is off-topic if any verdict map says so. All maps must cover the same URI-Ms."""
    if len(verdict_sets) < 2:
        raise UsageError(f'combining needs at least two verdict maps, got {len(verdict_sets)}')
    universe = set(verdict_sets[0])
    for i, verdicts in enumerate(verdict_sets[1:], start=1):
        if set(verdicts) != universe:
            diff = universe.symmetric_difference(verdicts)
            raise CoverageError(f'verdict map {i} covers a different set of mementos ({len(diff)} differ)')
    return {
        uri_m: TopicStatus.OFF_TOPIC if any(_is_off_topic(v[uri_m]) for v in verdict_sets) else TopicStatus.ON_TOPIC
        for uri_m in verdict_sets[0]
    }


def combine_measures(verdict_sets: Sequence[Mapping[str, Verdict]],
                     labels: Iterable[GoldLabel]) -> Tuple[ConfusionCounts, float]:
    counts = confusion(combine_verdicts(verdict_sets), labels)
    return counts, f1(counts)

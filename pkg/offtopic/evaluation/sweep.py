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
Threshold calibration.

Scores come from a score file written by the detector; every threshold of a measure's grid classifies every
labeled memento, and the curve of F1/accuracy over thresholds is kept. The best threshold has the highest F1;
ties go to the threshold marking the fewest mementos off-topic, then to the one nearest the measure's
fully-equivalent score.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from offtopic.errors import CoverageError, UsageError
from offtopic.evaluation.gold import GoldLabel
from offtopic.evaluation.metrics import ConfusionCounts, accuracy, f1
from offtopic.measures.spec import MEASURE_SPECS, Direction, MeasureSpec, get_measure_spec
from offtopic.protocol import TimeMap
from offtopic.utils.logging_utils import get_logger
from offtopic.utils.py_functional import append_to_dict

__all__ = [
    'SweepSpec', 'SweepPoint', 'SweepResult', 'CombinedResult', 'LSI_TOPIC_GRID', 'load_scores', 'sweep',
    'combine_grid', 'sweep_lsi_topics', 'write_curve', 'curve_frame'
]

logger = get_logger(__file__)

LSI_TOPIC_GRID = (2, 3, 5, 7, 10, 25, 50, 100)
CURVE_COLUMNS = ['measure', 'threshold', 'f1', 'accuracy', 'tp', 'fp', 'fn', 'tn']
_F1_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    measure_id: str
    lower: float
    upper: float
    step: float

    def __post_init__(self):
        if self.step <= 0 or self.upper < self.lower:
            raise UsageError(f'bad sweep range [{self.lower}, {self.upper}] step {self.step}')

    @classmethod
    def default(cls, measure_id: str) -> 'SweepSpec':
        spec = get_measure_spec(measure_id)
        step = 1 if spec.integer_scores else 0.01
        return cls(measure_id=measure_id, lower=spec.lower, upper=spec.upper, step=step)

    def thresholds(self) -> np.ndarray:
        n = int(round((self.upper - self.lower) / self.step)) + 1
        return np.round(self.lower + self.step * np.arange(n), 10)


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    f1: float
    accuracy: float
    counts: ConfusionCounts

    @property
    def n_off_topic(self) -> int:
        return self.counts.tp + self.counts.fp


@dataclass
class SweepResult:
    measure_id: str
    curve: List[SweepPoint]
    best: SweepPoint
    excluded: List[str] = field(default_factory=list)


@dataclass
class CombinedResult:
    measure_ids: Tuple[str, str]
    thresholds: Tuple[float, float]
    counts: ConfusionCounts
    f1: float
    accuracy: float
    grid: Optional[pd.DataFrame] = None


def load_scores(path: str) -> Dict[str, Dict[str, float]]:
    """measure -> URI-M -> score, from a ``uri_t, uri_m, measure, score`` file."""
    frame = pd.read_csv(path, dtype={'uri_t': str, 'uri_m': str, 'measure': str})
    missing = [c for c in ('uri_m', 'measure', 'score') if c not in frame.columns]
    if missing:
        raise UsageError(f'{path} is not a score file, missing columns {missing}')
    scores: Dict[str, Dict[str, float]] = {}
    for measure_id, group in frame.groupby('measure', sort=False):
        get_measure_spec(measure_id)
        scores[measure_id] = dict(zip(group['uri_m'], group['score'].astype(float)))
    return scores


def _labeled_arrays(scores: Mapping[str, float], labels: Sequence[GoldLabel]):
    excluded = [g.uri_m for g in labels if g.uri_m not in scores]
    if excluded:
        logger.warning(f'{len(excluded)} labeled mementos have no score and were excluded')
    kept = [g for g in labels if g.uri_m in scores]
    s = np.array([scores[g.uri_m] for g in kept], dtype=float)
    y = np.array([g.off_topic for g in kept], dtype=bool)
    return s, y, excluded


def _off_topic_matrix(s: np.ndarray, thresholds: np.ndarray, direction: Direction) -> np.ndarray:
    if direction is Direction.SCORE_BELOW_THRESHOLD:
        return s[None, :] < thresholds[:, None]
    return s[None, :] > thresholds[:, None]


def _counts(off: np.ndarray, y: np.ndarray):
    tp = (off & y).sum(axis=-1)
    fp = (off & ~y).sum(axis=-1)
    fn = (~off & y).sum(axis=-1)
    tn = (~off & ~y).sum(axis=-1)
    return tp, fp, fn, tn


def _best_index(f1s: Sequence[float], n_offs: Sequence[int], distances: Sequence[float]) -> int:
    f1_arr = np.asarray(f1s, dtype=float)
    best_f1 = np.nanmax(f1_arr) if not np.all(np.isnan(f1_arr)) else float('nan')
    if math.isnan(best_f1):
        candidates = list(range(len(f1_arr)))
    else:
        candidates = [i for i, v in enumerate(f1_arr) if not math.isnan(v) and best_f1 - v <= _F1_TIE_TOLERANCE]
    return min(candidates, key=lambda i: (n_offs[i], distances[i], i))


def sweep(scores: Mapping[str, float],
          labels: Sequence[GoldLabel],
          spec: SweepSpec = None,
          direction: Direction = None,
          measure_id: str = None) -> SweepResult:
    """Classify the labeled mementos at every threshold of ``spec`` and keep the F1/accuracy curve."""
    if spec is None:
        if measure_id is None:
            raise UsageError('sweep needs a SweepSpec or a measure id')
        spec = SweepSpec.default(measure_id)
    measure = MEASURE_SPECS.get(spec.measure_id)
    if direction is None:
        if measure is None:
            raise UsageError(f'no comparison direction known for {spec.measure_id}')
        direction = measure.offtopic_direction
    if not scores:
        raise UsageError(f'no scores to sweep for {spec.measure_id}')
    s, y, excluded = _labeled_arrays(scores, labels)
    if len(s) == 0:
        raise UsageError(f'none of the {spec.measure_id} scores has a gold label')

    thresholds = spec.thresholds()
    tp, fp, fn, tn = _counts(_off_topic_matrix(s, thresholds, direction), y)
    curve = []
    for i, threshold in enumerate(thresholds.tolist()):
        counts = ConfusionCounts(int(tp[i]), int(fp[i]), int(fn[i]), int(tn[i]))
        curve.append(SweepPoint(threshold=threshold, f1=f1(counts), accuracy=accuracy(counts), counts=counts))

    equivalent = measure.equivalent_score if measure is not None else spec.lower
    best = curve[_best_index([p.f1 for p in curve], [p.n_off_topic for p in curve],
                             [abs(p.threshold - equivalent) for p in curve])]
    return SweepResult(measure_id=spec.measure_id, curve=curve, best=best, excluded=excluded)


def combine_grid(scores_by_measure: Mapping[str, Mapping[str, float]],
                 labels: Sequence[GoldLabel],
                 measure_ids: Tuple[str, str],
                 specs: Mapping[str, SweepSpec] = None) -> CombinedResult:
    """Try every threshold pair of two measures, or-ing their verdicts; keep the best pair."""
    a, b = measure_ids
    if a == b:
        raise UsageError('combine two different measures')
    for m in (a, b):
        if m not in scores_by_measure:
            raise CoverageError(f'no {m} scores to combine')
    specs = dict(specs or {})
    spec_a, spec_b = specs.get(a) or SweepSpec.default(a), specs.get(b) or SweepSpec.default(b)

    common = set(scores_by_measure[a]) & set(scores_by_measure[b])
    only_one = (set(scores_by_measure[a]) ^ set(scores_by_measure[b])) & {g.uri_m for g in labels}
    if only_one:
        logger.warning(f'{len(only_one)} labeled mementos are scored by only one of {a}, {b} and were excluded')
    kept = [g for g in labels if g.uri_m in common]
    if not kept:
        raise CoverageError(f'no labeled memento is scored by both {a} and {b}')
    y = np.array([g.off_topic for g in kept], dtype=bool)
    s_a = np.array([scores_by_measure[a][g.uri_m] for g in kept], dtype=float)
    s_b = np.array([scores_by_measure[b][g.uri_m] for g in kept], dtype=float)

    t_a, t_b = spec_a.thresholds(), spec_b.thresholds()
    off_a = _off_topic_matrix(s_a, t_a, get_measure_spec(a).offtopic_direction)
    off_b = _off_topic_matrix(s_b, t_b, get_measure_spec(b).offtopic_direction)
    off = off_a[:, None, :] | off_b[None, :, :]
    tp, fp, fn, tn = (x.ravel() for x in _counts(off, y))

    ia, ib = np.meshgrid(np.arange(len(t_a)), np.arange(len(t_b)), indexing='ij')
    ia, ib = ia.ravel(), ib.ravel()
    denominator = 2 * tp + fp + fn
    with np.errstate(divide='ignore', invalid='ignore'):
        f1s = np.where(denominator > 0, 2 * tp / np.maximum(denominator, 1), np.nan)
        accs = (tp + tn) / len(y)
    eq_a, eq_b = get_measure_spec(a).equivalent_score, get_measure_spec(b).equivalent_score
    distances = np.abs(t_a[ia] - eq_a) / (spec_a.upper - spec_a.lower or 1) + \
        np.abs(t_b[ib] - eq_b) / (spec_b.upper - spec_b.lower or 1)
    best = _best_index(f1s, (tp + fp).tolist(), distances.tolist())

    grid = pd.DataFrame({
        'measure_a': a,
        'threshold_a': t_a[ia],
        'measure_b': b,
        'threshold_b': t_b[ib],
        'f1': f1s,
        'accuracy': accs,
        'tp': tp,
        'fp': fp,
        'fn': fn,
        'tn': tn,
    })
    counts = ConfusionCounts(int(tp[best]), int(fp[best]), int(fn[best]), int(tn[best]))
    return CombinedResult(measure_ids=(a, b),
                          thresholds=(float(t_a[ia[best]]), float(t_b[ib[best]])),
                          counts=counts,
                          f1=f1(counts),
                          accuracy=accuracy(counts),
                          grid=grid)


def sweep_lsi_topics(timemaps: Sequence[TimeMap],
                     content_provider: Callable,
                     labels: Sequence[GoldLabel],
                     topic_grid: Iterable[int],
                     run_config) -> Tuple[int, SweepResult, pd.DataFrame]:
    """Rescore gensim_lsi with each topic count, sweep each, and return the best (k, sweep) plus a summary."""
    from offtopic.engine.detector import evaluate_timemap

    lsi = get_measure_spec('gensim_lsi')
    summary = {}
    results = []
    topic_grid = list(topic_grid)
    for i, k in enumerate(topic_grid):
        cfg_k = dataclasses.replace(run_config, measures=[(lsi, None)], lsi_topics=k)
        scores = {}
        for tm in timemaps:
            for uri_m, row in evaluate_timemap(tm, cfg_k, content_provider).items():
                if row[0].error is None:
                    scores[uri_m] = row[0].comparison_score
        result = sweep(scores, labels, SweepSpec.default('gensim_lsi'))
        results.append((k, result))
        append_to_dict(summary, {
            'lsi_topics': k,
            'threshold': result.best.threshold,
            'f1': result.best.f1,
            'accuracy': result.best.accuracy,
        })
        print(f'[{i + 1}/{len(topic_grid)}] gensim_lsi k={k}: best F1 {result.best.f1:.3f} '
              f'at {result.best.threshold}')

    idx = _best_index([r.best.f1 for _, r in results], [r.best.n_off_topic for _, r in results],
                      [abs(r.best.threshold - lsi.equivalent_score) for _, r in results])
    best_k, best_result = results[idx]
    return best_k, best_result, pd.DataFrame(summary)


def curve_frame(results: Iterable[SweepResult]) -> pd.DataFrame:
    rows = {}
    for result in results:
        for point in result.curve:
            append_to_dict(rows, {
                'measure': result.measure_id,
                'threshold': point.threshold,
                'f1': point.f1,
                'accuracy': point.accuracy,
                **point.counts.to_dict()
            })
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def write_curve(results: Iterable[SweepResult], path: str) -> int:
    frame = curve_frame(results)
    frame.to_csv(path, index=False)
    return len(frame)

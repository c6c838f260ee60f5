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

import math
import random

import pandas as pd
import pytest

from offtopic.errors import CoverageError, EmptyInputError, GoldStandardParseError, UsageError
from offtopic.evaluation.gold import (GoldLabel, gold_standard_summary, import_goldstandard_tsv, load_gold_standard,
                                      write_gold_standard)
from offtopic.evaluation.metrics import ConfusionCounts, accuracy, combine_measures, combine_verdicts, confusion, f1
from offtopic.evaluation.sweep import SweepSpec, combine_grid, curve_frame, load_scores, sweep, write_curve
from offtopic.measures.spec import MEASURE_IDS, MEASURE_SPECS, Direction
from offtopic.protocol import TopicStatus

ON, OFF = TopicStatus.ON_TOPIC, TopicStatus.OFF_TOPIC


def _labels(off_topic_by_uri, collection_id='1'):
    return [GoldLabel(uri, OFF if off else ON, collection_id) for uri, off in off_topic_by_uri.items()]


def test_f1_and_accuracy_arithmetic():
    assert f1(ConfusionCounts(tp=95, fp=30, fn=20, tn=0)) == pytest.approx(190 / 240)
    assert accuracy(ConfusionCounts(tp=3, tn=90, fp=4, fn=3)) == pytest.approx(0.93)
    assert math.isnan(f1(ConfusionCounts(tn=5)))
    assert math.isnan(accuracy(ConfusionCounts()))


def test_confusion_matches_tally():
    rng = random.Random(5)
    truth = {f'http://m/{i}': rng.random() < 0.3 for i in range(300)}
    verdicts = {u: OFF if rng.random() < 0.4 else ON for u in truth}
    counts = confusion(verdicts, _labels(truth))
    expected = {'tp': 0, 'fp': 0, 'fn': 0, 'tn': 0}
    for u, off in truth.items():
        predicted = verdicts[u] is OFF
        key = ('t' if predicted == off else 'f') + ('p' if predicted else 'n')
        expected[key] += 1
    assert counts.to_dict() == expected
    assert counts.total == 300


def test_confusion_lists_missing_verdicts():
    missing = []
    counts = confusion({'http://m/1': OFF}, _labels({'http://m/1': True, 'http://m/2': False}), missing=missing)
    assert counts == ConfusionCounts(tp=1)
    assert missing == ['http://m/2']


def test_combine_verdicts_is_logical_or():
    a = {'x': ON, 'y': OFF, 'z': ON}
    b = {'x': ON, 'y': ON, 'z': OFF}
    assert combine_verdicts([a, b]) == {'x': ON, 'y': OFF, 'z': OFF}
    counts, score = combine_measures([a, b], _labels({'x': False, 'y': True, 'z': False}))
    assert counts == ConfusionCounts(tp=1, fp=1, fn=0, tn=1)
    assert score == pytest.approx(2 / 3)
    with pytest.raises(UsageError):
        combine_verdicts([a])
    with pytest.raises(CoverageError):
        combine_verdicts([a, {'x': ON}])


def test_sweep_grids():
    assert len(SweepSpec.default('jaccard').thresholds()) == 101
    assert SweepSpec.default('bytecount').thresholds()[0] == -1.0
    assert SweepSpec.default('bytecount').thresholds()[-1] == 0.0
    simhash = SweepSpec.default('simhash-raw').thresholds()
    assert simhash.tolist() == list(range(65))
    with pytest.raises(UsageError):
        SweepSpec('cosine', 1.0, 0.0, 0.01)


def _brute_force_curve(scores, truth, thresholds, below):
    curve = []
    for t in thresholds:
        tp = fp = fn = tn = 0
        for u, s in scores.items():
            predicted = s < t if below else s > t
            if truth[u]:
                tp, fn = (tp + 1, fn) if predicted else (tp, fn + 1)
            else:
                fp, tn = (fp + 1, tn) if predicted else (fp, tn + 1)
        denominator = 2 * tp + fp + fn
        curve.append((2 * tp / denominator if denominator else float('nan'), (tp + tn) / len(scores)))
    return curve


def _frozen_sweep_fixture(measure_id, n=1000):
    """Seeded scores where off-topic mementos lean toward the dissimilar end of the measure's range."""
    measure = MEASURE_SPECS[measure_id]
    rng = random.Random(f'sweep-{measure_id}')
    truth, scores = {}, {}
    for i in range(n):
        uri = f'http://m/{i}'
        truth[uri] = rng.random() < 0.25
        closeness = rng.betavariate(2, 5) if not truth[uri] else rng.betavariate(5, 2)
        score = measure.equivalent_score + closeness * (measure.score_range[1] - measure.score_range[0])
        scores[uri] = int(round(score)) if measure.integer_scores else round(score, 4)
    return scores, truth


def _brute_force_best(spec, measure_id, scores, truth):
    measure = MEASURE_SPECS[measure_id]
    below = measure.offtopic_direction is Direction.SCORE_BELOW_THRESHOLD
    thresholds = spec.thresholds().tolist()
    curve = _brute_force_curve(scores, truth, thresholds, below)
    best_f1 = max(f for f, _ in curve if not math.isnan(f))
    tied = []
    for t, (f, _) in zip(thresholds, curve):
        if not math.isnan(f) and best_f1 - f <= 1e-9:
            n_off = sum(1 for s in scores.values() if (s < t if below else s > t))
            tied.append((n_off, abs(t - measure.equivalent_score), t))
    return best_f1, min(tied)[2], curve


@pytest.mark.parametrize('measure_id', MEASURE_IDS)
def test_sweep_matches_brute_force(measure_id):
    scores, truth = _frozen_sweep_fixture(measure_id)
    spec = SweepSpec.default(measure_id)
    result = sweep(scores, _labels(truth), spec)
    best_f1, best_threshold, expected = _brute_force_best(spec, measure_id, scores, truth)
    assert len(result.curve) == len(expected)
    for point, (exp_f1, exp_acc) in zip(result.curve, expected):
        if math.isnan(exp_f1):
            assert math.isnan(point.f1)
        else:
            assert point.f1 == pytest.approx(exp_f1, abs=1e-12)
        assert point.accuracy == pytest.approx(exp_acc, abs=1e-12)
    assert result.best.f1 == pytest.approx(best_f1, abs=1e-12)
    assert result.best.threshold == best_threshold


def test_sweep_tie_rule():
    # F1 2/3 is reached both by flagging only A and by flagging everything; the smaller verdict set wins
    scores = {'A': 0.9, 'B': 0.5, 'C': 0.6, 'D': 0.55}
    truth = {'A': True, 'B': True, 'C': False, 'D': False}
    result = sweep(scores, _labels(truth), SweepSpec.default('jaccard'))
    assert result.best.f1 == pytest.approx(2 / 3)
    assert result.best.n_off_topic == 1
    assert result.best.threshold == pytest.approx(0.6)

    separable = sweep({'A': 0.9, 'C': 0.2}, _labels({'A': True, 'C': False}), SweepSpec.default('jaccard'))
    assert separable.best.f1 == 1.0
    assert separable.best.threshold == pytest.approx(0.2)


def test_sweep_coverage_and_direction():
    labels = _labels({'A': True, 'B': False, 'C': True})
    result = sweep({'A': 0.1, 'B': 0.9}, labels, SweepSpec('custom', 0.0, 1.0, 0.5),
                   direction=Direction.SCORE_BELOW_THRESHOLD)
    assert result.excluded == ['C']
    assert [p.threshold for p in result.curve] == [0.0, 0.5, 1.0]
    assert result.best.threshold == 0.5
    with pytest.raises(UsageError):
        sweep({}, labels, SweepSpec.default('cosine'))
    with pytest.raises(UsageError):
        sweep({'Z': 0.5}, labels, SweepSpec.default('cosine'))


def test_combine_grid_matches_brute_force():
    rng = random.Random(21)
    truth = {f'http://m/{i}': rng.random() < 0.3 for i in range(60)}
    scores = {
        'cosine': {u: rng.uniform(0, 1) for u in truth},
        'wordcount': {u: rng.uniform(-1, 0) for u in truth},
    }
    specs = {'cosine': SweepSpec('cosine', 0.0, 1.0, 0.1), 'wordcount': SweepSpec('wordcount', -1.0, 0.0, 0.1)}
    result = combine_grid(scores, _labels(truth), ('cosine', 'wordcount'), specs)

    best = -1.0
    for ta in specs['cosine'].thresholds():
        for tb in specs['wordcount'].thresholds():
            verdicts = {u: OFF if scores['cosine'][u] < ta or scores['wordcount'][u] < tb else ON for u in truth}
            value = f1(confusion(verdicts, _labels(truth)))
            if not math.isnan(value):
                best = max(best, value)
    assert result.f1 == pytest.approx(best)
    assert len(result.grid) == 11 * 11
    ta, tb = result.thresholds
    verdicts = {u: OFF if scores['cosine'][u] < ta or scores['wordcount'][u] < tb else ON for u in truth}
    assert confusion(verdicts, _labels(truth)) == result.counts


def test_combine_grid_needs_overlap():
    labels = _labels({'A': True})
    with pytest.raises(CoverageError):
        combine_grid({'cosine': {'A': 0.1}, 'wordcount': {'B': -0.5}}, labels, ('cosine', 'wordcount'))
    with pytest.raises(CoverageError):
        combine_grid({'cosine': {'A': 0.1}}, labels, ('cosine', 'wordcount'))


def test_load_scores_and_write_curve(tmp_path):
    path = tmp_path / 'scores.csv'
    pd.DataFrame([('tm', 'A', 'cosine', 0.9), ('tm', 'B', 'cosine', 0.05), ('tm', 'A', 'wordcount', 0.0)],
                 columns=['uri_t', 'uri_m', 'measure', 'score']).to_csv(path, index=False)
    scores = load_scores(str(path))
    assert scores == {'cosine': {'A': 0.9, 'B': 0.05}, 'wordcount': {'A': 0.0}}

    result = sweep(scores['cosine'], _labels({'A': False, 'B': True}), SweepSpec.default('cosine'))
    curve_path = tmp_path / 'curve.csv'
    assert write_curve([result], str(curve_path)) == 101
    frame = pd.read_csv(curve_path)
    assert list(frame.columns) == ['measure', 'threshold', 'f1', 'accuracy', 'tp', 'fp', 'fn', 'tn']
    assert set(frame['measure']) == {'cosine'}
    assert len(curve_frame([result])) == len(frame)


def test_gold_standard_csv(tmp_path):
    labels = [
        GoldLabel('http://m/1', OFF, '1068'),
        GoldLabel('http://m/2', ON, '1068'),
        GoldLabel('http://m/3', ON, '2950'),
    ]
    path = tmp_path / 'gold.csv'
    write_gold_standard(labels, str(path))
    assert load_gold_standard(str(path)) == labels

    summary = gold_standard_summary(labels)
    assert summary.to_dict('records') == [
        {'collection_id': '1068', 'mementos': 2, 'off_topic': 1, 'off_topic_share': 0.5},
        {'collection_id': '2950', 'mementos': 1, 'off_topic': 0, 'off_topic_share': 0.0},
    ]


def test_gold_standard_csv_errors(tmp_path):
    empty = tmp_path / 'empty.csv'
    empty.write_text('')
    with pytest.raises(EmptyInputError):
        load_gold_standard(str(empty))
    bad_label = tmp_path / 'bad.csv'
    bad_label.write_text('collection_id,uri_m,label\n1,http://m/1,maybe\n')
    with pytest.raises(GoldStandardParseError):
        load_gold_standard(str(bad_label))
    duplicate = tmp_path / 'dup.csv'
    duplicate.write_text('collection_id,uri_m,label\n1,http://m/1,on-topic\n1,http://m/1,off-topic\n')
    with pytest.raises(GoldStandardParseError):
        load_gold_standard(str(duplicate))


def test_import_goldstandard_tsv(tmp_path):
    path = tmp_path / 'gold.tsv'
    wayback = 'http://wayback.archive-it.org/1068'
    path.write_text('id\tmemento-datetime\tURI-M\tjudgement\n'
                    f'1\t20130307084848\t{wayback}/20130307084848/http://www.badil.org/\toff-topic\n'
                    f'2\t20130408000000\t{wayback}/20130409000000/http://www.badil.org/\ton-topic\n')
    labels = import_goldstandard_tsv(str(path))
    assert [g.label for g in labels] == [OFF, ON]
    assert {g.collection_id for g in labels} == {'1068'}
    assert labels[1].uri_m == 'http://wayback.archive-it.org/1068/20130408000000/http://www.badil.org/'


def test_lsi_topic_sweep_over_collection(tmp_path, synthetic_warc):
    from offtopic.archive.source import CollectionSource
    from offtopic.engine.detector import CachedContentProvider, RunConfig, load_collection, parse_measure_list
    from offtopic.evaluation.sweep import sweep_lsi_topics

    path, truth = synthetic_warc
    cfg = RunConfig(source=CollectionSource.parse(f'warc={path}'),
                    measures=parse_measure_list('gensim_lsi'),
                    output_path=None,
                    cache_dir=str(tmp_path / 'cache'))
    resolved, failures = load_collection(cfg)
    best_k, best, summary = sweep_lsi_topics(resolved.timemaps, CachedContentProvider(cfg.cache_dir, failures),
                                             _labels(truth), [2, 3], cfg)
    assert best_k in (2, 3)
    assert list(summary['lsi_topics']) == [2, 3]
    assert best.best.f1 == pytest.approx(summary['f1'].max())
    assert best.measure_id == 'gensim_lsi'

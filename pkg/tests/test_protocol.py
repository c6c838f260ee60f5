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

import itertools
from pathlib import Path

import pytest

import offtopic
from offtopic.errors import UsageError
from offtopic.protocol import (CollectionReport, MeasureResult, MementoRef, PreprocessingFlags, TimeMap, TopicStatus,
                               format_http_date, memento_timestamp, overall_topic_status, parse_http_date)

ON, OFF = TopicStatus.ON_TOPIC, TopicStatus.OFF_TOPIC


def test_overall_topic_status_is_logical_or():
    assert overall_topic_status([ON, ON]) is ON
    assert overall_topic_status([ON, OFF]) is OFF
    assert overall_topic_status([OFF, OFF, ON]) is OFF


def test_overall_topic_status_order_independent_and_monotone():
    statuses = [ON, OFF, ON]
    for perm in itertools.permutations(statuses):
        assert overall_topic_status(list(perm)) is OFF
    assert overall_topic_status(statuses + statuses) is OFF
    for i in range(3):
        flipped = [ON] * 3
        flipped[i] = OFF
        assert overall_topic_status(flipped) is OFF


def test_overall_topic_status_empty():
    with pytest.raises(UsageError):
        overall_topic_status([])


def test_http_date_round_trip():
    epoch = parse_http_date('Tue, 03 Jan 2012 01:43:26 GMT')
    assert memento_timestamp(epoch) == '20120103014326'
    assert format_http_date(epoch) == 'Tue, 03 Jan 2012 01:43:26 GMT'
    with pytest.raises(ValueError):
        parse_http_date('yesterday')


def test_parse_http_date_unknown_zone_is_utc():
    gmt = parse_http_date('Tue, 03 Jan 2012 01:43:26 GMT')
    assert parse_http_date('Tue, 03 Jan 2012 01:43:26 -0000') == gmt
    assert parse_http_date('Tue, 03 Jan 2012 01:43:26 +0000') == gmt
    assert parse_http_date('Tue, 03 Jan 2012 02:43:26 +0100') == gmt


def test_memento_ref_requires_absolute_uri():
    with pytest.raises(ValueError):
        MementoRef(uri_m='relative/path', memento_datetime=0)
    ref = MementoRef(uri_m='http://example.com/', memento_datetime=0, rel_hints=['first', 'memento'])
    assert ref.rel_hints == frozenset({'first', 'memento'})


def test_timemap_must_be_ordered():
    a = MementoRef('http://a.example/1', 10)
    b = MementoRef('http://a.example/2', 5)
    with pytest.raises(AssertionError):
        TimeMap(uri_t='http://a.example/tm', original_uri='http://a.example/', mementos=(a, b))


def test_measure_result_record_keys():
    flags = PreprocessingFlags(removed_boilerplate=True, tokenized=True, stemmed=True)
    record = MeasureResult('cosine', 0.5, 0.12, ON, flags).to_dict()
    assert list(record) == ['stemmed', 'tokenized', 'removed boilerplate', 'comparison score', 'topic status']
    failed = MeasureResult('jaccard', None, 0.94, ON, flags, error='both documents have no tokens').to_dict()
    assert failed['error'] == 'both documents have no tokens'
    assert failed['comparison score'] is None


def test_collection_report_iterates_rows():
    report = CollectionReport()
    report.add_timemap('http://tm/', {
        'http://m/1': [MeasureResult('cosine', 1.0, 0.12, ON), MeasureResult('wordcount', 0.0, -0.7, ON)],
        'http://m/2': [MeasureResult('cosine', 0.05, 0.12, OFF), MeasureResult('wordcount', -0.1, -0.7, ON)],
    })
    rows = list(report.iter_results())
    assert len(rows) == 4
    assert report.to_dict()['http://tm/']['http://m/2']['overall topic status'] == 'off-topic'
    with pytest.raises(AssertionError):
        report.add_timemap('http://tm/', {})


def test_package_version_comes_from_version_file():
    version_file = Path(offtopic.__file__).parent / 'version' / 'version'
    assert offtopic.__version__ == version_file.read_text().strip()

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

import json
import os

import pandas as pd
import pytest

from offtopic.cli import build_config, main, parse_args
from offtopic.errors import UsageError


def test_readme_command_line():
    invocation = parse_args(['-i', 'archiveit=7877', '-o', 'outputfile.json', '-tm', 'jaccard=0.80,bytecount=-0.50'])
    assert invocation.subcommand == 'detect'
    assert invocation.input_spec == 'archiveit=7877'
    assert invocation.output_file == 'outputfile.json'
    assert invocation.tm_spec == 'jaccard=0.80,bytecount=-0.50'


def test_explicit_subcommand_and_overrides():
    invocation = parse_args(['detect', '-i', 'warc=a.warc', '-o', 'out.csv', '--format', 'csv', '--concurrency', '4',
                             '--', 'preprocess.stemmer=none'])
    assert invocation.output_format == 'csv'
    assert invocation.concurrency == 4
    assert invocation.overrides == ['preprocess.stemmer=none']


def test_defaults_come_from_yaml(monkeypatch):
    monkeypatch.delenv('OTMT_CACHE_DIR', raising=False)
    config = build_config(parse_args(['-i', 'archiveit=7877', '-o', 'out.json', '-tm', 'cosine']))
    assert config.measures == 'cosine'
    assert config.format == 'json'
    assert config.cache_dir == '~/.cache/offtopic'
    assert build_config(parse_args(['-i', 'archiveit=7877', '-o', 'out.json'])).measures == 'cosine,wordcount'


def test_flags_beat_environment(monkeypatch):
    monkeypatch.setenv('OTMT_CACHE_DIR', '/from/env')
    assert build_config(parse_args(['-i', 'archiveit=1', '-o', 'o.json'])).cache_dir == '/from/env'
    assert build_config(parse_args(['-i', 'archiveit=1', '-o', 'o.json', '--cache-dir', '/from/flag'])).cache_dir == \
        '/from/flag'


@pytest.mark.parametrize('argv', [
    ['-i', 'archiveit=7877'],
    ['-o', 'out.json'],
    ['-i', 'archiveit=7877', '-o', 'out.json', '-tm', 'levenshtein'],
    ['-i', 'nonsense', '-o', 'out.json'],
    ['-i', 'archiveit=7877', '-o', 'out.json', '--bogus'],
    ['sweep', '--scores', 's.csv', '-o', 'c.csv'],
])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_args(argv)
    assert main(argv) == 2


def test_detect_over_warc_fixture(tmp_path, synthetic_warc):
    path, _ = synthetic_warc
    output = tmp_path / 'report.json'
    code = main(['-i', f'warc={path}', '-o', str(output), '-tm', 'wordcount,bytecount=-0.5',
                 '--cache-dir', str(tmp_path / 'cache')])
    assert code == 0
    data = json.loads(output.read_text())
    assert len(data) == 10
    first_timemap = next(iter(data.values()))
    entry = next(iter(first_timemap.values()))
    assert set(entry['timemap measures']) == {'wordcount', 'bytecount'}
    assert entry['overall topic status'] in ('on-topic', 'off-topic')


def test_unreachable_archive_is_total_failure(tmp_path):
    code = main(['-i', 'archiveit=7877', '-o', str(tmp_path / 'out.json'), '--cache-dir', str(tmp_path / 'cache'),
                 '--', 'fetch.retries=0', 'fetch.timeout=2', 'archiveit.base_url=http://127.0.0.1:9'])
    assert code == 4
    assert not os.path.exists(tmp_path / 'out.json')


def test_score_dump_then_sweep(tmp_path, synthetic_warc):
    path, truth = synthetic_warc
    scores = tmp_path / 'scores.csv'
    assert main(['score-dump', '-i', f'warc={path}', '-o', str(scores), '-tm', 'wordcount,cosine,jaccard',
                 '--cache-dir', str(tmp_path / 'cache')]) == 0
    frame = pd.read_csv(scores)
    assert list(frame.columns) == ['uri_t', 'uri_m', 'measure', 'score']
    assert set(frame['measure']) == {'wordcount', 'cosine', 'jaccard'}

    gold = tmp_path / 'gold.csv'
    pd.DataFrame([('synthetic', u, 'off-topic' if off else 'on-topic') for u, off in truth.items()],
                 columns=['collection_id', 'uri_m', 'label']).to_csv(gold, index=False)
    curves = tmp_path / 'curves.csv'
    assert main(['sweep', '--scores', str(scores), '--gold', str(gold), '-o', str(curves), '-tm', 'wordcount,cosine',
                 '--combine', 'cosine,wordcount']) == 0
    curve = pd.read_csv(curves)
    assert set(curve['measure']) == {'wordcount', 'cosine'}
    assert len(curve) == 2 * 101
    assert curve.loc[curve['measure'] == 'wordcount', 'f1'].max() >= 0.9
    assert os.path.exists(tmp_path / 'curves.combined.csv')


def test_score_dump_from_report(tmp_path):
    report = {
        'http://tm/': {
            'http://m/1': {
                'timemap measures': {
                    'cosine': {'comparison score': 0.5, 'topic status': 'on-topic'},
                    'jaccard': {'comparison score': None, 'topic status': 'on-topic', 'error': 'undefined'},
                },
                'overall topic status': 'on-topic'
            }
        }
    }
    source = tmp_path / 'report.json'
    source.write_text(json.dumps(report))
    output = tmp_path / 'scores.csv'
    assert main(['score-dump', '--from-report', str(source), '-o', str(output)]) == 0
    frame = pd.read_csv(output)
    assert frame.to_dict('records') == [{'uri_t': 'http://tm/', 'uri_m': 'http://m/1', 'measure': 'cosine',
                                         'score': 0.5}]

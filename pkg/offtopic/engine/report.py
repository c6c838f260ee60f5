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
Report and score-file writers.

The JSON report nests URI-T -> URI-M -> {"timemap measures", "overall topic status"}. Errors go to a sidecar
``<output>.errors.json`` so the report itself keeps that exact shape.
"""

import json
import os
from typing import List

import pandas as pd

from offtopic.errors import UsageError
from offtopic.protocol import CollectionReport

__all__ = ['OUTPUT_FORMATS', 'CSV_COLUMNS', 'SCORE_COLUMNS', 'write_report', 'write_scores', 'report_to_frame',
           'scores_from_report_json', 'errors_path']

OUTPUT_FORMATS = ('json', 'csv')

CSV_COLUMNS = [
    'uri_t', 'uri_m', 'measure', 'stemmed', 'tokenized', 'removed_boilerplate', 'comparison_score', 'topic_status',
    'overall_topic_status'
]
SCORE_COLUMNS = ['uri_t', 'uri_m', 'measure', 'score']


def errors_path(path: str) -> str:
    return f'{path}.errors.json'


def _write_text(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def report_to_frame(report: CollectionReport) -> pd.DataFrame:
    rows = []
    for uri_t, uri_m, entry, result in report.iter_results():
        flags = result.preprocessing_flags
        rows.append({
            'uri_t': uri_t,
            'uri_m': uri_m,
            'measure': result.measure_id,
            'stemmed': flags.stemmed,
            'tokenized': flags.tokenized,
            'removed_boilerplate': flags.removed_boilerplate,
            'comparison_score': result.comparison_score,
            'topic_status': result.topic_status.value,
            'overall_topic_status': entry.overall_topic_status.value,
        })
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_report(report: CollectionReport, output_format: str, path: str) -> List[str]:
    """Write ``report`` and, when it has errors, the errors sidecar. Returns the paths written."""
    if output_format not in OUTPUT_FORMATS:
        raise UsageError(f'output format must be one of {OUTPUT_FORMATS}, got {output_format!r}')
    if output_format == 'json':
        _write_text(path, json.dumps(report.to_dict(), indent=4, ensure_ascii=False) + '\n')
    else:
        report_to_frame(report).to_csv(path, index=False)
    written = [path]

    if report.errors:
        sidecar = errors_path(path)
        _write_text(sidecar, json.dumps([e.to_dict() for e in report.errors], indent=4, ensure_ascii=False) + '\n')
        written.append(sidecar)
    elif os.path.exists(errors_path(path)):
        # a stale sidecar from an earlier run would be misleading
        os.remove(errors_path(path))
    return written


def write_scores(report: CollectionReport, path: str) -> int:
    """Write the ``uri_t, uri_m, measure, score`` file; rows whose measure failed are left out."""
    rows = [(uri_t, uri_m, r.measure_id, r.comparison_score)
            for uri_t, uri_m, _, r in report.iter_results()
            if r.error is None and r.comparison_score is not None]
    frame = pd.DataFrame(rows, columns=SCORE_COLUMNS)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False)
    return len(frame)


def scores_from_report_json(path: str) -> pd.DataFrame:
    """Score rows of an existing JSON report."""
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    rows = []
    for uri_t, mementos in data.items():
        for uri_m, entry in mementos.items():
            for measure_id, record in entry['timemap measures'].items():
                if 'error' in record or record.get('comparison score') is None:
                    continue
                rows.append((uri_t, uri_m, measure_id, record['comparison score']))
    return pd.DataFrame(rows, columns=SCORE_COLUMNS)

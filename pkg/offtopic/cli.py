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
Command line entry point ``detect_off_topic``.

    detect_off_topic -i archiveit=7877 -o outputfile.json -tm jaccard=0.80,bytecount=-0.50
    detect_off_topic score-dump -i warc=crawl.warc.gz -o scores.csv -tm cosine,wordcount,jaccard
    detect_off_topic sweep --scores scores.csv --gold gold.csv -o curves.csv --combine cosine,wordcount

When the first argument is not a subcommand, ``detect`` is assumed. Anything after ``--`` is passed to the
config as ``key=value`` overrides, e.g. ``-- preprocess.stemmer=none fetch.min_interval=1.0``.
"""

import argparse
import dataclasses
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from omegaconf import DictConfig, OmegaConf, open_dict

from offtopic.engine.config import load_config
from offtopic.engine.detector import CachedContentProvider, RunConfig, load_collection, parse_measure_list, \
    run_collection
from offtopic.engine.report import scores_from_report_json, write_scores
from offtopic.errors import OffTopicError, UsageError
from offtopic.evaluation.gold import import_goldstandard_tsv, load_gold_standard
from offtopic.evaluation.sweep import (LSI_TOPIC_GRID, SweepSpec, combine_grid, load_scores, sweep, sweep_lsi_topics,
                                       write_curve)
from offtopic.measures.spec import MEASURE_IDS
from offtopic.utils.logging_utils import get_logger
from offtopic.utils.tracking import Tracking

__all__ = ['CliInvocation', 'parse_args', 'main', 'SUBCOMMANDS']

logger = get_logger(__file__)

SUBCOMMANDS = ('detect', 'sweep', 'score-dump')
GOLD_FORMATS = ('csv', 'tsv')


class _ArgumentParser(argparse.ArgumentParser):
    """Argument errors become UsageError so that main() owns the exit code."""

    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


@dataclass
class CliInvocation:
    subcommand: str
    input_spec: Optional[str] = None
    output_file: Optional[str] = None
    tm_spec: Optional[str] = None
    output_format: Optional[str] = None
    cache_dir: Optional[str] = None
    concurrency: Optional[int] = None
    lsi_topics: Optional[str] = None
    offline: bool = False
    from_report: Optional[str] = None
    scores: Optional[str] = None
    gold: Optional[str] = None
    gold_format: Optional[str] = None
    combine: Optional[str] = None
    logger: Optional[str] = None
    overrides: List[str] = field(default_factory=list)

    def config_values(self) -> Dict[str, object]:
        """Config keys set explicitly on the command line."""
        values = {
            'input': self.input_spec,
            'output': self.output_file,
            'measures': self.tm_spec,
            'format': self.output_format,
            'cache_dir': self.cache_dir,
            'concurrency': self.concurrency,
            'scores': self.scores,
            'gold': self.gold,
            'gold_format': self.gold_format,
            'combine': self.combine,
        }
        if self.offline:
            values['offline'] = True
        if self.logger:
            values['logger'] = [b.strip() for b in self.logger.split(',') if b.strip()]
        if self.lsi_topics:
            if self.subcommand == 'sweep':
                values['lsi_topic_grid'] = _parse_int_list(self.lsi_topics, '--lsi-topics')
            else:
                topics = _parse_int_list(self.lsi_topics, '--lsi-topics')
                if len(topics) != 1:
                    raise UsageError(f'--lsi-topics takes one topic count outside sweep, got {self.lsi_topics!r}')
                values['lsi_topics'] = topics[0]
        return {k: v for k, v in values.items() if v is not None}


def _parse_int_list(text: str, flag: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise UsageError(f'{flag} takes integers, got {text!r}') from None
    if not values:
        raise UsageError(f'{flag} is empty')
    return values


def _add_detect_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('-i', '--input', dest='input_spec', help='<type>=<args>: timemap=<uri>,..., warc=<file>,..., '
                        'or archiveit=<collection id>')
    parser.add_argument('-o', '--output', dest='output_file', help='output file')
    parser.add_argument('-tm',
                        '--timemap-measures',
                        dest='tm_spec',
                        help=f'<measure>[=<threshold>],... with measures from {", ".join(MEASURE_IDS)}')
    parser.add_argument('--format', dest='output_format', choices=['json', 'csv'])
    parser.add_argument('--cache-dir', dest='cache_dir')
    parser.add_argument('--concurrency', type=int)
    parser.add_argument('--offline', action='store_true', help='serve mementos from the cache only')
    parser.add_argument('--lsi-topics', dest='lsi_topics', help='topic count for gensim_lsi')


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog='detect_off_topic', description='Detect off-topic mementos in web archive '
                             'collections.')
    subparsers = parser.add_subparsers(dest='subcommand', parser_class=_ArgumentParser)

    detect = subparsers.add_parser('detect', help='score a collection and write the report')
    _add_detect_arguments(detect)

    dump = subparsers.add_parser('score-dump', help='score a collection and write the raw score file')
    _add_detect_arguments(dump)
    dump.add_argument('--from-report', dest='from_report', help='read scores from an existing JSON report instead')

    sweep_parser = subparsers.add_parser('sweep', help='calibrate thresholds against gold standard labels')
    sweep_parser.add_argument('--scores', help='score file written by score-dump')
    sweep_parser.add_argument('--gold', help='gold standard labels')
    sweep_parser.add_argument('--gold-format', dest='gold_format', choices=GOLD_FORMATS)
    sweep_parser.add_argument('-o', '--output', dest='output_file', help='curve file')
    sweep_parser.add_argument('-tm', '--timemap-measures', dest='tm_spec', help='measures to sweep')
    sweep_parser.add_argument('--combine', help='<measure>,<measure> pair to search jointly')
    sweep_parser.add_argument('--logger', help='console,wandb')
    sweep_parser.add_argument('-i', '--input', dest='input_spec', help='collection to rescore for the LSI topic sweep')
    sweep_parser.add_argument('--lsi-topics', dest='lsi_topics', help=f'topic grid, default '
                              f'{",".join(map(str, LSI_TOPIC_GRID))}')
    sweep_parser.add_argument('--cache-dir', dest='cache_dir')
    sweep_parser.add_argument('--concurrency', type=int)
    sweep_parser.add_argument('--offline', action='store_true')
    return parser


def parse_args(argv: Sequence[str]) -> CliInvocation:
    argv = list(argv)
    overrides = []
    if '--' in argv:
        split = argv.index('--')
        argv, overrides = argv[:split], argv[split + 1:]
    if not argv or argv[0] not in SUBCOMMANDS and argv[0] not in ('-h', '--help'):
        argv = ['detect'] + argv

    args = _build_parser().parse_args(argv)
    values = {f.name: getattr(args, f.name) for f in dataclasses.fields(CliInvocation) if hasattr(args, f.name)}
    values['offline'] = bool(values.get('offline'))
    invocation = CliInvocation(overrides=overrides, **values)

    if invocation.subcommand in ('detect', 'score-dump'):
        if not invocation.output_file:
            raise UsageError(f'{invocation.subcommand}: an output file (-o) is required')
        if not invocation.input_spec and not invocation.from_report:
            raise UsageError(f'{invocation.subcommand}: an input (-i <type>=<args>) is required')
    elif invocation.subcommand == 'sweep':
        if not invocation.gold:
            raise UsageError('sweep: a gold standard file (--gold) is required')
        if not invocation.output_file:
            raise UsageError('sweep: a curve file (-o) is required')
        if not invocation.scores and not invocation.input_spec:
            raise UsageError('sweep: give a score file (--scores) and/or a collection (-i) for the LSI topic sweep')
    if invocation.tm_spec:
        parse_measure_list(invocation.tm_spec)
    if invocation.input_spec:
        from offtopic.archive.source import CollectionSource
        CollectionSource.parse(invocation.input_spec)
    return invocation


def build_config(invocation: CliInvocation) -> DictConfig:
    """YAML defaults < environment < ``--`` overrides and flags."""
    config_name = 'sweep' if invocation.subcommand == 'sweep' else 'detect'
    config = load_config(config_name, invocation.overrides)
    with open_dict(config):
        for key, value in invocation.config_values().items():
            config[key] = value
    return config


def run_detect(invocation: CliInvocation) -> int:
    config = build_config(invocation)
    report = run_collection(RunConfig.from_config(config))
    print(f'report written to {config.output}: {len(report)} TimeMaps')
    return 0


def run_score_dump(invocation: CliInvocation) -> int:
    config = build_config(invocation)
    if invocation.from_report:
        frame = scores_from_report_json(invocation.from_report)
        frame.to_csv(config.output, index=False)
        n_rows = len(frame)
    else:
        cfg = RunConfig.from_config(config)
        report = run_collection(dataclasses.replace(cfg, output_path=None), persist=False)
        n_rows = write_scores(report, config.output)
    print(f'{n_rows} scores written to {config.output}')
    return 0


def _sibling_path(path: str, tag: str) -> str:
    root, ext = os.path.splitext(path)
    return f'{root}.{tag}{ext or ".csv"}'


def _load_labels(config: DictConfig):
    if config.gold_format not in GOLD_FORMATS:
        raise UsageError(f'gold format must be one of {GOLD_FORMATS}, got {config.gold_format!r}')
    if config.gold_format == 'tsv':
        return import_goldstandard_tsv(config.gold)
    return load_gold_standard(config.gold)


def run_sweep(invocation: CliInvocation) -> int:
    config = build_config(invocation)
    labels = _load_labels(config)
    tracking = Tracking(project_name=config.project_name,
                        experiment_name=config.experiment_name,
                        default_backend=list(config.logger),
                        config=OmegaConf.to_container(config, resolve=True))

    results = []
    if config.get('scores'):
        scores = load_scores(config.scores)
        measure_ids = list(scores)
        if invocation.tm_spec:
            measure_ids = [spec.measure_id for spec, _ in parse_measure_list(invocation.tm_spec)]
            missing = [m for m in measure_ids if m not in scores]
            if missing:
                raise UsageError(f'{config.scores} has no scores for {", ".join(missing)}')
        for i, measure_id in enumerate(measure_ids):
            result = sweep(scores[measure_id], labels, SweepSpec.default(measure_id))
            for step, point in enumerate(result.curve):
                tracking.log({
                    f'{measure_id}/threshold': point.threshold,
                    f'{measure_id}/f1': point.f1,
                    f'{measure_id}/accuracy': point.accuracy,
                },
                             step=step,
                             backend=['wandb'])
            tracking.log({
                'measure': measure_id,
                'threshold': result.best.threshold,
                'f1': result.best.f1,
                'accuracy': result.best.accuracy,
            },
                         step=i,
                         backend=['console'])
            results.append(result)

        if config.get('combine'):
            pair = tuple(m.strip() for m in str(config.combine).split(',') if m.strip())
            if len(pair) != 2:
                raise UsageError(f'--combine takes two measures, got {config.combine!r}')
            combined = combine_grid(scores, labels, pair)
            combined.grid.to_csv(_sibling_path(config.output, 'combined'), index=False)
            print(f'{pair[0]}={combined.thresholds[0]} or {pair[1]}={combined.thresholds[1]}: '
                  f'F1 {combined.f1:.3f}, accuracy {combined.accuracy:.3f}')

    if config.get('input'):
        cfg = RunConfig.from_config(config)
        resolved, failures = load_collection(cfg)
        best_k, best_result, summary = sweep_lsi_topics(resolved.timemaps,
                                                        CachedContentProvider(cfg.cache_dir, failures), labels,
                                                        list(config.lsi_topic_grid), cfg)
        summary.to_csv(_sibling_path(config.output, 'lsi_topics'), index=False)
        print(f'gensim_lsi: best topic count {best_k}, threshold {best_result.best.threshold}, '
              f'F1 {best_result.best.f1:.3f}')
        results.append(dataclasses.replace(best_result, measure_id=f'gensim_lsi@{best_k}'))

    n_rows = write_curve(results, config.output)
    tracking.finish()
    print(f'{n_rows} curve points written to {config.output}')
    return 0


_COMMANDS = {
    'detect': run_detect,
    'score-dump': run_score_dump,
    'sweep': run_sweep,
}


def main(argv: Sequence[str] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        invocation = parse_args(argv)
        return _COMMANDS[invocation.subcommand](invocation)
    except OffTopicError as e:
        print(f'detect_off_topic: error: {e}', file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f'detect_off_topic: error: {e}', file=sys.stderr)
        return OffTopicError.exit_code


if __name__ == '__main__':
    sys.exit(main())

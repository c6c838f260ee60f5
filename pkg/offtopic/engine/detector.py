# Copyright 2024 Bytedance Ltd. and/or its affiliates
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
Run detection over a collection: resolve TimeMaps, prefetch raw mementos into the cache, then score every memento
of each TimeMap against its first memento.

Scoring reads only from the cache. With ``concurrency_limit > 1`` TimeMaps are split into balanced batches and
scored as ray tasks; the report is assembled in the driver.
"""

import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import ray
from codetiming import Timer
from omegaconf import DictConfig

from offtopic.archive.archiveit import ARCHIVEIT_BASE_URL, ARCHIVEIT_WAYBACK_URL
from offtopic.archive.cache import ContentCache, FetchRecord
from offtopic.archive.fetcher import FetchConfig, MementoFetcher, raw_memento_uri
from offtopic.archive.source import CollectionSource, ResolvedSource, resolve_source
from offtopic.archive.timemap import first_memento
from offtopic.engine.balancing import get_balanced_partitions
from offtopic.engine.report import OUTPUT_FORMATS, write_report
from offtopic.errors import (EmptyInputError, FetchFailedError, OffTopicError, TotalFailureError, UndefinedScoreError,
                             UsageError)
from offtopic.measures import apply_threshold, build_corpus, compute_score, get_measure_spec, required_level
from offtopic.measures.spec import MeasureSpec
from offtopic.measures.vectors import DEFAULT_LSI_TOPICS
from offtopic.preprocessing.config import PreprocessConfig
from offtopic.preprocessing.pipeline import preprocess
from offtopic.protocol import (CollectionReport, MeasureResult, MementoDocument, MementoRef, PreprocessingFlags,
                               ReportError, TimeMap, TopicStatus)
from offtopic.utils.config import dataclass_from_config
from offtopic.utils.logging_utils import format_timing, get_logger

__all__ = [
    'RunConfig', 'ContentProvider', 'CachedContentProvider', 'FetchingContentProvider', 'content_uri', 'prefetch',
    'evaluate_timemap', 'load_collection', 'run_collection', 'parse_measure_list'
]

logger = get_logger(__file__)

DEFAULT_CACHE_DIR = '~/.cache/offtopic'

ContentProvider = Callable[[str], FetchRecord]
MeasureChoice = Tuple[MeasureSpec, Optional[float]]


@contextmanager
def _timer(name: str, timing_raw: Dict[str, float]):
    with Timer(name=name, logger=None) as timer:
        yield
    timing_raw[name] = timer.last


def parse_measure_list(text: str) -> List[MeasureChoice]:
    """``jaccard=0.80,bytecount`` -> [(jaccard spec, 0.80), (bytecount spec, None)]"""
    choices = []
    seen = set()
    for item in (text or '').split(','):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition('=')
        spec = get_measure_spec(name.strip())
        threshold = None
        if sep:
            try:
                threshold = float(value)
            except ValueError:
                raise UsageError(f'threshold for {spec.measure_id} is not a number: {value!r}') from None
            if spec.integer_scores and threshold.is_integer():
                threshold = int(threshold)
        if spec.measure_id in seen:
            raise UsageError(f'measure {spec.measure_id} given twice')
        seen.add(spec.measure_id)
        choices.append((spec, threshold))
    if not choices:
        raise UsageError('no measures given')
    return choices


@dataclass
class RunConfig:
    source: CollectionSource
    measures: List[MeasureChoice]
    output_path: Optional[str] = None
    output_format: str = 'json'
    cache_dir: str = DEFAULT_CACHE_DIR
    concurrency_limit: int = 1
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    fetch: FetchConfig = field(default_factory=FetchConfig)
    lsi_topics: int = DEFAULT_LSI_TOPICS
    offline: bool = False
    archiveit_base_url: str = ARCHIVEIT_BASE_URL
    archiveit_wayback_url: str = ARCHIVEIT_WAYBACK_URL

    def __post_init__(self):
        if not self.measures:
            raise UsageError('at least one measure is required')
        for spec, threshold in self.measures:
            if threshold is not None:
                spec.check_threshold(threshold)
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(f'output format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}')
        if self.concurrency_limit < 1:
            raise UsageError(f'concurrency must be >= 1, got {self.concurrency_limit}')
        if self.lsi_topics < 1:
            raise UsageError(f'lsi_topics must be >= 1, got {self.lsi_topics}')
        self.cache_dir = os.path.expanduser(self.cache_dir)

    @property
    def thresholds(self) -> Dict[str, float]:
        return {spec.measure_id: spec.default_threshold if t is None else t for spec, t in self.measures}

    @classmethod
    def from_config(cls, config: DictConfig) -> 'RunConfig':
        if not config.get('input'):
            raise UsageError('an input (-i <type>=<args>) is required')
        user_agent = config.get('user_agent')
        return cls(source=CollectionSource.parse(config.input),
                   measures=parse_measure_list(config.measures),
                   output_path=config.get('output'),
                   output_format=config.format,
                   cache_dir=config.cache_dir,
                   concurrency_limit=int(config.concurrency),
                   preprocess=dataclass_from_config(PreprocessConfig, config.get('preprocess')),
                   fetch=dataclass_from_config(FetchConfig, config.get('fetch'), user_agent=user_agent),
                   lsi_topics=int(config.lsi_topics),
                   offline=bool(config.get('offline', False)),
                   archiveit_base_url=config.archiveit.base_url,
                   archiveit_wayback_url=config.archiveit.wayback_url)


def content_uri(uri_m: str) -> str:
    """Where the raw content of ``uri_m`` is fetched from."""
    if uri_m.startswith(('http://', 'https://')):
        return raw_memento_uri(uri_m)
    return uri_m


class CachedContentProvider:
    """Serves raw mementos from the cache only; prefetch failures are replayed as fetch errors."""

    def __init__(self, cache_dir: str, failures: Dict[str, str] = None):
        self.cache = ContentCache(cache_dir)
        self.failures = dict(failures or {})

    def __call__(self, uri_m: str) -> FetchRecord:
        if uri_m in self.failures:
            raise FetchFailedError(uri_m, reason=self.failures[uri_m])
        record = self.cache.get(content_uri(uri_m))
        if record is None:
            raise FetchFailedError(uri_m, reason='not in cache')
        return record


class FetchingContentProvider:

    def __init__(self, fetcher: MementoFetcher):
        self.fetcher = fetcher

    def __call__(self, uri_m: str) -> FetchRecord:
        return self.fetcher.fetch(content_uri(uri_m))


def prefetch(timemaps: Sequence[TimeMap], fetcher: MementoFetcher, workers: int = 1) -> Dict[str, str]:
    """Fetch every memento into the cache. Returns URI-M -> failure message for those that could not be fetched."""
    uri_ms = list(dict.fromkeys(m.uri_m for tm in timemaps for m in tm.mementos))
    failures = {}

    def _fetch(uri_m):
        fetcher.fetch(content_uri(uri_m))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = {pool.submit(_fetch, uri_m): uri_m for uri_m in uri_ms}
        for done, future in enumerate(as_completed(futures), start=1):
            uri_m = futures[future]
            try:
                future.result()
            except Exception as e:
                failures[uri_m] = describe_failure(e)
                logger.warning(f'{uri_m}: {failures[uri_m]}')
            if done % 100 == 0 or done == len(futures):
                print(f'[{done}/{len(futures)}] mementos fetched, {len(failures)} failed')
    return failures


def describe_failure(e: Exception) -> str:
    if isinstance(e, OffTopicError):
        return str(e)
    return f'{type(e).__name__}: {e}'


def _load_document(tm: TimeMap, ref: MementoRef, cfg: RunConfig, content_provider: ContentProvider,
                   levels) -> Tuple[Optional[MementoDocument], Optional[ReportError]]:
    """Fetch and preprocess one memento. A failure of either step comes back as a ``ReportError``."""
    stage = 'fetch'
    try:
        record = content_provider(ref.uri_m)
        stage = 'score'
        return preprocess(ref, record, cfg.preprocess, levels), None
    except Exception as e:
        return None, ReportError(stage=stage, message=describe_failure(e), uri_t=tm.uri_t, uri_m=ref.uri_m)


def _measure_flags(spec: MeasureSpec, doc: MementoDocument) -> PreprocessingFlags:
    return doc.preprocessing_flags if spec.requires_preprocessing else PreprocessingFlags()


def evaluate_timemap(tm: TimeMap,
                     cfg: RunConfig,
                     content_provider: ContentProvider,
                     errors: List[ReportError] = None) -> Dict[str, List[MeasureResult]]:
    """Score every memento of ``tm`` against its first memento with each configured measure.

    Failures are appended to ``errors``. A memento that cannot be fetched gets no row; if that memento is the
    first one, the whole TimeMap gets none.
    """
    errors = errors if errors is not None else []
    specs = [spec for spec, _ in cfg.measures]
    levels = [required_level(spec.measure_id) for spec in specs]

    f_ref = first_memento(tm)
    doc_f, error = _load_document(tm, f_ref, cfg, content_provider, levels)
    if error is not None:
        logger.warning(f'{tm.uri_t}: first memento unavailable, TimeMap not scored: {error.message}')
        errors.append(replace(error, stage='timemap'))
        return {}

    docs: Dict[str, MementoDocument] = {f_ref.uri_m: doc_f}
    for ref in tm.mementos:
        if ref.uri_m in docs:
            continue
        doc, error = _load_document(tm, ref, cfg, content_provider, levels)
        if error is not None:
            logger.warning(f'{ref.uri_m}: {error.message}')
            errors.append(error)
            continue
        docs[ref.uri_m] = doc

    # corpus measures see every memento that made it through preprocessing
    corpora, corpus_errors = {}, {}
    for spec in specs:
        if not spec.corpus_based:
            continue
        try:
            corpora[spec.measure_id] = build_corpus(spec.measure_id, {u: d.tokens for u, d in docs.items()},
                                                    lsi_topics=cfg.lsi_topics)
        except Exception as e:
            corpus_errors[spec.measure_id] = describe_failure(e)

    thresholds = cfg.thresholds
    results: Dict[str, List[MeasureResult]] = {}
    for uri_m, doc_m in docs.items():
        row = []
        for spec in specs:
            measure_id = spec.measure_id
            threshold = thresholds[measure_id]
            flags = _measure_flags(spec, doc_m)
            try:
                if measure_id in corpus_errors:
                    raise UndefinedScoreError(corpus_errors[measure_id])
                score = compute_score(measure_id, doc_f, doc_m, corpora.get(measure_id))
                row.append(MeasureResult(measure_id, score, threshold, apply_threshold(spec, score, threshold), flags))
            except Exception as e:
                message = describe_failure(e)
                errors.append(ReportError(stage='score', message=f'{measure_id}: {message}', uri_t=tm.uri_t,
                                          uri_m=uri_m))
                row.append(MeasureResult(measure_id, None, threshold, TopicStatus.ON_TOPIC, flags, error=message))
        results[uri_m] = row
    return results


TimeMapOutcome = Tuple[str, Dict[str, List[MeasureResult]], List[ReportError]]


def _score_batch(timemaps: Sequence[TimeMap], cfg: RunConfig, failures: Dict[str, str]) -> List[TimeMapOutcome]:
    provider = CachedContentProvider(cfg.cache_dir, failures)
    outcomes = []
    for i, tm in enumerate(timemaps):
        errors = []
        results = evaluate_timemap(tm, cfg, provider, errors)
        n_off = sum(any(r.topic_status is TopicStatus.OFF_TOPIC for r in rs) for rs in results.values())
        print(f'[{i + 1}/{len(timemaps)}] {tm.uri_t}: {len(results)} mementos scored, {n_off} off-topic')
        outcomes.append((tm.uri_t, results, errors))
    return outcomes


@ray.remote
def _score_batch_task(timemaps, cfg, failures):
    return _score_batch(timemaps, cfg, failures)


def _score_with_ray(timemaps: Sequence[TimeMap], cfg: RunConfig, failures: Dict[str, str]) -> List[TimeMapOutcome]:
    if not ray.is_initialized():
        ray.init(num_cpus=cfg.concurrency_limit,
                 runtime_env={'env_vars': {
                     'OFFTOPIC_LOGGING_LEVEL': os.getenv('OFFTOPIC_LOGGING_LEVEL', 'WARN')
                 }})
    batches = get_balanced_partitions([len(tm) for tm in timemaps], cfg.concurrency_limit)
    futures = [_score_batch_task.remote([timemaps[i] for i in batch], cfg, failures) for batch in batches]
    by_uri_t = {outcome[0]: outcome for batch in ray.get(futures) for outcome in batch}
    return [by_uri_t[tm.uri_t] for tm in timemaps]


def load_collection(cfg: RunConfig, timing_raw: Dict[str, float] = None) -> Tuple[ResolvedSource, Dict[str, str]]:
    """Resolve the input to TimeMaps and prefetch their mementos. Returns the TimeMaps and the fetch failures."""
    timing_raw = timing_raw if timing_raw is not None else {}
    fetcher = MementoFetcher(cfg.cache_dir, cfg.fetch, offline=cfg.offline)

    with _timer('resolve', timing_raw):
        resolved = resolve_source(cfg.source,
                                  fetcher,
                                  archiveit_base_url=cfg.archiveit_base_url,
                                  archiveit_wayback_url=cfg.archiveit_wayback_url)
    if not resolved.timemaps:
        raise EmptyInputError(f'no TimeMaps could be resolved from {cfg.source}')

    with _timer('fetch', timing_raw):
        failures = prefetch(resolved.timemaps, fetcher, workers=cfg.concurrency_limit)
    return resolved, failures


def run_collection(cfg: RunConfig, persist: bool = True) -> CollectionReport:
    timing_raw = {}
    resolved, failures = load_collection(cfg, timing_raw)
    report = CollectionReport(errors=list(resolved.errors))

    with _timer('score', timing_raw):
        if cfg.concurrency_limit > 1 and len(resolved.timemaps) > 1:
            outcomes = _score_with_ray(resolved.timemaps, cfg, failures)
        else:
            outcomes = _score_batch(resolved.timemaps, cfg, failures)

    for uri_t, results, errors in outcomes:
        report.errors.extend(errors)
        if results:
            report.add_timemap(uri_t, results)
    if not report.timemaps:
        raise TotalFailureError(f'none of the {len(resolved.timemaps)} TimeMaps could be scored; '
                                f'first error: {report.errors[0].message if report.errors else "unknown"}')

    if persist and cfg.output_path:
        with _timer('write', timing_raw):
            write_report(report, cfg.output_format, cfg.output_path)
    print(f'{len(report)} TimeMaps scored, {len(report.errors)} errors - {format_timing(timing_raw)}')
    return report

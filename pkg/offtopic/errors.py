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
Exceptions raised by offtopic. Every class carries the process exit code the command line maps it to.
"""


class OffTopicError(Exception):
    exit_code = 4


class UsageError(OffTopicError, ValueError):
    exit_code = 2


class EmptyInputError(OffTopicError):
    exit_code = 3


class EmptyTimeMapError(EmptyInputError):
    pass


class EmptyCollectionError(EmptyInputError):
    pass


class TotalFailureError(OffTopicError):
    """Nothing in the input could be scored."""


class TimeMapParseError(OffTopicError, ValueError):
    pass


class FetchFailedError(OffTopicError):

    def __init__(self, uri: str, status: int = None, reason: str = None):
        self.uri = uri
        self.status = status
        self.reason = reason
        detail = f'status {status}' if status is not None else (reason or 'unknown error')
        super().__init__(f'fetch-failed({detail}): {uri}')


class RedirectLoopError(FetchFailedError):

    def __init__(self, uri: str, reason: str = None):
        super().__init__(uri, reason=reason or 'redirect loop')


class ScrapeError(OffTopicError):

    def __init__(self, page: str, reason: str):
        self.page = page
        super().__init__(f'cannot scrape {page}: {reason}')


class UndefinedScoreError(OffTopicError, ValueError):
    pass


class DegenerateFirstMementoError(UndefinedScoreError):
    pass


class UndefinedFingerprintError(UndefinedScoreError):
    pass


class UndefinedCorpusError(UndefinedScoreError):
    pass


class ContractViolationError(OffTopicError, ValueError):
    pass


class GoldStandardParseError(OffTopicError, ValueError):

    def __init__(self, message: str, line: int = None):
        self.line = line
        super().__init__(f'line {line}: {message}' if line is not None else message)


class CoverageError(OffTopicError, ValueError):
    pass

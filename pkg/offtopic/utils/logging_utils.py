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

import logging
import os


def set_basic_config(level):
    """
    This function sets the global logging format and level. It will be called when import offtopic
    """
    logging.basicConfig(format='%(levelname)s:%(asctime)s:%(message)s', level=level)


def get_logger(name: str) -> logging.Logger:
    """Per-module logger. The level follows OFFTOPIC_LOGGING_LEVEL (default WARN)."""
    logger = logging.getLogger(name)
    logger.setLevel(os.getenv('OFFTOPIC_LOGGING_LEVEL', 'WARN'))
    return logger


def format_timing(timing_raw: dict) -> str:
    return ' - '.join(f'{name}:{seconds:.2f}s' for name, seconds in timing_raw.items())

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
A unified tracking interface for sweep curves: every threshold step is logged to the selected backends.
"""
import dataclasses
import os
from enum import Enum
from pathlib import Path
from typing import List, Union

from offtopic.errors import UsageError


class Tracking(object):
    supported_backend = ['wandb', 'console']

    def __init__(self, project_name, experiment_name, default_backend: Union[str, List[str]] = 'console', config=None):
        if isinstance(default_backend, str):
            default_backend = [default_backend]
        for backend in default_backend:
            if backend not in self.supported_backend:
                raise UsageError(f'logger {backend} is not supported, pick from {self.supported_backend}')

        self.logger = {}

        if 'wandb' in default_backend:
            import wandb
            WANDB_API_KEY = os.environ.get("WANDB_API_KEY", None)
            if WANDB_API_KEY:
                wandb.login(key=WANDB_API_KEY)
            wandb.init(project=project_name, name=experiment_name, config=_to_json_serializable(config))
            self.logger['wandb'] = wandb

        if 'console' in default_backend:
            from offtopic.utils.logger.aggregate_logger import LocalLogger
            self.console_logger = LocalLogger(print_to_console=True)
            self.logger['console'] = self.console_logger

    def log(self, data, step, backend=None):
        for default_backend, logger_instance in self.logger.items():
            if backend is None or default_backend in backend:
                logger_instance.log(data=data, step=step)

    def finish(self):
        if 'wandb' in self.logger:
            self.logger['wandb'].finish()


def _to_json_serializable(x):
    if x is None:
        return None
    if dataclasses.is_dataclass(x):
        return _to_json_serializable(dataclasses.asdict(x))
    if isinstance(x, dict):
        return {str(k): _to_json_serializable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_to_json_serializable(v) for v in x]
    if isinstance(x, Path):
        return str(x)
    if isinstance(x, Enum):
        return x.value
    return x

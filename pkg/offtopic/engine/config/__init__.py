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
Default run settings, shipped as YAML and composed with hydra.
"""

import os
from typing import Iterable

from hydra import compose, initialize_config_module
from omegaconf import DictConfig

__all__ = ['load_config', 'apply_env_overrides', 'ENV_OVERRIDES']

# environment variable -> config key; these outrank the YAML defaults but not the command line
ENV_OVERRIDES = {
    'OTMT_CACHE_DIR': 'cache_dir',
    'OTMT_USER_AGENT': 'user_agent',
}


def apply_env_overrides(config: DictConfig, explicit_keys: Iterable[str] = ()) -> DictConfig:
    explicit_keys = set(explicit_keys)
    for env_name, key in ENV_OVERRIDES.items():
        value = os.getenv(env_name)
        if value and key not in explicit_keys:
            config[key] = value
    return config


def load_config(config_name: str = 'detect', overrides: Iterable[str] = ()) -> DictConfig:
    """Compose ``<config_name>.yaml`` with hydra-style ``key=value`` overrides, then apply the environment."""
    overrides = list(overrides)
    with initialize_config_module(config_module='offtopic.engine.config', version_base=None):
        config = compose(config_name=config_name, overrides=overrides)
    return apply_env_overrides(config, explicit_keys=[o.split('=', 1)[0].lstrip('+~') for o in overrides])

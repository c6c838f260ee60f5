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

import dataclasses
from typing import Dict, Type, TypeVar

from omegaconf import DictConfig, OmegaConf

T = TypeVar('T')


def update_dict_with_config(dictionary: Dict, config: DictConfig):
    for key in dictionary:
        if key in config and config[key] is not None:
            value = config[key]
            dictionary[key] = OmegaConf.to_container(value, resolve=True) if OmegaConf.is_config(value) else value


def dataclass_from_config(cls: Type[T], config: DictConfig, **extra) -> T:
    """Build ``cls`` from its defaults, overwritten by the matching keys of ``config`` and then by ``extra``."""
    assert dataclasses.is_dataclass(cls), f'{cls} is not a dataclass'
    fields = {
        f.name: f.default for f in dataclasses.fields(cls)
        if f.init and f.default is not dataclasses.MISSING
    }
    if config is not None:
        update_dict_with_config(fields, config)
    fields.update({k: v for k, v in extra.items() if v is not None})
    return cls(**fields)

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

# setup.py is the fallback installation script when pyproject.toml does not work
from setuptools import setup, find_packages
import os

version_folder = os.path.dirname(os.path.join(os.path.abspath(__file__)))

with open(os.path.join(version_folder, 'offtopic/version/version')) as f:
    __version__ = f.read().strip()

with open('requirements.txt') as f:
    required = f.read().splitlines()
    # wandb is an optional tracking backend
    install_requires = [item.strip() for item in required if item.strip() and item.strip()[0] != '#' and
                        item.strip() != 'wandb']

extras_require = {'test': ['pytest', 'yapf'], 'tracking': ['wandb']}

from pathlib import Path
this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text()

setup(
    name='offtopic',
    version=__version__,
    package_dir={'': '.'},
    packages=find_packages(where='.', include=['offtopic*']),
    license='Apache 2.0',
    author='The offtopic Authors',
    description='offtopic: off-topic memento detection for web archive collections',
    install_requires=install_requires,
    extras_require=extras_require,
    package_data={
        '': ['version/*'],
        'offtopic': ['engine/config/*.yaml'],
    },
    include_package_data=True,
    entry_points={'console_scripts': ['detect_off_topic = offtopic.cli:main']},
    long_description=long_description,
    long_description_content_type='text/markdown')

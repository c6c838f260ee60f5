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

from .config import PreprocessConfig
from .stopwords import DEFAULT_STOPWORD_LIST_ID, get_stopwords
from .tokenizer import split_words, term_frequencies, tokenize
from .boilerplate import remove_boilerplate
from .pipeline import Level, preprocess

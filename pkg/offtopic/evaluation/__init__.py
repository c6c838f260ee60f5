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

from .gold import GoldLabel, gold_standard_summary, import_goldstandard_tsv, load_gold_standard
from .metrics import ConfusionCounts, accuracy, combine_measures, combine_verdicts, confusion, f1
from .sweep import SweepSpec, combine_grid, load_scores, sweep, sweep_lsi_topics, write_curve

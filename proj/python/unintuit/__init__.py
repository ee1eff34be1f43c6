# Copyright 2026 The Unintuit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Find and explain unintuitive features of sentiment classifiers."""

from ._core import (
    BackendError,
    Corpus,
    DataError,
    Error,
    Model,
    Scorer,
    UsageError,
    ablate,
    aggregate_judgments,
    build_bundle,
    categorize,
    correlate,
    default_config,
    diagnose,
    mcnemar,
    run_pipeline,
    tokenize,
    train,
)

__all__ = [
    "BackendError",
    "Corpus",
    "DataError",
    "Error",
    "Model",
    "Scorer",
    "UsageError",
    "ablate",
    "aggregate_judgments",
    "build_bundle",
    "categorize",
    "correlate",
    "default_config",
    "diagnose",
    "mcnemar",
    "run_pipeline",
    "tokenize",
    "train",
]

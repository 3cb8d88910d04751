# Copyright 2026 The qubopress Authors
#
#    Licensed under the Apache License, Version 2.0 (the "License");
#    you may not use this file except in compliance with the License.
#    You may obtain a copy of the License at
#
#        http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS,
#    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#    See the License for the specific language governing permissions and
#    limitations under the License.

from qubopress._core import (
    CompressionPlan,
    Granularity,
    InputError,
    ModelDescriptor,
    NoThresholdCrossing,
    OracleError,
    QuboMatrix,
    SearchState,
    Solution,
    anneal,
    brute_force_solve,
    build_qubo,
    decode_solution,
    init_beta,
    load_descriptor,
    reduction_rate,
    search,
    surrogate_accuracy,
)

__version__ = "0.1.0"

# Copyright 2020 The Authors.
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

"""Leader selection and dwell-time certification for switched networks."""

from ._core import (
    CapabilityError,
    Config,
    DegenerateInstance,
    InputError,
    NumericalError,
    SynthesisError,
    compare,
    eigenvalues,
    initial_leader_set,
    load_config,
    metric_f,
    parse_config,
    select,
    simulate,
    sweep_dwell,
    tddt_window,
)

__all__ = [
    "CapabilityError",
    "Config",
    "DegenerateInstance",
    "InputError",
    "NumericalError",
    "SynthesisError",
    "compare",
    "eigenvalues",
    "initial_leader_set",
    "load_config",
    "metric_f",
    "parse_config",
    "select",
    "simulate",
    "sweep_dwell",
    "tddt_window",
]

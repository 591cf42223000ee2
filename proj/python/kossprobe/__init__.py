# Copyright 2026 The kossprobe Authors
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

"""Probe a qubit dissipator's Kossakowski matrix with scattered electrons."""

from ._core import (
    CHANNEL_LABELS,
    PARAMETER_NAMES,
    QUARTER_WAVE_PHASE,
    InputError,
    NotCompletelyPositive,
    NumericalRefusal,
    adjudicate,
    bloch_evolve,
    build_matrix,
    coefficients,
    coefficients_physical,
    cp_check,
    d_tilde,
    d_tilde_bruteforce,
    estimate,
    forward,
    invert_exact,
    invert_noisy,
    kraus_noise,
    negative_rate_demo,
    psd_project,
    run_csv,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "CHANNEL_LABELS",
    "PARAMETER_NAMES",
    "QUARTER_WAVE_PHASE",
    "InputError",
    "NotCompletelyPositive",
    "NumericalRefusal",
    "adjudicate",
    "bloch_evolve",
    "build_matrix",
    "coefficients",
    "coefficients_physical",
    "cp_check",
    "d_tilde",
    "d_tilde_bruteforce",
    "estimate",
    "forward",
    "invert_exact",
    "invert_noisy",
    "kraus_noise",
    "negative_rate_demo",
    "psd_project",
    "run_csv",
    "simulate",
]

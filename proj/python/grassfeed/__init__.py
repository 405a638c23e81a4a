# SPDX-License-Identifier: Apache-2.0
#
# grassfeed - Grassmannian differential CSI feedback for interference alignment
# Copyright (C) 2026 The grassfeed authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from ._core import (
    Codebook,
    Codec,
    GrassfeedError,
    channel_path,
    chordal_distance,
    clarke_autocorrelation,
    distortion_approx,
    exp_map,
    experiments,
    fit_ar,
    frequency_response,
    householder,
    log_map,
    normalize,
    paired_t_test,
    run_experiment,
    solve_alignment,
    sum_rate,
)

__version__ = "0.1.0"

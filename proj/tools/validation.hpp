// SPDX-License-Identifier: Apache-2.0
//
// irsofdm: wideband IRS-assisted MU-MISO-OFDM beamforming simulator
// Copyright (C) 2026 The irsofdm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

namespace irsofdm::validation {

struct CheckResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

CheckResult factorization_oracle();     // A1
CheckResult rate_mse_equivalence();     // A2
CheckResult monotone_convergence();     // A3
CheckResult theta_search_optimality();  // A4
CheckResult scheme_ordering();          // A5
CheckResult resolution_saturation();    // A6
CheckResult passivity_and_model();      // A7
CheckResult power_feasibility();        // A8
CheckResult determinism();              // A9

/// All checks, reported in criterion order through `print`.
std::vector<CheckResult> run_all(void (*print)(const CheckResult&) = nullptr);

std::string format_line(const CheckResult& result);

}  // namespace irsofdm::validation

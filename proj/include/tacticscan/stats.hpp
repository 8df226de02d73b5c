// Copyright 2026 The TacticScan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

namespace tacticscan {

/// Samples at or below this combined size get an exact p-value.
inline constexpr std::size_t kExactMannWhitneyLimit = 16;

struct MannWhitneyResult {
    double u_a = 0.0;  ///< U statistic of the first sample
    double u_b = 0.0;  ///< n_a * n_b - u_a
    double p_two_sided = 1.0;
    bool exact = false;
};

/// Midranks over the pooled sample, in input order.
std::vector<double> midranks(std::span<const double> values);

/// Two-sided Mann-Whitney U test. Small samples enumerate every split of the
/// pooled midranks; larger ones use the normal approximation with tie and
/// continuity corrections. Throws Error on an empty sample.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

}  // namespace tacticscan

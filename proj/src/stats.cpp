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

#include "tacticscan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tacticscan/error.hpp"

namespace tacticscan {

std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        // Positions i..j-1 share rank (i+1 + j) / 2.
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
        i = j;
    }
    return ranks;
}

namespace {

// Exact null distribution: every n_a-subset of the pooled ranks is equally
// likely; count subsets whose U falls on either side of the observed one.
double exact_p(const std::vector<double>& ranks, std::size_t n_a, double u_obs) {
    const std::size_t n = ranks.size();
    const double offset = static_cast<double>(n_a) * static_cast<double>(n_a + 1) / 2.0;
    std::size_t total = 0, low = 0, high = 0;
    constexpr double tol = 1e-9;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n_a), true);
    // prev_permutation over a descending-sorted mask visits every subset once.
    do {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) sum += ranks[i];
        const double u = sum - offset;
        ++total;
        if (u <= u_obs + tol) ++low;
        if (u >= u_obs - tol) ++high;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    const double p = 2.0 * static_cast<double>(std::min(low, high)) / static_cast<double>(total);
    return std::min(1.0, p);
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error("mann_whitney_u: empty sample");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = midranks(pooled);

    const auto n_a = static_cast<double>(a.size());
    const auto n_b = static_cast<double>(b.size());
    const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

    MannWhitneyResult r;
    r.u_a = rank_sum_a - n_a * (n_a + 1.0) / 2.0;
    r.u_b = n_a * n_b - r.u_a;

    if (pooled.size() <= kExactMannWhitneyLimit) {
        r.exact = true;
        r.p_two_sided = exact_p(ranks, a.size(), r.u_a);
        return r;
    }

    const double n = n_a + n_b;
    double ties = 0.0;
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto t = static_cast<double>(j - i);
        ties += t * t * t - t;
        i = j;
    }
    const double mean = n_a * n_b / 2.0;
    const double variance = n_a * n_b / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if (variance <= 0.0) {
        r.p_two_sided = 1.0;
        return r;
    }
    const double z = std::max(0.0, std::abs(r.u_a - mean) - 0.5) / std::sqrt(variance);
    r.p_two_sided = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return r;
}

}  // namespace tacticscan

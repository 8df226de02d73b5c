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

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tacticscan/corpus.hpp"
#include "tacticscan/error.hpp"
#include "tacticscan/preprocess.hpp"

namespace tacticscan {

/// Encoder input length minus the two reserved positions (CLS and SEP).
inline constexpr std::size_t kDefaultWindowSize = 510;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using EmbeddingVector = Vector<double>;

struct WindowedSequence {
    std::vector<std::vector<std::string>> windows;

    std::size_t count() const { return windows.size(); }
};

/// Number of windows a sequence of n tokens needs: max(1, ceil(n / size)).
constexpr std::size_t window_count(std::size_t n, std::size_t window_size = kDefaultWindowSize) {
    return n == 0 ? 1 : (n + window_size - 1) / window_size;
}

/// Consecutive, non-overlapping windows; all full except possibly the last.
/// An empty sequence yields a single empty window.
WindowedSequence window(const TokenSequence& tokens, std::size_t window_size = kDefaultWindowSize);

/// Component-wise mean. Throws Error on an empty list and DimensionMismatch
/// when dimensions differ.
template <typename Scalar>
Vector<Scalar> mean_pool(std::span<const Vector<Scalar>> vectors) {
    if (vectors.empty()) throw Error("mean_pool of an empty list");
    Vector<Scalar> sum = Vector<Scalar>::Zero(vectors.front().size());
    for (const auto& v : vectors) {
        if (v.size() != sum.size())
            throw DimensionMismatch("mean_pool: dimension " + std::to_string(v.size()) +
                                    " != " + std::to_string(sum.size()));
        sum += v;
    }
    return sum / static_cast<Scalar>(vectors.size());
}

inline EmbeddingVector mean_pool(const std::vector<EmbeddingVector>& vectors) {
    return mean_pool<double>(std::span<const EmbeddingVector>(vectors));
}

struct LengthStats {
    std::string tactic_id;
    /// Percentage of snippets needing at most k+1 windows, k = 0..3.
    std::array<double, 4> cumulative_percent{};
    std::size_t max_windows = 0;
};

/// Window-count distribution of each dataset (related and unrelated).
std::vector<LengthStats> length_stats(std::span<const TacticDataset> datasets,
                                      const Preprocessor& preprocessor,
                                      std::size_t window_size = kDefaultWindowSize);

/// CSV with header tactic,S1,S2,S3,S4,SMax; percentages with two decimals.
void write_length_stats_csv(std::ostream& out, std::span<const LengthStats> stats);

}  // namespace tacticscan

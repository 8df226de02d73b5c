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

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tacticscan/metrics.hpp"

namespace tacticscan {

/// Sample ids with class indices into class_labels.
struct LabeledSet {
    std::vector<std::string> ids;
    std::vector<std::size_t> labels;
    std::vector<std::string> class_labels;

    std::size_t size() const { return ids.size(); }
};

struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> ids;
    std::vector<std::size_t> fold_of;  // parallel to ids

    std::map<std::string, std::size_t> assignments() const;
    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Shuffles each class with the seed and deals its members round-robin,
/// continuing from the fold where the previous class stopped. Each fold
/// then holds floor or ceil of n_c / k members of every class c. Throws
/// Error naming any class with fewer than k members.
FoldPlan stratified_folds(const LabeledSet& data, std::size_t k, std::uint64_t seed);

/// Keeps every training index and adds uniform draws (with replacement)
/// from each smaller class until all classes reach the largest count.
std::vector<std::size_t> oversample(std::span<const std::size_t> train_indices,
                                    std::span<const std::size_t> labels, std::uint64_t seed);

/// Predicts the class index of a sample (by index into the LabeledSet).
using Predictor = std::function<std::size_t(std::size_t)>;
/// Trains on a multiset of sample indices.
using Learner = std::function<Predictor(std::span<const std::size_t>)>;

struct CvOptions {
    std::size_t k = 10;
    std::uint64_t seed = 42;
    bool oversample = false;
};

struct EvalReport {
    std::vector<std::string> labels;
    /// Precision and recall are fold means; F is their harmonic mean.
    std::vector<ClassMetrics> per_class;
    /// Unweighted mean over classes.
    ClassMetrics macro;
    std::vector<std::vector<ClassMetrics>> per_fold;
    std::vector<ConfusionMatrix> fold_matrices;
    AveragedConfusionMatrix averaged;
    double runtime_seconds = 0.0;
};

/// Combines per-fold matrices into a report.
EvalReport summarize(std::vector<ConfusionMatrix> folds);

/// Stratified k-fold cross-validation. Oversampling, when enabled, touches
/// the training split only. Training errors are rethrown with the fold index.
EvalReport cross_validate(const LabeledSet& data, const Learner& learner, const CvOptions& options);

/// Full report without the wall-clock runtime, so output is reproducible.
void to_json(nlohmann::json& j, const EvalReport& r);

}  // namespace tacticscan

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

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tacticscan/preprocess.hpp"

namespace tacticscan {

inline constexpr int kTdSchemaVersion = 1;

/// Minimum related and unrelated documents td_train accepts.
inline constexpr std::size_t kTdMinDocuments = 5;

/// Tactic Detector: indicator-term weights for one tactic plus a decision
/// threshold on the normalized document score.
struct TdModel {
    std::string tactic_id;
    std::map<std::string, double, std::less<>> term_weights;
    double threshold = 0.0;

    std::size_t vocab_size() const { return term_weights.size(); }
};

/// Weights every term seen in training by
///   w(t) = (df_related(t) / n_related) * (df_related(t) / df(t)),
/// i.e. how much of the tactic's documents contain t times how exclusive t
/// is to them. The threshold is the observed training score maximizing
/// training F-measure of the related class (lowest on ties).
TdModel td_train(std::string tactic_id, std::span<const TokenSequence> documents,
                 std::span<const bool> related);

/// Mean weight over the distinct tokens of the document; 0 when empty.
double td_score(const TokenSequence& tokens, const TdModel& model);

/// score >= threshold.
bool td_predict_binary(const TokenSequence& tokens, const TdModel& model);

/// Tactic with the highest score; ties go to the smallest tactic id.
const std::string& td_predict_multiclass(const TokenSequence& tokens,
                                         std::span<const TdModel> models);

void to_json(nlohmann::json& j, const TdModel& m);
void from_json(const nlohmann::json& j, TdModel& m);

}  // namespace tacticscan

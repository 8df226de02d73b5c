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

#include "tacticscan/td.hpp"

#include <algorithm>
#include <set>

#include "tacticscan/error.hpp"

namespace tacticscan {

namespace {

std::set<std::string_view> distinct(const TokenSequence& seq) {
    return {seq.tokens.begin(), seq.tokens.end()};
}

}  // namespace

TdModel td_train(std::string tactic_id, std::span<const TokenSequence> documents,
                 std::span<const bool> related) {
    if (documents.size() != related.size()) throw Error("td_train: documents/labels size mismatch");
    const auto n_related = static_cast<std::size_t>(std::count(related.begin(), related.end(), true));
    const auto n_unrelated = related.size() - n_related;
    if (n_related < kTdMinDocuments || n_unrelated < kTdMinDocuments)
        throw Error("td_train(" + tactic_id + "): need at least 5 related and 5 unrelated documents, got " +
                    std::to_string(n_related) + " and " + std::to_string(n_unrelated));

    struct Counts {
        std::size_t related = 0;
        std::size_t all = 0;
    };
    std::map<std::string_view, Counts> df;
    std::vector<std::set<std::string_view>> doc_terms;
    doc_terms.reserve(documents.size());
    for (std::size_t i = 0; i < documents.size(); ++i) {
        doc_terms.push_back(distinct(documents[i]));
        for (auto t : doc_terms.back()) {
            auto& c = df[t];
            ++c.all;
            if (related[i]) ++c.related;
        }
    }
    if (df.empty()) throw Error("td_train(" + tactic_id + "): empty vocabulary after preprocessing");

    TdModel model;
    model.tactic_id = std::move(tactic_id);
    for (const auto& [term, c] : df) {
        const double coverage = static_cast<double>(c.related) / static_cast<double>(n_related);
        const double specificity = static_cast<double>(c.related) / static_cast<double>(c.all);
        model.term_weights.emplace(std::string(term), coverage * specificity);
    }

    // Threshold: sweep candidate scores from high to low; predicting related
    // for score >= theta, the best F with the lowest theta wins.
    std::vector<std::pair<double, bool>> scored;
    scored.reserve(documents.size());
    for (std::size_t i = 0; i < documents.size(); ++i) {
        double sum = 0.0;
        for (auto t : doc_terms[i]) sum += model.term_weights.find(t)->second;
        const double score = doc_terms[i].empty() ? 0.0 : sum / static_cast<double>(doc_terms[i].size());
        scored.emplace_back(score, related[i]);
    }
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double best_f = -1.0;
    double best_theta = scored.front().first;
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scored.size();) {
        const double theta = scored[i].first;
        for (; i < scored.size() && scored[i].first == theta; ++i)
            (scored[i].second ? tp : fp) += 1;
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall = static_cast<double>(tp) / static_cast<double>(n_related);
        const double f = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        if (f >= best_f) {
            best_f = f;
            best_theta = theta;
        }
    }
    model.threshold = std::clamp(best_theta, 0.0, 1.0);
    return model;
}

double td_score(const TokenSequence& tokens, const TdModel& model) {
    const auto terms = distinct(tokens);
    if (terms.empty()) return 0.0;
    double sum = 0.0;
    for (auto t : terms)
        if (const auto it = model.term_weights.find(t); it != model.term_weights.end()) sum += it->second;
    return sum / static_cast<double>(terms.size());
}

bool td_predict_binary(const TokenSequence& tokens, const TdModel& model) {
    return td_score(tokens, model) >= model.threshold;
}

const std::string& td_predict_multiclass(const TokenSequence& tokens, std::span<const TdModel> models) {
    if (models.empty()) throw Error("td_predict_multiclass: no models");
    const TdModel* best = nullptr;
    double best_score = 0.0;
    for (const auto& m : models) {
        const double s = td_score(tokens, m);
        if (!best || s > best_score || (s == best_score && m.tactic_id < best->tactic_id)) {
            best = &m;
            best_score = s;
        }
    }
    return best->tactic_id;
}

void to_json(nlohmann::json& j, const TdModel& m) {
    // std::map iteration keeps term_weights sorted by term.
    nlohmann::json weights = nlohmann::json::object();
    for (const auto& [term, w] : m.term_weights) weights[term] = w;
    j = nlohmann::json{{"schema_version", kTdSchemaVersion},
                       {"tactic_id", m.tactic_id},
                       {"threshold", m.threshold},
                       {"term_weights", std::move(weights)}};
}

void from_json(const nlohmann::json& j, TdModel& m) {
    const int version = j.at("schema_version").get<int>();
    if (version != kTdSchemaVersion)
        throw Error("unsupported TD schema_version " + std::to_string(version));
    m.tactic_id = j.at("tactic_id").get<std::string>();
    m.threshold = j.at("threshold").get<double>();
    if (m.threshold < 0.0 || m.threshold > 1.0) throw Error("TD threshold outside [0, 1]");
    m.term_weights.clear();
    for (const auto& [term, w] : j.at("term_weights").items()) {
        const double v = w.get<double>();
        if (v < 0.0 || v > 1.0) throw Error("TD weight of '" + term + "' outside [0, 1]");
        m.term_weights.emplace(term, v);
    }
}

}  // namespace tacticscan

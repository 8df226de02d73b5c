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

#include "tacticscan/cross_validation.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "tacticscan/error.hpp"
#include "tacticscan/random.hpp"

namespace tacticscan {

std::map<std::string, std::size_t> FoldPlan::assignments() const {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], fold_of[i]);
    return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

FoldPlan stratified_folds(const LabeledSet& data, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error("fold count must be at least 2");
    if (data.labels.size() != data.ids.size()) throw Error("ids/labels size mismatch");
    std::vector<std::vector<std::size_t>> members(data.class_labels.size());
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
        if (data.labels[i] >= members.size()) throw Error("label index out of range");
        members[data.labels[i]].push_back(i);
    }
    for (std::size_t c = 0; c < members.size(); ++c)
        if (members[c].size() < k)
            throw Error("class '" + data.class_labels[c] + "' has " + std::to_string(members[c].size()) +
                        " samples, fewer than " + std::to_string(k) + " folds");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.ids = data.ids;
    plan.fold_of.assign(data.ids.size(), 0);
    Rng rng(seed);
    std::size_t next = 0;
    for (auto& group : members) {
        rng.shuffle(std::span<std::size_t>(group));
        for (auto idx : group) {
            plan.fold_of[idx] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

std::vector<std::size_t> oversample(std::span<const std::size_t> train_indices,
                                    std::span<const std::size_t> labels, std::uint64_t seed) {
    std::map<std::size_t, std::vector<std::size_t>> by_class;
    for (auto idx : train_indices) by_class[labels[idx]].push_back(idx);
    std::size_t target = 0;
    for (const auto& [c, members] : by_class) target = std::max(target, members.size());

    std::vector<std::size_t> out(train_indices.begin(), train_indices.end());
    Rng rng(seed);
    for (const auto& [c, members] : by_class)
        for (std::size_t n = members.size(); n < target; ++n)
            out.push_back(members[static_cast<std::size_t>(rng.uniform_index(members.size()))]);
    return out;
}

EvalReport summarize(std::vector<ConfusionMatrix> folds) {
    if (folds.empty()) throw Error("no folds to summarize");
    EvalReport report;
    report.labels = folds.front().labels;
    const std::size_t C = report.labels.size();
    report.per_class.assign(C, {});
    for (const auto& m : folds) {
        auto metrics = prf(m);
        for (std::size_t c = 0; c < C; ++c) {
            report.per_class[c].precision += metrics[c].precision;
            report.per_class[c].recall += metrics[c].recall;
        }
        report.per_fold.push_back(std::move(metrics));
    }
    const double n = static_cast<double>(folds.size());
    for (auto& m : report.per_class) {
        m.precision /= n;
        m.recall /= n;
        m.f_measure = f_measure(m.precision, m.recall);
        report.macro.precision += m.precision / static_cast<double>(C);
        report.macro.recall += m.recall / static_cast<double>(C);
        report.macro.f_measure += m.f_measure / static_cast<double>(C);
    }
    report.averaged = average(folds);
    report.fold_matrices = std::move(folds);
    return report;
}

EvalReport cross_validate(const LabeledSet& data, const Learner& learner, const CvOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const FoldPlan plan = stratified_folds(data, options.k, options.seed);
    std::vector<ConfusionMatrix> folds;
    for (std::size_t f = 0; f < options.k; ++f) {
        const auto test = plan.test_indices(f);
        auto train = plan.train_indices(f);
        if (options.oversample) train = oversample(train, data.labels, options.seed + f);

        const std::set<std::string> test_ids = [&] {
            std::set<std::string> s;
            for (auto i : test) s.insert(data.ids[i]);
            return s;
        }();
        for (auto i : train)
            if (test_ids.count(data.ids[i]))
                throw std::logic_error("training sample " + data.ids[i] + " leaks into test fold");

        ConfusionMatrix m(data.class_labels);
        try {
            const Predictor predict = learner(train);
            for (auto i : test) m.add(data.labels[i], predict(i));
        } catch (const std::exception& e) {
            throw Error("fold " + std::to_string(f) + ": " + e.what());
        }
        folds.push_back(std::move(m));
    }
    EvalReport report = summarize(std::move(folds));
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

namespace {

nlohmann::json metrics_json(const ClassMetrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"f_measure", m.f_measure}};
}

template <typename Scalar>
nlohmann::json matrix_json(const BasicConfusionMatrix<Scalar>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.counts.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.counts.cols(); ++c) row.push_back(m.counts(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void to_json(nlohmann::json& j, const EvalReport& r) {
    j = nlohmann::json::object();
    j["labels"] = r.labels;
    nlohmann::json per_class = nlohmann::json::object();
    for (std::size_t c = 0; c < r.labels.size(); ++c) per_class[r.labels[c]] = metrics_json(r.per_class[c]);
    j["per_class"] = std::move(per_class);
    j["macro"] = metrics_json(r.macro);
    nlohmann::json folds = nlohmann::json::array();
    for (std::size_t f = 0; f < r.fold_matrices.size(); ++f) {
        nlohmann::json fold{{"confusion_matrix", matrix_json(r.fold_matrices[f])}};
        nlohmann::json metrics = nlohmann::json::object();
        for (std::size_t c = 0; c < r.labels.size(); ++c) metrics[r.labels[c]] = metrics_json(r.per_fold[f][c]);
        fold["per_class"] = std::move(metrics);
        folds.push_back(std::move(fold));
    }
    j["folds"] = std::move(folds);
    j["averaged_confusion_matrix"] = matrix_json(r.averaged);
}

}  // namespace tacticscan

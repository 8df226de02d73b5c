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

#include "tacticscan/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "tacticscan/error.hpp"

namespace tacticscan {

std::string_view to_string(ClassifierKind kind) { return kind == ClassifierKind::Td ? "td" : "mlp"; }

ClassifierKind parse_classifier(std::string_view name) {
    if (name == "td") return ClassifierKind::Td;
    if (name == "mlp") return ClassifierKind::Mlp;
    throw Error("unknown classifier '" + std::string(name) + "'");
}

namespace {

void add_sample(LabeledCorpus& corpus, const CodeSnippet& s, std::size_t label,
                const Preprocessor& preprocessor) {
    corpus.set.ids.push_back(s.id);
    corpus.set.labels.push_back(label);
    corpus.tokens.push_back(preprocessor(s.text, s.id));
}

std::vector<std::size_t> subset_labels(const LabeledCorpus& corpus, std::span<const std::size_t> idx) {
    std::vector<std::size_t> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(corpus.set.labels[i]);
    return out;
}

}  // namespace

LabeledCorpus binary_corpus(const TacticDataset& dataset, const Preprocessor& preprocessor) {
    const TacticDataset* one[] = {&dataset};
    return merged_binary_corpus(one, dataset.tactic_id, preprocessor);
}

LabeledCorpus merged_binary_corpus(std::span<const TacticDataset* const> datasets,
                                   std::string positive_label, const Preprocessor& preprocessor) {
    LabeledCorpus corpus;
    corpus.set.class_labels = {std::string(kUnrelated), std::move(positive_label)};
    std::set<std::string> seen;
    for (const auto* ds : datasets) {
        for (const auto& s : ds->related)
            if (seen.insert(s.id).second) add_sample(corpus, s, 1, preprocessor);
    }
    for (const auto* ds : datasets) {
        for (const auto& s : ds->unrelated)
            if (seen.insert(s.id).second) add_sample(corpus, s, 0, preprocessor);
    }
    return corpus;
}

LabeledCorpus multiclass_corpus(std::span<const TacticDataset* const> datasets,
                                const Preprocessor& preprocessor) {
    LabeledCorpus corpus;
    for (const auto* ds : datasets) corpus.set.class_labels.push_back(ds->tactic_id);
    std::sort(corpus.set.class_labels.begin(), corpus.set.class_labels.end());
    corpus.set.class_labels.erase(
        std::unique(corpus.set.class_labels.begin(), corpus.set.class_labels.end()),
        corpus.set.class_labels.end());
    std::set<std::string> seen;
    for (const auto* ds : datasets) {
        const auto label = static_cast<std::size_t>(
            std::find(corpus.set.class_labels.begin(), corpus.set.class_labels.end(), ds->tactic_id) -
            corpus.set.class_labels.begin());
        for (const auto& s : ds->related)
            if (seen.insert(s.id).second) add_sample(corpus, s, label, preprocessor);
    }
    return corpus;
}

Learner make_td_learner(const LabeledCorpus& corpus) {
    const auto& classes = corpus.set.class_labels;
    const bool binary = classes.size() == 2 && classes[0] == kUnrelated;
    return [&corpus, binary](std::span<const std::size_t> train) -> Predictor {
        std::vector<TokenSequence> docs;
        docs.reserve(train.size());
        for (auto i : train) docs.push_back(corpus.tokens[i]);
        const auto labels = subset_labels(corpus, train);
        const auto& classes = corpus.set.class_labels;

        auto train_one = [&](std::size_t positive) {
            std::unique_ptr<bool[]> related(new bool[labels.size()]);
            for (std::size_t j = 0; j < labels.size(); ++j) related[j] = labels[j] == positive;
            return td_train(classes[positive], docs, std::span<const bool>(related.get(), labels.size()));
        };

        if (binary) {
            auto model = std::make_shared<TdModel>(train_one(1));
            return [&corpus, model](std::size_t i) -> std::size_t {
                return td_predict_binary(corpus.tokens[i], *model) ? 1 : 0;
            };
        }
        auto models = std::make_shared<std::vector<TdModel>>();
        for (std::size_t c = 0; c < classes.size(); ++c) models->push_back(train_one(c));
        return [&corpus, models](std::size_t i) -> std::size_t {
            const auto& id = td_predict_multiclass(corpus.tokens[i], *models);
            const auto& classes = corpus.set.class_labels;
            return static_cast<std::size_t>(std::find(classes.begin(), classes.end(), id) - classes.begin());
        };
    };
}

Learner make_mlp_learner(const LabeledCorpus& corpus, const EmbeddingBackend& backend,
                         const TrainConfig& config, std::size_t window_size) {
    auto reps = std::make_shared<std::vector<EmbeddingVector>>();
    reps->reserve(corpus.tokens.size());
    for (const auto& t : corpus.tokens) reps->push_back(represent(t, backend, window_size));
    const std::string backend_name = backend.name();
    return [&corpus, reps, config, backend_name](std::span<const std::size_t> train) -> Predictor {
        std::vector<EmbeddingVector> x;
        x.reserve(train.size());
        for (auto i : train) x.push_back((*reps)[i]);
        const auto labels = subset_labels(corpus, train);
        auto model = std::make_shared<MlpModel>(
            mlp_train(x, labels, corpus.set.class_labels, config, backend_name).model);
        return [reps, model](std::size_t i) -> std::size_t {
            return mlp_predict((*reps)[i], *model).index;
        };
    };
}

namespace {

struct Unit {
    std::string name;
    std::vector<const TacticDataset*> datasets;
};

std::vector<Unit> experiment_units(int experiment, const std::map<std::string, TacticDataset>& datasets,
                                   const TacticTaxonomy& taxonomy) {
    std::vector<Unit> units;
    if (experiment == 1) {
        std::set<std::string> done;
        for (const auto* node : taxonomy.included_tactics()) {
            if (const auto it = datasets.find(node->id); it != datasets.end()) {
                units.push_back({node->id, {&it->second}});
                done.insert(node->id);
            }
        }
        for (const auto& [id, ds] : datasets)
            if (!done.count(id)) units.push_back({id, {&ds}});
        return units;
    }
    for (const auto* category : taxonomy.experiment_categories()) {
        Unit unit{category->id, {}};
        for (const auto& id : taxonomy.tactics_of(*category))
            if (const auto it = datasets.find(id); it != datasets.end()) unit.datasets.push_back(&it->second);
        if (unit.datasets.size() >= 2) units.push_back(std::move(unit));
    }
    return units;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::map<std::string, TacticDataset>& datasets,
                                const TacticTaxonomy& taxonomy) {
    if (config.experiment < 1 || config.experiment > 3) throw Error("experiment must be 1, 2 or 3");
    if (config.classifiers.empty()) throw Error("no classifier selected");
    for (auto kind : config.classifiers)
        if (kind == ClassifierKind::Mlp && !config.backend)
            throw Error("the mlp classifier needs an embedding backend");

    const Preprocessor preprocessor(config.preprocess);
    CvOptions cv{config.k, config.seed, config.experiment == 3};

    ExperimentResult result;
    result.experiment = config.experiment;
    for (const auto& unit : experiment_units(config.experiment, datasets, taxonomy)) {
        LabeledCorpus corpus;
        if (config.experiment == 1) corpus = binary_corpus(*unit.datasets.front(), preprocessor);
        else if (config.experiment == 2) corpus = merged_binary_corpus(unit.datasets, unit.name, preprocessor);
        else corpus = multiclass_corpus(unit.datasets, preprocessor);

        for (auto kind : config.classifiers) {
            const Learner learner =
                kind == ClassifierKind::Td
                    ? make_td_learner(corpus)
                    : make_mlp_learner(corpus, *config.backend, config.train, config.window_size);
            EvalReport report;
            try {
                report = cross_validate(corpus.set, learner, cv);
            } catch (const std::exception& e) {
                throw Error(unit.name + " (" + std::string(to_string(kind)) + "): " + e.what());
            }
            const auto& labels = report.labels;
            if (config.experiment == 3) {
                for (std::size_t c = 0; c < labels.size(); ++c) {
                    const auto n = static_cast<std::size_t>(
                        std::count(corpus.set.labels.begin(), corpus.set.labels.end(), c));
                    result.rows.push_back({unit.name + ":" + labels[c], std::string(to_string(kind)), n,
                                           report.per_class[c]});
                }
            } else {
                result.rows.push_back(
                    {unit.name, std::string(to_string(kind)), corpus.set.size(), report.per_class[1]});
            }
            result.reports.push_back({unit.name, std::string(to_string(kind)), std::move(report)});
        }
    }

    if (config.classifiers.size() == 2 && !result.rows.empty()) {
        Comparison c;
        c.classifier_a = to_string(config.classifiers[0]);
        c.classifier_b = to_string(config.classifiers[1]);
        for (const auto& row : result.rows) {
            if (row.classifier == c.classifier_a) c.f_a.push_back(row.metrics.f_measure);
            else if (row.classifier == c.classifier_b) c.f_b.push_back(row.metrics.f_measure);
        }
        c.test = mann_whitney_u(c.f_a, c.f_b);
        result.comparison = std::move(c);
    }
    return result;
}

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
    out << "tactic,classifier,precision,recall,f\n";
    for (const auto& row : result.rows)
        out << row.unit << ',' << row.classifier << ',' << fixed4(row.metrics.precision) << ','
            << fixed4(row.metrics.recall) << ',' << fixed4(row.metrics.f_measure) << '\n';
}

nlohmann::json comparison_json(const Comparison& c) {
    return {{"classifier_a", c.classifier_a},
            {"classifier_b", c.classifier_b},
            {"f_a", c.f_a},
            {"f_b", c.f_b},
            {"U", c.test.u_a},
            {"U_b", c.test.u_b},
            {"p", c.test.p_two_sided},
            {"exact", c.test.exact}};
}

nlohmann::json experiment_json(const ExperimentResult& result) {
    nlohmann::json j{{"experiment", result.experiment}};
    nlohmann::json units = nlohmann::json::array();
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const auto& r = result.reports[i];
        units.push_back({{"unit", r.unit}, {"classifier", r.classifier}, {"report", r.report}});
    }
    j["units"] = std::move(units);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows)
        rows.push_back({{"tactic", row.unit},
                        {"classifier", row.classifier},
                        {"sample_size", row.sample_size},
                        {"precision", row.metrics.precision},
                        {"recall", row.metrics.recall},
                        {"f", row.metrics.f_measure}});
    j["rows"] = std::move(rows);
    j["comparison"] = result.comparison ? comparison_json(*result.comparison) : nlohmann::json(nullptr);
    return j;
}

std::vector<double> read_f_column(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV");
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            cells.push_back(cell);
        }
        return cells;
    };
    const auto header = split(line);
    const auto col = std::find(header.begin(), header.end(), "f");
    if (col == header.end()) throw ParseError("CSV has no 'f' column");
    const auto index = static_cast<std::size_t>(col - header.begin());
    std::vector<double> values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (index >= cells.size()) throw ParseError("line " + std::to_string(lineno) + ": missing f value");
        try {
            std::size_t used = 0;
            values.push_back(std::stod(cells[index], &used));
            if (used != cells[index].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": invalid f value '" + cells[index] + "'");
        }
    }
    return values;
}

}  // namespace tacticscan

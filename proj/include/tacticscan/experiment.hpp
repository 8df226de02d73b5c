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

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tacticscan/corpus.hpp"
#include "tacticscan/cross_validation.hpp"
#include "tacticscan/embedding.hpp"
#include "tacticscan/mlp.hpp"
#include "tacticscan/preprocess.hpp"
#include "tacticscan/stats.hpp"
#include "tacticscan/taxonomy.hpp"
#include "tacticscan/td.hpp"

namespace tacticscan {

enum class ClassifierKind { Td, Mlp };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier(std::string_view name);

/// Preprocessed samples ready for cross-validation.
struct LabeledCorpus {
    LabeledSet set;
    std::vector<TokenSequence> tokens;
};

/// Binary corpus of one dataset: class 0 is UNRELATED, class 1 the tactic.
LabeledCorpus binary_corpus(const TacticDataset& dataset, const Preprocessor& preprocessor);

/// Related and unrelated snippets of several tactics pooled into one binary
/// task labelled `positive_label`. Snippets repeated across datasets are
/// kept once.
LabeledCorpus merged_binary_corpus(std::span<const TacticDataset* const> datasets,
                                   std::string positive_label, const Preprocessor& preprocessor);

/// Related snippets only, labelled by tactic id (labels sorted).
LabeledCorpus multiclass_corpus(std::span<const TacticDataset* const> datasets,
                                const Preprocessor& preprocessor);

/// TD learner. With two classes and class 0 UNRELATED it trains one binary
/// detector for class 1; otherwise one detector per class and argmax.
Learner make_td_learner(const LabeledCorpus& corpus);

/// MLP head over pooled window embeddings, computed once per sample.
Learner make_mlp_learner(const LabeledCorpus& corpus, const EmbeddingBackend& backend,
                         const TrainConfig& config, std::size_t window_size = kDefaultWindowSize);

struct ExperimentConfig {
    int experiment = 1;
    std::vector<ClassifierKind> classifiers{ClassifierKind::Td};
    std::size_t k = 10;
    std::uint64_t seed = 42;
    PreprocessConfig preprocess = PreprocessConfig::dataset();
    TrainConfig train = TrainConfig::head_only();
    /// Required when classifiers include Mlp.
    const EmbeddingBackend* backend = nullptr;
    std::size_t window_size = kDefaultWindowSize;
};

struct ExperimentRow {
    std::string unit;        ///< tactic (exp 1), category (exp 2), category:tactic (exp 3)
    std::string classifier;
    std::size_t sample_size = 0;
    ClassMetrics metrics;
};

struct UnitReport {
    std::string unit;
    std::string classifier;
    EvalReport report;
};

struct Comparison {
    std::string classifier_a;
    std::string classifier_b;
    std::vector<double> f_a;
    std::vector<double> f_b;
    MannWhitneyResult test;
};

struct ExperimentResult {
    int experiment = 1;
    std::vector<ExperimentRow> rows;
    std::vector<UnitReport> reports;
    std::optional<Comparison> comparison;
};

/// 1: per-tactic binary. 2: per-category binary over the merged datasets of
/// the category's tactics. 3: per-category multi-class over related
/// snippets, always with oversampling. Tactics without a dataset are
/// skipped; categories need at least two tactics with datasets. With two
/// classifiers a Mann-Whitney test compares their F columns.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::map<std::string, TacticDataset>& datasets,
                                const TacticTaxonomy& taxonomy = TacticTaxonomy::builtin());

/// tactic,classifier,precision,recall,f
void write_experiment_csv(std::ostream& out, const ExperimentResult& result);
nlohmann::json experiment_json(const ExperimentResult& result);

/// F values of a results CSV (any file with an "f" column).
std::vector<double> read_f_column(std::istream& in);

nlohmann::json comparison_json(const Comparison& c);

}  // namespace tacticscan

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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tacticscan/embedding.hpp"
#include "tacticscan/mlp.hpp"
#include "tacticscan/preprocess.hpp"
#include "tacticscan/td.hpp"

namespace tacticscan {

/// A trained model as loaded from disk.
struct ScanModel {
    std::string id;  ///< tactic id for TD and binary MLP, joined labels otherwise
    std::variant<TdModel, MlpModel> model;
};

/// Detects the model type from its JSON fields.
ScanModel load_scan_model(const std::filesystem::path& path);
ScanModel scan_model_from_json(const nlohmann::json& j);

struct FilePrediction {
    std::string model_id;
    /// True when the file is tactic-related according to this model.
    bool related = false;
    /// Predicted class of a multi-class MLP; empty for binary models.
    std::string label;
    double score = 0.0;
};

struct FileResult {
    std::string path;  ///< relative to the repository root, '/' separated
    std::size_t token_count = 0;
    std::size_t window_count = 0;
    std::vector<FilePrediction> predictions;
};

struct SkippedFile {
    std::string path;
    std::string reason;
};

struct ScanReport {
    std::string repo_root;
    std::vector<FileResult> per_file;
    /// Files every model predicted unrelated.
    std::vector<std::string> ruled_out;
    std::vector<SkippedFile> skipped;
    std::vector<std::string> model_ids;
    /// Caller-supplied, so identical inputs give identical reports.
    std::optional<std::string> timestamp;
};

struct ScanOptions {
    PreprocessConfig preprocess = PreprocessConfig::scan();
    std::size_t window_size = kDefaultWindowSize;
    std::optional<std::string> timestamp;
};

/// Regular .java files under root, recursively, sorted by relative path.
/// Symlinks are not followed and directories starting with '.' are skipped.
std::vector<std::filesystem::path> walk_repo(const std::filesystem::path& root);

/// Classifies every Java file with every model. MLP models need a backend;
/// when none is given a hashing backend named in the model is rebuilt.
/// Unreadable files are recorded in `skipped` and the scan continues.
ScanReport scan(const std::filesystem::path& root, const std::vector<ScanModel>& models,
                const EmbeddingBackend* backend = nullptr, const ScanOptions& options = {});

void to_json(nlohmann::json& j, const ScanReport& r);
/// path,tactic,predicted,score; one row per file and model.
void write_scan_csv(std::ostream& out, const ScanReport& r);

/// All positives plus up to four times as many negatives drawn uniformly
/// without replacement (all negatives when fewer). Sorted: positives, then
/// sampled negatives. Throws Error when there are no positives.
std::vector<std::string> build_test_pool(const std::map<std::string, bool>& labeled, std::uint64_t seed);

/// CSV path,label with label one of 1/0/true/false/related/unrelated.
std::map<std::string, bool> read_labels_csv(std::istream& in);

}  // namespace tacticscan

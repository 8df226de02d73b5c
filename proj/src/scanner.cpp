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

#include "tacticscan/scanner.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tacticscan/chunking.hpp"
#include "tacticscan/corpus.hpp"
#include "tacticscan/error.hpp"
#include "tacticscan/random.hpp"

namespace fs = std::filesystem;

namespace tacticscan {

namespace {

bool is_unrelated_label(std::string_view label) {
    std::string lower(label);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower == "unrelated";
}

std::string join_labels(const std::vector<std::string>& labels) {
    std::string out;
    for (const auto& l : labels) out += (out.empty() ? "" : "+") + l;
    return out;
}

}  // namespace

ScanModel scan_model_from_json(const nlohmann::json& j) {
    if (j.contains("term_weights")) {
        auto td = j.get<TdModel>();
        std::string id = td.tactic_id;
        return {std::move(id), std::move(td)};
    }
    if (j.contains("W1")) {
        auto mlp = j.get<MlpModel>();
        const auto& labels = mlp.class_labels;
        std::vector<std::string> positives;
        for (const auto& l : labels)
            if (!is_unrelated_label(l)) positives.push_back(l);
        std::string id = positives.size() == 1 ? positives.front() : join_labels(labels);
        return {std::move(id), std::move(mlp)};
    }
    throw ParseError("model JSON is neither a TD nor an MLP model");
}

ScanModel load_scan_model(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read model " + path.string());
    try {
        return scan_model_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<fs::path> walk_repo(const fs::path& root) {
    std::vector<std::pair<std::string, fs::path>> found;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw Error("not a directory: " + root.string());
    fs::recursive_directory_iterator it(root, fs::directory_options::none, ec), end;
    if (ec) throw Error("cannot walk " + root.string() + ": " + ec.message());
    for (; it != end; it.increment(ec)) {
        if (ec) throw Error("cannot walk " + root.string() + ": " + ec.message());
        const auto& entry = *it;
        if (entry.is_symlink(ec)) {
            if (entry.is_directory(ec)) it.disable_recursion_pending();
            continue;
        }
        const auto name = entry.path().filename().string();
        if (entry.is_directory(ec)) {
            if (!name.empty() && name[0] == '.') it.disable_recursion_pending();
            continue;
        }
        if (entry.is_regular_file(ec) && entry.path().extension() == ".java")
            found.emplace_back(entry.path().lexically_relative(root).generic_string(), entry.path());
    }
    std::sort(found.begin(), found.end());
    std::vector<fs::path> out;
    out.reserve(found.size());
    for (auto& [rel, path] : found) out.push_back(std::move(path));
    return out;
}

ScanReport scan(const fs::path& root, const std::vector<ScanModel>& models,
                const EmbeddingBackend* backend, const ScanOptions& options) {
    ScanReport report;
    report.repo_root = root.generic_string();
    report.timestamp = options.timestamp;
    for (const auto& m : models) report.model_ids.push_back(m.id);

    // Backends rebuilt from model metadata, keyed by name.
    std::map<std::string, std::unique_ptr<EmbeddingBackend>> rebuilt;
    auto backend_for = [&](const MlpModel& m) -> const EmbeddingBackend& {
        if (backend) return *backend;
        auto& slot = rebuilt[m.backend_name];
        if (!slot) {
            if (!m.backend_name.starts_with("hashing"))
                throw Error("model needs backend '" + m.backend_name + "'; pass one explicitly");
            slot = make_backend(m.backend_name);
        }
        return *slot;
    };
    for (const auto& m : models)
        if (const auto* mlp = std::get_if<MlpModel>(&m.model)) backend_for(*mlp);

    const Preprocessor preprocessor(options.preprocess);
    for (const auto& path : walk_repo(root)) {
        const auto rel = path.lexically_relative(root).generic_string();
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        if (in) buf << in.rdbuf();
        if (!in || in.bad()) {
            report.skipped.push_back({rel, "cannot read file"});
            continue;
        }
        const auto stripped = strip_license_header(buf.str());
        const auto tokens = preprocessor(stripped.text, rel);

        FileResult file;
        file.path = rel;
        file.token_count = tokens.tokens.size();
        file.window_count = window_count(tokens.tokens.size(), options.window_size);
        for (const auto& m : models) {
            FilePrediction p;
            p.model_id = m.id;
            if (const auto* td = std::get_if<TdModel>(&m.model)) {
                p.score = td_score(tokens, *td);
                p.related = p.score >= td->threshold;
            } else {
                const auto& mlp = std::get<MlpModel>(m.model);
                try {
                    const auto pred = mlp_predict(tokens, backend_for(mlp), mlp, options.window_size);
                    const auto& labels = mlp.class_labels;
                    const auto unrelated = std::find_if(labels.begin(), labels.end(), is_unrelated_label);
                    if (unrelated != labels.end()) {
                        const auto u = static_cast<Eigen::Index>(unrelated - labels.begin());
                        p.related = !is_unrelated_label(pred.label);
                        p.score = 1.0 - pred.probabilities[u];
                        if (labels.size() > 2 && p.related) p.label = pred.label;
                    } else {
                        p.related = true;
                        p.label = pred.label;
                        p.score = pred.probability;
                    }
                } catch (const MissingEmbedding& e) {
                    report.skipped.push_back({rel, e.what()});
                    continue;
                }
            }
            file.predictions.push_back(std::move(p));
        }
        const bool any_related = std::any_of(file.predictions.begin(), file.predictions.end(),
                                             [](const auto& p) { return p.related; });
        if (!any_related) report.ruled_out.push_back(rel);
        report.per_file.push_back(std::move(file));
    }
    return report;
}

void to_json(nlohmann::json& j, const ScanReport& r) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : r.per_file) {
        nlohmann::json preds = nlohmann::json::array();
        for (const auto& p : f.predictions) {
            nlohmann::json pj{{"tactic_id", p.model_id}, {"score", p.score}};
            pj["predicted"] = p.label.empty() ? nlohmann::json(p.related) : nlohmann::json(p.label);
            preds.push_back(std::move(pj));
        }
        files.push_back({{"path", f.path},
                         {"token_count", f.token_count},
                         {"window_count", f.window_count},
                         {"predictions", std::move(preds)}});
    }
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& s : r.skipped) skipped.push_back({{"path", s.path}, {"reason", s.reason}});
    j = nlohmann::json{{"repo_root", r.repo_root},
                       {"model_ids", r.model_ids},
                       {"per_file", std::move(files)},
                       {"ruled_out", r.ruled_out},
                       {"skipped", std::move(skipped)}};
    j["timestamp"] = r.timestamp ? nlohmann::json(*r.timestamp) : nlohmann::json(nullptr);
}

void write_scan_csv(std::ostream& out, const ScanReport& r) {
    out << "path,tactic,predicted,score\n";
    char buf[32];
    for (const auto& f : r.per_file) {
        for (const auto& p : f.predictions) {
            std::snprintf(buf, sizeof buf, "%.6f", p.score);
            std::string path = f.path;
            if (path.find_first_of(",\"") != std::string::npos) {
                std::string quoted = "\"";
                for (char c : path) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
                path = quoted + "\"";
            }
            out << path << ',' << p.model_id << ','
                << (p.label.empty() ? (p.related ? "1" : "0") : p.label) << ',' << buf << '\n';
        }
    }
}

std::vector<std::string> build_test_pool(const std::map<std::string, bool>& labeled, std::uint64_t seed) {
    std::vector<std::string> positives, negatives;
    for (const auto& [path, related] : labeled) (related ? positives : negatives).push_back(path);
    if (positives.empty()) throw Error("test pool needs at least one positive file");
    const std::size_t want = std::min(negatives.size(), 4 * positives.size());
    Rng rng(seed);
    for (std::size_t i = 0; i < want; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(negatives.size() - i));
        std::swap(negatives[i], negatives[j]);
    }
    negatives.resize(want);
    std::sort(negatives.begin(), negatives.end());
    positives.insert(positives.end(), negatives.begin(), negatives.end());
    return positives;
}

std::map<std::string, bool> read_labels_csv(std::istream& in) {
    std::map<std::string, bool> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw ParseError("labels line " + std::to_string(lineno) + ": expected path,label");
        std::string path = line.substr(0, comma);
        std::string label = line.substr(comma + 1);
        for (auto& c : label) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lineno == 1 && path == "path" && label == "label") continue;
        if (path.size() >= 2 && path.front() == '"' && path.back() == '"') path = path.substr(1, path.size() - 2);
        bool value;
        if (label == "1" || label == "true" || label == "related") value = true;
        else if (label == "0" || label == "false" || label == "unrelated") value = false;
        else throw ParseError("labels line " + std::to_string(lineno) + ": invalid label '" + label + "'");
        if (!out.emplace(path, value).second)
            throw ParseError("labels line " + std::to_string(lineno) + ": duplicate path '" + path + "'");
    }
    return out;
}

}  // namespace tacticscan

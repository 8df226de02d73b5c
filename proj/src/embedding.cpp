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

#include "tacticscan/embedding.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tacticscan/error.hpp"

namespace tacticscan {

namespace {

constexpr std::uint64_t kSignBasis = 0x84222325cbf29ce4ULL;

}  // namespace

std::uint64_t fnv1a64(std::string_view s, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

EmbeddingVector hashing_embed(std::span<const std::string> tokens, std::size_t dimension) {
    EmbeddingVector v = EmbeddingVector::Zero(static_cast<Eigen::Index>(dimension));
    for (const auto& t : tokens) {
        const auto bucket = static_cast<Eigen::Index>(fnv1a64(t) % dimension);
        v[bucket] += (fnv1a64(t, kSignBasis) & 1U) ? 1.0 : -1.0;
    }
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

HashingBackend::HashingBackend(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ < 16) throw Error("hashing dimension must be at least 16");
}

std::string HashingBackend::name() const { return "hashing:" + std::to_string(dimension_); }

std::unique_ptr<FileBackend> FileBackend::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    auto backend = std::unique_ptr<FileBackend>(new FileBackend());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = path.string() + ":" + std::to_string(lineno);
        std::string id;
        std::size_t index = 0;
        std::vector<double> values;
        try {
            const auto j = nlohmann::json::parse(line);
            id = j.at("snippet_id").get<std::string>();
            index = j.at("window_index").get<std::size_t>();
            values = j.at("vector").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (values.empty()) throw ParseError(where + ": empty vector");
        if (backend->dimension_ == 0) backend->dimension_ = values.size();
        if (values.size() != backend->dimension_)
            throw ParseError(where + ": dimension " + std::to_string(values.size()) +
                             " differs from " + std::to_string(backend->dimension_));
        EmbeddingVector v = Eigen::Map<const EmbeddingVector>(
            values.data(), static_cast<Eigen::Index>(values.size()));
        if (!v.allFinite()) throw ParseError(where + ": non-finite component");
        backend->vectors_[{std::move(id), index}] = std::move(v);
    }
    if (backend->dimension_ == 0) throw ParseError(path.string() + ": no embeddings");
    return backend;
}

EmbeddingVector FileBackend::embed_window(std::string_view snippet_id, std::size_t window_index,
                                          std::span<const std::string>) const {
    const auto it = vectors_.find(std::pair{std::string(snippet_id), window_index});
    if (it == vectors_.end())
        throw MissingEmbedding("no embedding for " + std::string(snippet_id) + " window " +
                               std::to_string(window_index));
    return it->second;
}

std::unique_ptr<EmbeddingBackend> make_backend(std::string_view spec,
                                               std::size_t default_dimension) {
    if (spec == "hashing") return std::make_unique<HashingBackend>(default_dimension);
    if (spec.starts_with("hashing:")) {
        const std::string digits(spec.substr(8));
        std::size_t used = 0;
        std::size_t dim = 0;
        try {
            dim = std::stoul(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != digits.size())
            throw Error("invalid hashing backend '" + std::string(spec) + "'");
        return std::make_unique<HashingBackend>(dim);
    }
    if (spec.starts_with("file:")) return FileBackend::load(std::string(spec.substr(5)));
    throw Error("unknown embedding backend '" + std::string(spec) + "'");
}

EmbeddingVector represent(const TokenSequence& tokens, const EmbeddingBackend& backend,
                          std::size_t window_size) {
    const auto windows = window(tokens, window_size);
    std::vector<EmbeddingVector> vectors;
    vectors.reserve(windows.count());
    for (std::size_t i = 0; i < windows.count(); ++i) {
        auto v = backend.embed_window(tokens.origin_snippet_id, i, windows.windows[i]);
        if (static_cast<std::size_t>(v.size()) != backend.dimension())
            throw DimensionMismatch("backend " + backend.name() + " returned dimension " +
                                    std::to_string(v.size()));
        vectors.push_back(std::move(v));
    }
    return mean_pool(vectors);
}

}  // namespace tacticscan

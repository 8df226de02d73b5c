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
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "tacticscan/chunking.hpp"
#include "tacticscan/preprocess.hpp"

namespace tacticscan {

/// Maps one token window to a fixed-dimension vector. Implementations are
/// deterministic and always return dimension() components.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;

    virtual std::string name() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed_window(std::string_view snippet_id, std::size_t window_index,
                                         std::span<const std::string> tokens) const = 0;
};

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Signed feature hashing: bucket fnv1a(token) mod D, sign from an
/// independently seeded second hash, then L2 normalization.
EmbeddingVector hashing_embed(std::span<const std::string> tokens, std::size_t dimension);

class HashingBackend final : public EmbeddingBackend {
public:
    explicit HashingBackend(std::size_t dimension = 256);

    std::string name() const override;
    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed_window(std::string_view, std::size_t,
                                 std::span<const std::string> tokens) const override {
        return hashing_embed(tokens, dimension_);
    }

private:
    std::size_t dimension_;
};

/// Serves precomputed window vectors keyed by (snippet id, window index),
/// e.g. exported from a transformer encoder.
class FileBackend final : public EmbeddingBackend {
public:
    /// JSONL lines {"snippet_id", "window_index", "vector"}. Throws
    /// ParseError naming the line on malformed input or inconsistent dimension.
    static std::unique_ptr<FileBackend> load(const std::filesystem::path& path);

    std::string name() const override { return "file"; }
    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed_window(std::string_view snippet_id, std::size_t window_index,
                                 std::span<const std::string> tokens) const override;

    std::size_t size() const { return vectors_.size(); }

private:
    std::size_t dimension_ = 0;
    std::map<std::pair<std::string, std::size_t>, EmbeddingVector, std::less<>> vectors_;
};

/// "hashing", "hashing:<D>" or "file:<path>".
std::unique_ptr<EmbeddingBackend> make_backend(std::string_view spec,
                                               std::size_t default_dimension = 256);

/// Mean of the window embeddings of an already preprocessed snippet.
EmbeddingVector represent(const TokenSequence& tokens, const EmbeddingBackend& backend,
                          std::size_t window_size = kDefaultWindowSize);

}  // namespace tacticscan

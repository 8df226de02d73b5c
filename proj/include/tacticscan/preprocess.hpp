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

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tacticscan {

struct TokenSequence {
    std::vector<std::string> tokens;
    std::string origin_snippet_id;
};

/// Java's 50 reserved words plus the literals true, false and null.
const std::set<std::string, std::less<>>& java_stoplist();

/// Parses a stoplist file: one word per line, '#' starts a comment.
std::set<std::string, std::less<>> load_stoplist(const std::filesystem::path& path);

struct PreprocessConfig {
    std::size_t min_len = 2;
    std::size_t max_len = 25;
    /// Empty means the built-in Java keyword list.
    std::filesystem::path stoplist_path;

    /// Defaults used when building and evaluating snippet datasets.
    static PreprocessConfig dataset() { return {}; }
    /// Defaults used when scanning repositories (longer tokens survive).
    static PreprocessConfig scan() { return {2, 50, {}}; }
};

void to_json(nlohmann::json& j, const PreprocessConfig& c);
void from_json(const nlohmann::json& j, PreprocessConfig& c);

/// Config bound to its resolved stoplist.
class Preprocessor {
public:
    explicit Preprocessor(PreprocessConfig config = {});

    TokenSequence operator()(std::string_view raw_text, std::string origin_id = {}) const;

    const PreprocessConfig& config() const { return config_; }
    const std::set<std::string, std::less<>>& stoplist() const { return *stoplist_; }

private:
    PreprocessConfig config_;
    std::shared_ptr<const std::set<std::string, std::less<>>> stoplist_;
};

struct StripResult {
    std::string text;
    bool unterminated = false;
};

/// Removes the block comments that open the file, if any. Whitespace around
/// them and everything after them is kept verbatim. An unterminated opening
/// comment consumes the rest of the file.
StripResult strip_license_header(std::string_view java_source);

/// Splits at underscores, at lower/digit-to-upper boundaries and before the
/// last capital of a capital run followed by a lowercase letter; lowercases.
std::vector<std::string> split_identifier(std::string_view word);

/// Fixed pipeline: split on non-identifier characters, split identifiers,
/// lowercase, drop numbers, drop tokens outside [min_len, max_len], drop
/// stoplisted words.
TokenSequence preprocess(std::string_view raw_text, const PreprocessConfig& config = {});

}  // namespace tacticscan

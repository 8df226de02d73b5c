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

#include "tacticscan/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "tacticscan/error.hpp"

namespace tacticscan {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_upper(c) || is_lower(c) || is_digit(c) || c == '_'; }

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    return out;
}

}  // namespace

const std::set<std::string, std::less<>>& java_stoplist() {
    static const std::set<std::string, std::less<>> words{
        "abstract",   "assert",       "boolean",   "break",      "byte",     "case",
        "catch",      "char",         "class",     "const",      "continue", "default",
        "do",         "double",       "else",      "enum",       "extends",  "final",
        "finally",    "float",        "for",       "goto",       "if",       "implements",
        "import",     "instanceof",   "int",       "interface",  "long",     "native",
        "new",        "package",      "private",   "protected",  "public",   "return",
        "short",      "static",       "strictfp",  "super",      "switch",   "synchronized",
        "this",       "throw",        "throws",    "transient",  "try",      "void",
        "volatile",   "while",        "true",      "false",      "null"};
    return words;
}

std::set<std::string, std::less<>> load_stoplist(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read stoplist " + path.string());
    std::set<std::string, std::less<>> words;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        words.insert(lowercase(line.substr(first, last - first + 1)));
    }
    return words;
}

void to_json(nlohmann::json& j, const PreprocessConfig& c) {
    j = nlohmann::json{{"min_len", c.min_len}, {"max_len", c.max_len}};
    j["stoplist_path"] = c.stoplist_path.empty() ? nlohmann::json(nullptr)
                                                 : nlohmann::json(c.stoplist_path.string());
}

void from_json(const nlohmann::json& j, PreprocessConfig& c) {
    c.min_len = j.value("min_len", c.min_len);
    c.max_len = j.value("max_len", c.max_len);
    if (j.contains("stoplist_path") && j["stoplist_path"].is_string())
        c.stoplist_path = j["stoplist_path"].get<std::string>();
    if (c.min_len > c.max_len) throw Error("preprocess min_len exceeds max_len");
}

Preprocessor::Preprocessor(PreprocessConfig config) : config_(std::move(config)) {
    if (config_.stoplist_path.empty()) {
        stoplist_ = std::shared_ptr<const std::set<std::string, std::less<>>>(
            &java_stoplist(), [](const auto*) {});
    } else {
        stoplist_ = std::make_shared<const std::set<std::string, std::less<>>>(
            load_stoplist(config_.stoplist_path));
    }
}

StripResult strip_license_header(std::string_view src) {
    std::string out;
    while (true) {
        const auto first = src.find_first_not_of(" \t\r\n\f\v");
        if (first == std::string_view::npos || src.substr(first, 2) != "/*") break;
        out.append(src.substr(0, first));
        const auto close = src.find("*/", first + 2);
        if (close == std::string_view::npos) return {std::move(out), true};
        src.remove_prefix(close + 2);
    }
    out.append(src);
    return {std::move(out)};
}

std::vector<std::string> split_identifier(std::string_view word) {
    std::vector<std::string> parts;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) parts.push_back(lowercase(current));
        current.clear();
    };
    for (std::size_t i = 0; i < word.size(); ++i) {
        const char c = word[i];
        if (c == '_') {
            flush();
            continue;
        }
        if (is_upper(c) && !current.empty()) {
            const char prev = current.back();
            const bool next_lower = i + 1 < word.size() && is_lower(word[i + 1]);
            if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) flush();
        }
        current += c;
    }
    flush();
    return parts;
}

TokenSequence Preprocessor::operator()(std::string_view raw, std::string origin_id) const {
    TokenSequence seq;
    seq.origin_snippet_id = std::move(origin_id);
    std::size_t i = 0;
    while (i < raw.size()) {
        if (!is_word(raw[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw.size() && is_word(raw[j])) ++j;
        for (auto& token : split_identifier(raw.substr(i, j - i))) {
            if (std::all_of(token.begin(), token.end(), is_digit)) continue;
            if (token.size() < config_.min_len || token.size() > config_.max_len) continue;
            if (stoplist_->count(token)) continue;
            seq.tokens.push_back(std::move(token));
        }
        i = j;
    }
    return seq;
}

TokenSequence preprocess(std::string_view raw_text, const PreprocessConfig& config) {
    return Preprocessor(config)(raw_text);
}

}  // namespace tacticscan

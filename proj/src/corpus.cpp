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

#include "tacticscan/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "tacticscan/error.hpp"
#include "tacticscan/random.hpp"

namespace tacticscan {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Drops inner markup (<strong>, <span>, ...) and decodes character references.
std::string html_to_text(std::string_view html) {
    std::string out;
    out.reserve(html.size());
    for (std::size_t i = 0; i < html.size();) {
        const char c = html[i];
        if (c == '<') {
            const auto close = html.find('>', i);
            if (close == std::string_view::npos) {
                out.append(html.substr(i));
                break;
            }
            i = close + 1;
            continue;
        }
        if (c == '&') {
            const auto semi = html.find(';', i);
            if (semi != std::string_view::npos && semi - i <= 10) {
                const auto entity = html.substr(i + 1, semi - i - 1);
                std::optional<std::string> decoded;
                if (entity == "lt") decoded = "<";
                else if (entity == "gt") decoded = ">";
                else if (entity == "amp") decoded = "&";
                else if (entity == "quot") decoded = "\"";
                else if (entity == "apos") decoded = "'";
                else if (entity == "nbsp") decoded = " ";
                else if (entity.size() > 1 && entity[0] == '#') {
                    const bool hex = entity[1] == 'x' || entity[1] == 'X';
                    const std::string digits(entity.substr(hex ? 2 : 1));
                    char* end = nullptr;
                    const auto cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
                    if (!digits.empty() && end && *end == '\0' && cp <= 0x10FFFF) {
                        std::string s;
                        append_utf8(s, static_cast<std::uint32_t>(cp));
                        decoded = s;
                    }
                }
                if (decoded) {
                    out += *decoded;
                    i = semi + 1;
                    continue;
                }
            }
        }
        out += c;
        ++i;
    }
    return out;
}

std::size_t non_whitespace(std::string_view s) {
    return static_cast<std::size_t>(std::count_if(
        s.begin(), s.end(), [](unsigned char c) { return !std::isspace(c); }));
}

// Returns nullopt when a block is left open.
std::optional<std::vector<std::string>> html_blocks(std::string_view body) {
    std::vector<std::string> blocks;
    const std::string lower = to_lower(body);
    std::size_t pos = 0;
    while (true) {
        auto pre = lower.find("<pre", pos);
        if (pre == std::string::npos) break;
        const char after = pre + 4 < lower.size() ? lower[pre + 4] : '\0';
        if (after != '>' && !std::isspace(static_cast<unsigned char>(after))) {
            pos = pre + 4;
            continue;
        }
        const auto pre_end = lower.find('>', pre);
        if (pre_end == std::string::npos) return std::nullopt;
        const auto pre_close = lower.find("</pre>", pre_end);
        if (pre_close == std::string::npos) return std::nullopt;
        auto inner = std::string_view(body).substr(pre_end + 1, pre_close - pre_end - 1);
        const std::string_view inner_lower =
            std::string_view(lower).substr(pre_end + 1, pre_close - pre_end - 1);
        const auto code = inner_lower.find("<code");
        if (code != std::string_view::npos) {
            const auto code_end = inner_lower.find('>', code);
            const auto code_close = inner_lower.rfind("</code>");
            if (code_end == std::string_view::npos || code_close == std::string_view::npos ||
                code_close < code_end)
                return std::nullopt;
            blocks.push_back(html_to_text(inner.substr(code_end + 1, code_close - code_end - 1)));
        }
        pos = pre_close + 6;
    }
    return blocks;
}

std::optional<std::vector<std::string>> markdown_blocks(std::string_view body) {
    std::vector<std::string> blocks;
    std::istringstream in{std::string(body)};
    std::string line;
    std::optional<std::string> fence;
    std::string current;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view trimmed(line);
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        if (!fence) {
            if (trimmed.starts_with("```") || trimmed.starts_with("~~~")) {
                fence = std::string(trimmed.substr(0, 3));
                current.clear();
            }
            continue;
        }
        if (trimmed.starts_with(*fence)) {
            blocks.push_back(current);
            fence.reset();
            continue;
        }
        if (!current.empty()) current += '\n';
        current += line;
    }
    if (fence) return std::nullopt;
    return blocks;
}

std::string default_url(std::int64_t question_id) {
    return "https://stackoverflow.com/questions/" + std::to_string(question_id);
}

}  // namespace

std::string_view to_string(ReviewStatus status) {
    switch (status) {
        case ReviewStatus::Pending: return "pending";
        case ReviewStatus::Accepted: return "accepted";
        case ReviewStatus::Rejected: return "rejected";
    }
    return "pending";
}

ReviewStatus parse_review_status(std::string_view text) {
    if (text == "pending") return ReviewStatus::Pending;
    if (text == "accepted") return ReviewStatus::Accepted;
    if (text == "rejected") return ReviewStatus::Rejected;
    throw ParseError("invalid review_status '" + std::string(text) + "'");
}

std::vector<CodeSnippet> TacticDataset::snippets() const {
    std::vector<CodeSnippet> all = related;
    all.insert(all.end(), unrelated.begin(), unrelated.end());
    return all;
}

ExtractionResult extract_snippets(const Question& question, std::string_view tactic_id) {
    ExtractionResult result;
    const std::string lower = to_lower(question.body);
    const bool html = lower.find("<pre") != std::string::npos ||
                      lower.find("<code") != std::string::npos ||
                      lower.find("<p>") != std::string::npos;
    auto blocks = html ? html_blocks(question.body) : markdown_blocks(question.body);
    if (!blocks) {
        result.warnings.push_back("question " + std::to_string(question.id) +
                                  ": unterminated code block, body skipped");
        return result;
    }
    for (std::size_t i = 0; i < blocks->size(); ++i) {
        const auto& text = (*blocks)[i];
        if (non_whitespace(text) < kMinSnippetChars) continue;
        CodeSnippet s;
        s.id = std::to_string(question.id) + "#" + std::to_string(i);
        s.source_question_id = question.id;
        s.source_url = question.link.empty() ? default_url(question.id) : question.link;
        s.tactic_id = std::string(tactic_id);
        s.text = text;
        s.tags = {question.tags.begin(), question.tags.end()};
        s.review_status = ReviewStatus::Pending;
        result.snippets.push_back(std::move(s));
    }
    return result;
}

UnrelatedPool build_unrelated_pool(std::span<const Question> java_questions,
                                   const std::set<std::string>& related_tag_union) {
    UnrelatedPool pool;
    for (const auto& q : java_questions) {
        const bool java = std::find(q.tags.begin(), q.tags.end(), "java") != q.tags.end();
        const bool overlaps = std::any_of(q.tags.begin(), q.tags.end(), [&](const auto& t) {
            return t != "java" && related_tag_union.count(t) > 0;
        });
        if (!java || overlaps) {
            ++pool.excluded_questions;
            continue;
        }
        auto extracted = extract_snippets(q, kUnrelated);
        for (auto& s : extracted.snippets) pool.snippets.push_back(std::move(s));
    }
    return pool;
}

std::size_t normalize_sample_size(std::size_t count) {
    if (count < kMinSampleBin)
        throw TacticTooSmall("only " + std::to_string(count) +
                             " related snippets; at least 25 are required");
    return std::min(kMaxSampleBin, count / kSampleBinStep * kSampleBinStep);
}

namespace {

std::vector<CodeSnippet> sample_without_replacement(std::vector<CodeSnippet> items,
                                                    std::size_t n, Rng& rng) {
    // Canonical order first so the draw depends only on the seed and the id set.
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(items.size() - i));
        std::swap(items[i], items[j]);
    }
    items.resize(n);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return items;
}

}  // namespace

TacticDataset assemble_dataset(std::string tactic_id, std::span<const CodeSnippet> related,
                               std::span<const CodeSnippet> unrelated_pool, std::uint64_t seed) {
    std::vector<CodeSnippet> accepted;
    std::set<std::string> ids;
    for (const auto& s : related) {
        if (s.review_status != ReviewStatus::Accepted || !ids.insert(s.id).second) continue;
        accepted.push_back(s);
    }
    const std::size_t bin = normalize_sample_size(accepted.size());

    const auto related_tags = tag_union(accepted);
    std::vector<CodeSnippet> candidates;
    std::set<std::string> candidate_ids;
    for (const auto& s : unrelated_pool) {
        if (ids.count(s.id)) continue;
        const bool shares = std::any_of(s.tags.begin(), s.tags.end(), [&](const auto& t) {
            return related_tags.count(t) > 0;
        });
        if (shares) continue;
        if (candidate_ids.insert(s.id).second) candidates.push_back(s);
    }
    if (candidates.size() < bin)
        throw InsufficientUnrelated("unrelated pool has " + std::to_string(candidates.size()) +
                                    " usable snippets, need " + std::to_string(bin));

    Rng rng(seed);
    TacticDataset ds;
    ds.tactic_id = std::move(tactic_id);
    ds.seed = seed;
    ds.related = sample_without_replacement(std::move(accepted), bin, rng);
    ds.unrelated = sample_without_replacement(std::move(candidates), bin, rng);
    for (auto& s : ds.related) s.tactic_id = ds.tactic_id;
    for (auto& s : ds.unrelated) s.tactic_id = std::string(kUnrelated);
    return ds;
}

TacticDataset dataset_from_snippets(std::string tactic_id, std::vector<CodeSnippet> snippets) {
    TacticDataset ds;
    ds.tactic_id = std::move(tactic_id);
    for (auto& s : snippets) {
        if (s.unrelated()) {
            ds.unrelated.push_back(std::move(s));
        } else if (s.tactic_id == ds.tactic_id) {
            ds.related.push_back(std::move(s));
        } else {
            throw ParseError("snippet " + s.id + " belongs to tactic '" + s.tactic_id +
                             "', expected '" + ds.tactic_id + "'");
        }
    }
    return ds;
}

std::set<std::string> tag_union(std::span<const CodeSnippet> snippets) {
    std::set<std::string> tags;
    for (const auto& s : snippets)
        for (const auto& t : s.tags)
            if (t != "java") tags.insert(t);
    return tags;
}

void to_json(nlohmann::json& j, const CodeSnippet& s) {
    j = nlohmann::json{{"id", s.id},
                       {"source_question_id", s.source_question_id},
                       {"source_url", s.source_url},
                       {"tactic_id", s.tactic_id},
                       {"text", s.text},
                       {"tags", s.tags},
                       {"review_status", to_string(s.review_status)}};
}

void from_json(const nlohmann::json& j, CodeSnippet& s) {
    s.id = j.at("id").get<std::string>();
    s.source_question_id = j.at("source_question_id").get<std::int64_t>();
    s.source_url = j.at("source_url").get<std::string>();
    s.tactic_id = j.at("tactic_id").get<std::string>();
    s.text = j.at("text").get<std::string>();
    s.tags = j.at("tags").get<std::set<std::string>>();
    s.review_status = parse_review_status(j.at("review_status").get<std::string>());
}

void write_snippets(std::ostream& out, std::span<const CodeSnippet> snippets) {
    for (const auto& s : snippets) out << nlohmann::json(s).dump() << '\n';
}

std::vector<CodeSnippet> read_snippets(std::istream& in) {
    std::vector<CodeSnippet> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(nlohmann::json::parse(line).get<CodeSnippet>());
        } catch (const std::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void export_review(const std::filesystem::path& path, std::span<const CodeSnippet> snippets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_snippets(out, snippets);
}

std::vector<CodeSnippet> load_snippets(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    try {
        return read_snippets(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void import_review(const std::filesystem::path& path, std::vector<CodeSnippet>& snippets) {
    const auto reviewed = load_snippets(path);
    std::map<std::string, CodeSnippet*> by_id;
    for (auto& s : snippets) by_id[s.id] = &s;
    for (const auto& r : reviewed) {
        const auto it = by_id.find(r.id);
        if (it == by_id.end()) throw ParseError("unknown snippet id '" + r.id + "'");
        it->second->review_status = r.review_status;
    }
}

}  // namespace tacticscan

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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tacticscan {

/// Label used for snippets that implement no tactic.
inline constexpr std::string_view kUnrelated = "UNRELATED";

/// Smallest and largest sample bins for related snippets, and their step.
inline constexpr std::size_t kMinSampleBin = 25;
inline constexpr std::size_t kMaxSampleBin = 200;
inline constexpr std::size_t kSampleBinStep = 25;

/// Code blocks with fewer non-whitespace characters are not snippets.
inline constexpr std::size_t kMinSnippetChars = 10;

struct Question {
    std::int64_t id = 0;
    std::string title;
    std::string body;
    std::vector<std::string> tags;
    std::string link;

    friend bool operator==(const Question&, const Question&) = default;
};

enum class ReviewStatus { Pending, Accepted, Rejected };

std::string_view to_string(ReviewStatus status);
ReviewStatus parse_review_status(std::string_view text);

struct CodeSnippet {
    std::string id;
    std::int64_t source_question_id = 0;
    std::string source_url;
    std::string tactic_id;
    std::string text;
    std::set<std::string> tags;
    ReviewStatus review_status = ReviewStatus::Pending;

    bool unrelated() const { return tactic_id == kUnrelated; }
    friend bool operator==(const CodeSnippet&, const CodeSnippet&) = default;
};

struct TacticDataset {
    std::string tactic_id;
    std::vector<CodeSnippet> related;
    std::vector<CodeSnippet> unrelated;
    std::uint64_t seed = 0;

    /// Related snippets first, then unrelated.
    std::vector<CodeSnippet> snippets() const;
};

struct ExtractionResult {
    std::vector<CodeSnippet> snippets;
    std::vector<std::string> warnings;
};

/// One snippet per `<pre><code>` or fenced block of the question body with
/// at least kMinSnippetChars non-whitespace characters. Snippet ids are
/// "<question id>#<block index>", counting every block in the body.
ExtractionResult extract_snippets(const Question& question, std::string_view tactic_id);

struct UnrelatedPool {
    std::vector<CodeSnippet> snippets;
    std::size_t excluded_questions = 0;
};

/// Snippets of java-tagged questions sharing no tag other than "java" with
/// the related questions.
UnrelatedPool build_unrelated_pool(std::span<const Question> java_questions,
                                   const std::set<std::string>& related_tag_union);

/// Largest multiple of 25 not above count, capped at 200. Throws
/// TacticTooSmall below 25.
std::size_t normalize_sample_size(std::size_t accepted_related_count);

/// Balanced dataset: bin-size accepted related snippets and as many unrelated
/// ones, both drawn uniformly without replacement with the given seed.
TacticDataset assemble_dataset(std::string tactic_id, std::span<const CodeSnippet> related,
                               std::span<const CodeSnippet> unrelated_pool, std::uint64_t seed);

/// Splits a flat snippet list into a dataset for tactic_id.
TacticDataset dataset_from_snippets(std::string tactic_id, std::vector<CodeSnippet> snippets);

/// Tags of `snippets` other than "java".
std::set<std::string> tag_union(std::span<const CodeSnippet> snippets);

void to_json(nlohmann::json& j, const CodeSnippet& s);
void from_json(const nlohmann::json& j, CodeSnippet& s);

/// JSONL, one snippet per line.
void write_snippets(std::ostream& out, std::span<const CodeSnippet> snippets);
std::vector<CodeSnippet> read_snippets(std::istream& in);

void export_review(const std::filesystem::path& path, std::span<const CodeSnippet> snippets);
std::vector<CodeSnippet> load_snippets(const std::filesystem::path& path);

/// Copies review_status from the file onto matching snippets; every other
/// field is left untouched. Unknown ids and malformed lines throw ParseError.
void import_review(const std::filesystem::path& path, std::vector<CodeSnippet>& snippets);

}  // namespace tacticscan

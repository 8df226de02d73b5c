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

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tacticscan/corpus.hpp"

namespace tacticscan {

/// Name of the environment variable holding an optional API key.
inline constexpr const char* kApiKeyEnv = "TACTICSCAN_SE_KEY";

using SleepFn = std::function<void(std::chrono::milliseconds)>;

struct FetchOptions {
    std::string api_base = "https://api.stackexchange.com/2.3";
    std::string site = "stackoverflow";
    std::size_t max_pages = 25;
    std::size_t page_size = 100;
    /// Restricts results to a tag (the unrelated pool uses "java").
    std::optional<std::string> tagged;
    /// Defaults to the TACTICSCAN_SE_KEY environment variable when unset.
    std::optional<std::string> key;
    std::size_t max_retries = 3;
    std::chrono::milliseconds retry_delay{1000};
    std::chrono::seconds timeout{30};
    /// Injected for tests; defaults to std::this_thread::sleep_for.
    SleepFn sleep;
};

/// Pages through /search/advanced for one keyword. Questions come back
/// deduplicated and sorted by id. A "backoff" field in any response delays
/// the next request by that many seconds. Transport failures and 5xx/429
/// responses are retried up to max_retries times before a retryable
/// FetchError; HTTP 400 fails immediately with the API error message.
std::vector<Question> fetch_questions(std::string_view query_keyword, const FetchOptions& options);

void to_json(nlohmann::json& j, const Question& q);
void from_json(const nlohmann::json& j, Question& q);

/// Parses one API question item.
Question question_from_api(const nlohmann::json& item);

/// File name of the on-disk cache entry for a query.
std::string cache_key(std::string_view query_keyword, const std::optional<std::string>& tagged);

void save_question_cache(const std::filesystem::path& path, const std::vector<Question>& questions);
std::vector<Question> load_question_cache(const std::filesystem::path& path);

}  // namespace tacticscan

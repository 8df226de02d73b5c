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

#include "tacticscan/stackexchange.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include <httplib.h>

#include "tacticscan/error.hpp"

namespace tacticscan {

namespace {

struct BaseUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path without trailing slash
};

BaseUrl split_base(const std::string& base) {
    const auto scheme = base.find("://");
    const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
    const auto slash = base.find('/', host_start);
    BaseUrl out;
    out.origin = slash == std::string::npos ? base : base.substr(0, slash);
    out.prefix = slash == std::string::npos ? "" : base.substr(slash);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

std::string api_error_message(const std::string& body) {
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_object()) {
        std::string msg = j.value("error_message", std::string{});
        const std::string name = j.value("error_name", std::string{});
        if (!name.empty()) msg = name + (msg.empty() ? "" : ": " + msg);
        if (!msg.empty()) return msg;
    }
    return body.empty() ? "bad request" : body;
}

}  // namespace

Question question_from_api(const nlohmann::json& item) {
    Question q;
    q.id = item.at("question_id").get<std::int64_t>();
    q.title = item.value("title", std::string{});
    q.body = item.value("body", std::string{});
    q.tags = item.value("tags", std::vector<std::string>{});
    q.link = item.value("link", std::string{});
    return q;
}

std::vector<Question> fetch_questions(std::string_view query_keyword, const FetchOptions& opt) {
    if (opt.page_size == 0 || opt.page_size > 100)
        throw Error("page_size must be in [1, 100]");
    const SleepFn sleep =
        opt.sleep ? opt.sleep : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

    std::optional<std::string> key = opt.key;
    if (!key) {
        if (const char* env = std::getenv(kApiKeyEnv); env && *env) key = env;
    }

    const auto base = split_base(opt.api_base);
    httplib::Client client(base.origin);
    client.set_connection_timeout(opt.timeout);
    client.set_read_timeout(opt.timeout);
    const std::string path = base.prefix + "/search/advanced";

    std::map<std::int64_t, Question> by_id;
    std::chrono::milliseconds pending_backoff{0};
    for (std::size_t page = 1; page <= opt.max_pages; ++page) {
        httplib::Params params{{"q", std::string(query_keyword)},
                               {"site", opt.site},
                               {"filter", "withbody"},
                               {"page", std::to_string(page)},
                               {"pagesize", std::to_string(opt.page_size)}};
        if (opt.tagged) params.emplace("tagged", *opt.tagged);
        if (key) params.emplace("key", *key);

        nlohmann::json body;
        for (std::size_t attempt = 0;; ++attempt) {
            if (pending_backoff.count() > 0) {
                sleep(pending_backoff);
                pending_backoff = std::chrono::milliseconds{0};
            }
            auto res = client.Get(path, params, httplib::Headers{});
            std::string failure;
            if (!res) {
                failure = "request failed: " + httplib::to_string(res.error());
            } else if (res->status == 400) {
                throw FetchError("HTTP 400: " + api_error_message(res->body), false, 400);
            } else if (res->status >= 500 || res->status == 429) {
                failure = "HTTP " + std::to_string(res->status) + ": " + api_error_message(res->body);
            } else if (res->status != 200) {
                throw FetchError("HTTP " + std::to_string(res->status) + ": " +
                                     api_error_message(res->body),
                                 false, res->status);
            } else {
                body = nlohmann::json::parse(res->body, nullptr, false);
                if (body.is_discarded() || !body.is_object())
                    throw FetchError("malformed JSON response", false, 200);
                break;
            }
            if (attempt >= opt.max_retries)
                throw FetchError(failure + " (after " + std::to_string(attempt + 1) + " attempts)",
                                 true, res ? res->status : 0);
            sleep(opt.retry_delay * (1LL << attempt));
        }

        if (body.contains("backoff"))
            pending_backoff = std::chrono::seconds(body["backoff"].get<std::int64_t>());
        const auto& items = body.value("items", nlohmann::json::array());
        for (const auto& item : items) {
            auto q = question_from_api(item);
            by_id.try_emplace(q.id, std::move(q));
        }
        if (items.empty() || !body.value("has_more", false)) break;
    }

    std::vector<Question> out;
    out.reserve(by_id.size());
    for (auto& [id, q] : by_id) out.push_back(std::move(q));
    return out;
}

void to_json(nlohmann::json& j, const Question& q) {
    j = nlohmann::json{{"question_id", q.id},
                       {"title", q.title},
                       {"body", q.body},
                       {"tags", q.tags},
                       {"link", q.link}};
}

void from_json(const nlohmann::json& j, Question& q) { q = question_from_api(j); }

std::string cache_key(std::string_view query_keyword, const std::optional<std::string>& tagged) {
    std::string key;
    for (char c : query_keyword) {
        const auto u = static_cast<unsigned char>(c);
        key += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
    }
    if (tagged) key += "__tagged_" + *tagged;
    return key + ".json";
}

void save_question_cache(const std::filesystem::path& path, const std::vector<Question>& questions) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << nlohmann::json(questions).dump(1) << '\n';
}

std::vector<Question> load_question_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    try {
        return nlohmann::json::parse(in).get<std::vector<Question>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace tacticscan

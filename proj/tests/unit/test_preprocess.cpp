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


#include <doctest.h>

#include <cctype>

#include "synthetic.hpp"
#include "tacticscan/error.hpp"
#include "tacticscan/preprocess.hpp"
#include "tacticscan/random.hpp"

using namespace tacticscan;
using Tokens = std::vector<std::string>;

namespace {

std::string join(const Tokens& tokens) {
    std::string out;
    for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
    return out;
}

std::string random_ascii(Rng& rng, std::size_t n) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_ _.(){};=\n\t\"'/*+-<>,";
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng.uniform_index(alphabet.size())];
    return s;
}

}  // namespace

TEST_CASE("license header stripping") {
    CHECK(strip_license_header("/* (c) Liferay */\nclass A{}").text == "\nclass A{}");
    CHECK(strip_license_header("class A{} /* tail */").text == "class A{} /* tail */");
    const auto only = strip_license_header("/*\n * Licensed under LGPL\n */");
    CHECK(only.text.empty());
    CHECK_FALSE(only.unterminated);
    const auto open = strip_license_header("/* never closed\nclass A {}");
    CHECK(open.text.empty());
    CHECK(open.unterminated);
    CHECK(strip_license_header("\n  /* h */package a;").text == "\n  package a;");
    CHECK(strip_license_header("").text.empty());
}

TEST_CASE("license header stripping is idempotent") {
    Rng rng(11);
    const std::vector<std::string> pieces{"/* a */", "/*", "*/", " ", "\n", "class A {}", "// x\n", "/** doc */"};
    for (int trial = 0; trial < 2000; ++trial) {
        std::string src;
        const auto n = rng.uniform_index(6);
        for (std::size_t i = 0; i < n; ++i) src += pieces[rng.uniform_index(pieces.size())];
        const auto once = strip_license_header(src).text;
        CHECK(strip_license_header(once).text == once);
    }
}

TEST_CASE("identifier splitting") {
    CHECK(split_identifier("parseHTTPRequest") == Tokens{"parse", "http", "request"});
    CHECK(split_identifier("snake_case_token") == Tokens{"snake", "case", "token"});
    CHECK(split_identifier("sha256") == Tokens{"sha256"});
    CHECK(split_identifier("XMLHttpRequest") == Tokens{"xml", "http", "request"});
    CHECK(split_identifier("md5Hash") == Tokens{"md5", "hash"});
    CHECK(split_identifier("HTTP") == Tokens{"http"});
    CHECK(split_identifier("__init__") == Tokens{"init"});
    CHECK(split_identifier("").empty());
}

TEST_CASE("preprocess examples") {
    CHECK(preprocess("int x = md5(input);").tokens == Tokens{"md5", "input"});
    CHECK(preprocess("").tokens.empty());
    CHECK(preprocess("for while if").tokens.empty());
    CHECK(preprocess("Cipher.getInstance(\"AES/CBC\") 1024 x2").tokens ==
          Tokens{"cipher", "get", "instance", "aes", "cbc", "x2"});
}

TEST_CASE("maximum token length differs between dataset and scan presets") {
    const std::string word(30, 'a');
    CHECK(preprocess(word, PreprocessConfig::dataset()).tokens.empty());
    CHECK(preprocess(word, PreprocessConfig::scan()).tokens == Tokens{word});
}

TEST_CASE("stoplist file matches the built-in list") {
    const auto words = load_stoplist(std::filesystem::path(TACTICSCAN_DATA_DIR) / "java_stoplist_v1.txt");
    CHECK(words == java_stoplist());
    CHECK(words.size() == 53);
}

TEST_CASE("custom stoplist") {
    tacticscan::testing::TempDir dir;
    tacticscan::testing::write_file(dir.path() / "stop.txt", "# custom\ncipher\n  KEY  \n");
    PreprocessConfig cfg;
    cfg.stoplist_path = dir.path() / "stop.txt";
    CHECK(preprocess("Cipher key int value", cfg).tokens == Tokens{"int", "value"});
    cfg.stoplist_path = dir.path() / "missing.txt";
    CHECK_THROWS_AS(Preprocessor{cfg}, Error);
}

TEST_CASE("config JSON round trip") {
    PreprocessConfig cfg{3, 40, {}};
    nlohmann::json j = cfg;
    const auto back = j.get<PreprocessConfig>();
    CHECK(back.min_len == 3);
    CHECK(back.max_len == 40);
    CHECK_THROWS_AS(nlohmann::json({{"min_len", 9}, {"max_len", 3}}).get<PreprocessConfig>(), Error);
}

TEST_CASE("token invariants on random input") {
    Rng rng(3);
    const Preprocessor prep;
    for (int trial = 0; trial < 500; ++trial) {
        const auto text = random_ascii(rng, rng.uniform_index(300));
        const auto seq = prep(text, "id");
        CHECK(seq.origin_snippet_id == "id");
        for (const auto& t : seq.tokens) {
            CHECK(t.size() >= 2);
            CHECK(t.size() <= 25);
            CHECK_FALSE(java_stoplist().count(t));
            bool digits_only = true;
            for (char c : t) {
                CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')));
                digits_only = digits_only && std::isdigit(static_cast<unsigned char>(c));
            }
            CHECK_FALSE(digits_only);
        }
        // Re-running on the joined output is a fixed point.
        CHECK(prep(join(seq.tokens)).tokens == seq.tokens);
    }
}

TEST_CASE("token order follows the input") {
    CHECK(preprocess("beta alpha gamma alpha").tokens == Tokens{"beta", "alpha", "gamma", "alpha"});
}

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

#include "synthetic.hpp"
#include "tacticscan/embedding.hpp"
#include "tacticscan/error.hpp"

using namespace tacticscan;
using tacticscan::testing::TempDir;
using tacticscan::testing::write_file;

TEST_CASE("hashing embeddings") {
    const std::vector<std::string> none;
    CHECK(hashing_embed(none, 64).isZero());
    const std::vector<std::string> w{"cipher", "init", "key"};
    const auto a = hashing_embed(w, 64);
    CHECK(a == hashing_embed(w, 64));
    CHECK(a.norm() == doctest::Approx(1.0));

    const std::vector<std::string> twice{"md5", "md5"}, once{"md5"};
    const auto t = hashing_embed(twice, 64);
    const auto o = hashing_embed(once, 64);
    CHECK(std::abs(t.dot(o)) == doctest::Approx(t.norm() * o.norm()));
}

TEST_CASE("hashing bucket and sign follow FNV-1a") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    const std::vector<std::string> w{"aes"};
    const auto v = hashing_embed(w, 32);
    const auto bucket = static_cast<Eigen::Index>(fnv1a64("aes") % 32);
    CHECK(std::abs(v[bucket]) == doctest::Approx(1.0));
    CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("hashing backend") {
    HashingBackend b(128);
    CHECK(b.dimension() == 128);
    CHECK(b.name() == "hashing:128");
    CHECK_THROWS_AS(HashingBackend(8), Error);
    auto made = make_backend("hashing:64");
    CHECK(made->dimension() == 64);
    CHECK(make_backend("hashing", 32)->dimension() == 32);
    CHECK_THROWS_AS(make_backend("bert"), Error);
}

TEST_CASE("represent pools the window embeddings") {
    HashingBackend b(64);
    TokenSequence one{{"cipher", "key"}, "s1"};
    CHECK(represent(one, b) == hashing_embed(one.tokens, 64));

    TokenSequence two{{"alpha", "beta", "gamma", "delta"}, "s2"};
    const std::vector<std::string> w0{"alpha", "beta", "gamma"}, w1{"delta"};
    const EmbeddingVector expected = (hashing_embed(w0, 64) + hashing_embed(w1, 64)) / 2.0;
    CHECK((represent(two, b, 3) - expected).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK(represent(TokenSequence{{}, "empty"}, b).isZero());
}

TEST_CASE("file backend") {
    TempDir dir;
    std::string line = R"({"snippet_id": "s1", "window_index": 0, "vector": [)";
    for (int i = 0; i < 768; ++i) line += (i ? "," : "") + std::to_string(i % 7);
    line += "]}\n";
    write_file(dir.path() / "one.jsonl", line);
    auto b = FileBackend::load(dir.path() / "one.jsonl");
    CHECK(b->dimension() == 768);
    CHECK(b->size() == 1);
    const std::vector<std::string> none;
    CHECK(b->embed_window("s1", 0, none)[8] == 1.0);
    try {
        b->embed_window("s1", 3, none);
        FAIL("expected MissingEmbedding");
    } catch (const MissingEmbedding& e) {
        CHECK(std::string(e.what()).find("s1") != std::string::npos);
    }

    write_file(dir.path() / "bad.jsonl", R"({"snippet_id": "a", "window_index": 0, "vector": [1, 2, 3]})"
                                         "\n"
                                         R"({"snippet_id": "b", "window_index": 0, "vector": [1, 2]})"
                                         "\n");
    try {
        FileBackend::load(dir.path() / "bad.jsonl");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    write_file(dir.path() / "two.jsonl", R"({"snippet_id": "s", "window_index": 0, "vector": [1, 0]})"
                                         "\n"
                                         R"({"snippet_id": "s", "window_index": 1, "vector": [0, 1]})"
                                         "\n");
    auto two = make_backend("file:" + (dir.path() / "two.jsonl").string());
    CHECK(two->name() == "file");
    TokenSequence seq{{"a", "b", "c"}, "s"};
    CHECK(represent(seq, *two, 2).isApprox(Eigen::Vector2d(0.5, 0.5)));
}

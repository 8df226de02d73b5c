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

#include <sstream>

#include <json.hpp>

#include "synthetic.hpp"
#include "tacticscan/cli.hpp"
#include "tacticscan/corpus.hpp"

using namespace tacticscan;
using namespace tacticscan::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

void write_snippets_file(const fs::path& path, const std::vector<CodeSnippet>& snippets) {
    std::ostringstream buf;
    write_snippets(buf, snippets);
    write_file(path, buf.str());
}

// Snippet files as fetch would leave them: related snippets pending review,
// the unrelated pool accepted.
void seed_snippets(const fs::path& out) {
    SyntheticSpec spec;
    spec.tactics = {"aes", "rsa"};
    spec.related_per_tactic = 40;
    spec.unrelated_per_tactic = 40;
    std::vector<CodeSnippet> pool;
    for (const auto& [id, ds] : synthetic_datasets(spec)) {
        auto related = ds.related;
        for (auto& s : related) s.review_status = ReviewStatus::Pending;
        write_snippets_file(out / "snippets" / (id + ".jsonl"), related);
        pool.insert(pool.end(), ds.unrelated.begin(), ds.unrelated.end());
    }
    write_snippets_file(out / "snippets" / "UNRELATED.jsonl", pool);
}

}  // namespace

TEST_CASE("usage errors") {
    const auto none = run({});
    CHECK(none.code == cli::kExitUsage);
    CHECK(none.err.find("scan") != std::string::npos);
    CHECK(run({"frobnicate"}).code == cli::kExitUsage);
    CHECK(run({"scan", "--bogus"}).code == cli::kExitUsage);
    CHECK(run({"eval", "--experiment", "4"}).code == cli::kExitUsage);
    CHECK(run({"train", "--classifier", "svm", "--tactic", "aes"}).code == cli::kExitUsage);
    CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("subcommand help lists flags") {
    const std::map<std::string, std::vector<std::string>> flags{
        {"fetch", {"--tactic", "--all", "--unrelated", "--api-base", "--max-pages"}},
        {"review", {"--tactic", "--import", "--export", "--accept-all"}},
        {"build", {"--tactic", "--all"}},
        {"stats", {"--window"}},
        {"train", {"--classifier", "--tactic", "--backend"}},
        {"eval", {"--experiment", "--classifier", "--k", "--backend"}},
        {"compare", {"--a", "--b"}},
        {"scan", {"--repo", "--model", "--backend"}},
        {"pool", {"--labels"}},
        {"graph", {"--repo"}},
    };
    for (const auto& [cmd, expected] : flags) {
        CAPTURE(cmd);
        const auto r = run({cmd, "--help"});
        CHECK(r.code == cli::kExitOk);
        const auto text = r.out + r.err;
        for (const auto& f : expected) {
            CAPTURE(f);
            CHECK(text.find(f) != std::string::npos);
        }
        for (const char* g : {"--seed", "--out", "--config"}) CHECK(text.find(g) != std::string::npos);
    }
}

TEST_CASE("runtime errors exit 2") {
    TempDir dir;
    const auto out = (dir.path() / "out").string();
    CHECK(run({"--out", out, "stats"}).code == cli::kExitRuntime);
    write_file(dir.path() / "bad.json", "{\"x\": 1}");
    write_file(dir.path() / "repo/A.java", "class A {}");
    const auto r = run({"--out", out, "scan", "--repo", (dir.path() / "repo").string(), "--model",
                        (dir.path() / "bad.json").string()});
    CHECK(r.code == cli::kExitRuntime);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("end-to-end pipeline") {
    TempDir dir;
    const auto out = dir.path() / "out";
    seed_snippets(out);
    const std::vector<std::string> g{"--out", out.string(), "--seed", "11"};
    auto cmd = [&](std::vector<std::string> args) {
        std::vector<std::string> full = g;
        full.insert(full.end(), args.begin(), args.end());
        const auto r = run(full);
        INFO(r.err);
        REQUIRE(r.code == cli::kExitOk);
        return r;
    };

    // Nothing accepted yet, so building fails.
    auto early = g;
    for (const char* a : {"build", "--tactic", "aes"}) early.push_back(a);
    CHECK(run(early).code == cli::kExitRuntime);

    CHECK(cmd({"review", "--tactic", "aes", "--accept-all"}).out.find("40 of 40") != std::string::npos);
    cmd({"review", "--tactic", "rsa", "--export", (dir.path() / "queue.jsonl").string()});
    cmd({"review", "--tactic", "rsa", "--import", (dir.path() / "queue.jsonl").string(), "--accept-all"});

    cmd({"build", "--tactic", "aes", "--tactic", "rsa"});
    for (const char* id : {"aes", "rsa"}) {
        const auto snippets = load_snippets(out / "datasets" / (std::string(id) + ".jsonl"));
        CHECK(snippets.size() == 50);
    }

    const auto stats = cmd({"stats"});
    CHECK(fs::exists(out / "stats.csv"));
    CHECK(read_file(out / "stats.csv") == stats.out);

    cmd({"train", "--classifier", "td", "--tactic", "aes"});
    cmd({"train", "--classifier", "mlp", "--tactic", "aes", "--tactic", "rsa", "--backend", "hashing:64"});
    CHECK(fs::exists(out / "models/aes-td.json"));
    CHECK(fs::exists(out / "models/aes+rsa-mlp.json"));
    const auto mlp = nlohmann::json::parse(read_file(out / "models/aes+rsa-mlp.json"));
    CHECK(mlp.at("class_labels") == nlohmann::json{"aes", "rsa"});

    cmd({"eval", "--experiment", "1", "--classifier", "td", "--classifier", "mlp", "--k", "5", "--backend",
         "hashing:64"});
    const auto td_csv = out / "eval/exp1_td.csv";
    const auto mlp_csv = out / "eval/exp1_mlp.csv";
    REQUIRE(fs::exists(td_csv));
    REQUIRE(fs::exists(mlp_csv));
    CHECK(read_file(td_csv).starts_with("tactic,classifier,precision,recall,f\n"));
    CHECK(nlohmann::json::parse(read_file(out / "eval/exp1.json")).contains("comparison"));

    cmd({"eval", "--experiment", "3", "--k", "5"});
    CHECK(fs::exists(out / "eval/exp3_td.csv"));

    cmd({"compare", "--a", td_csv.string(), "--b", mlp_csv.string()});
    const auto cmp = nlohmann::json::parse(read_file(out / "compare.json"));
    CHECK(cmp.at("p").get<double>() >= 0.0);
    CHECK(cmp.at("p").get<double>() <= 1.0);

    const auto repo = dir.path() / "repo";
    const auto fixture = write_java_repo(repo, "aes", 8, 2, 4);
    cmd({"scan", "--repo", repo.string(), "--model", (out / "models/aes-td.json").string(), "--model",
         (out / "models/aes+rsa-mlp.json").string()});
    const auto report = nlohmann::json::parse(read_file(out / "report.json"));
    CHECK(report.at("per_file").size() == 8);
    CHECK(report.at("model_ids") == nlohmann::json{"aes", "aes+rsa"});
    CHECK(read_file(out / "report.csv").starts_with("path,tactic,predicted,score\n"));

    std::string labels = "path,label\n";
    for (const auto& p : fixture.planted) labels += p + ",1\n";
    for (const auto& p : fixture.neutral) labels += p + ",0\n";
    write_file(dir.path() / "labels.csv", labels);
    cmd({"pool", "--labels", (dir.path() / "labels.csv").string()});
    const auto pool = read_file(out / "pool.csv");
    CHECK(std::count(pool.begin(), pool.end(), '\n') == 1 + 2 + 6);

    cmd({"graph", "--repo", repo.string()});
    CHECK(read_file(out / "graph.dot").starts_with("digraph dependencies {\n"));
}

TEST_CASE("config file") {
    TempDir dir;
    write_file(dir.path() / "bad.json", "{ not json");
    CHECK(run({"--config", (dir.path() / "bad.json").string(), "--out", (dir.path() / "o").string(), "stats"})
              .code != cli::kExitOk);
}

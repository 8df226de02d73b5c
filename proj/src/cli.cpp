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

#include "tacticscan/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tacticscan/chunking.hpp"
#include "tacticscan/corpus.hpp"
#include "tacticscan/depgraph.hpp"
#include "tacticscan/embedding.hpp"
#include "tacticscan/error.hpp"
#include "tacticscan/experiment.hpp"
#include "tacticscan/mlp.hpp"
#include "tacticscan/preprocess.hpp"
#include "tacticscan/scanner.hpp"
#include "tacticscan/stackexchange.hpp"
#include "tacticscan/stats.hpp"
#include "tacticscan/taxonomy.hpp"
#include "tacticscan/td.hpp"

namespace fs = std::filesystem;

namespace tacticscan::cli {

namespace {

struct Globals {
    std::string config_path;
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    bool verbose = false;
};

/// Values resolved from the optional JSON config file.
struct Settings {
    PreprocessConfig preprocess = PreprocessConfig::dataset();
    PreprocessConfig scan_preprocess = PreprocessConfig::scan();
    TrainConfig train = TrainConfig::head_only();
    std::string backend = "hashing";
    std::size_t window_size = kDefaultWindowSize;
    FetchOptions fetch;
};

Settings load_settings(const Globals& g) {
    Settings s;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in) throw Error("cannot read config " + g.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(g.config_path + ": " + e.what());
        }
        if (j.contains("preprocess")) s.preprocess = j.at("preprocess").get<PreprocessConfig>();
        if (j.contains("scan_preprocess")) s.scan_preprocess = j.at("scan_preprocess").get<PreprocessConfig>();
        if (j.contains("train")) {
            const auto& t = j.at("train");
            s.train = t.is_string() ? TrainConfig::preset(t.get<std::string>()) : t.get<TrainConfig>();
        }
        if (j.contains("backend")) s.backend = j.at("backend").get<std::string>();
        if (j.contains("window_size")) s.window_size = j.at("window_size").get<std::size_t>();
        if (j.contains("fetch")) {
            const auto& f = j.at("fetch");
            s.fetch.api_base = f.value("api_base", s.fetch.api_base);
            s.fetch.site = f.value("site", s.fetch.site);
            s.fetch.max_pages = f.value("max_pages", s.fetch.max_pages);
            s.fetch.page_size = f.value("page_size", s.fetch.page_size);
        }
    }
    s.train.seed = g.seed;
    s.train.validate();
    if (s.window_size == 0) throw Error("window_size must be positive");
    return s;
}

fs::path ensure_dir(const fs::path& p) {
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed: " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_snippet_file(const fs::path& path, std::span<const CodeSnippet> snippets) {
    std::ostringstream buf;
    write_snippets(buf, snippets);
    write_text(path, buf.str());
}

std::vector<std::string> resolve_tactics(const std::vector<std::string>& requested, bool all) {
    const auto& tax = TacticTaxonomy::builtin();
    if (all) {
        std::vector<std::string> ids;
        for (const auto* t : tax.included_tactics()) ids.push_back(t->id);
        return ids;
    }
    if (requested.empty()) throw CLI::ValidationError("--tactic", "give --tactic <id> or --all");
    for (const auto& id : requested) tax.query_keyword(id);
    return requested;
}

fs::path snippet_path(const fs::path& out, std::string_view id) {
    return out / "snippets" / (std::string(id) + ".jsonl");
}

fs::path dataset_path(const fs::path& out, std::string_view id) {
    return out / "datasets" / (std::string(id) + ".jsonl");
}

std::map<std::string, TacticDataset> load_datasets(const fs::path& out) {
    const auto dir = out / "datasets";
    if (!fs::is_directory(dir)) throw Error("no datasets in " + dir.string() + "; run build first");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::map<std::string, TacticDataset> datasets;
    for (const auto& f : files) {
        const auto id = f.stem().string();
        datasets.emplace(id, dataset_from_snippets(id, load_snippets(f)));
    }
    if (datasets.empty()) throw Error("no datasets in " + dir.string());
    return datasets;
}

std::string fmt(double v, const char* spec = "%.4f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::optional<std::string> source_date() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (!epoch || !*epoch) return std::nullopt;
    return std::string(epoch);
}

// Options every subcommand accepts, so each --help lists them.
void add_globals(CLI::App& app, Globals& g) {
    app.add_option("--config", g.config_path, "JSON config with preprocess/train/backend settings");
    app.add_option("--seed", g.seed, "Seed for every stochastic step")->capture_default_str();
    app.add_option("--out", g.out_dir, "Output directory (created if absent)")->capture_default_str();
    app.add_flag("-v,--verbose", g.verbose, "Verbose progress on stderr");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Globals g;
    CLI::App app{"Detect security tactics in Java code", "tacticscan"};
    app.require_subcommand(1);
    add_globals(app, g);

    // fetch
    auto* fetch = app.add_subcommand("fetch", "Query the StackExchange API and extract code snippets");
    std::vector<std::string> fetch_tactics;
    bool fetch_all = false, fetch_unrelated = false;
    std::string api_base;
    std::size_t max_pages = 0;
    fetch->add_option("--tactic", fetch_tactics, "Tactic id (repeatable)");
    fetch->add_flag("--all", fetch_all, "Every included tactic");
    fetch->add_flag("--unrelated", fetch_unrelated, "Fetch the java-tagged unrelated pool");
    fetch->add_option("--api-base", api_base, "API base URL");
    fetch->add_option("--max-pages", max_pages, "Page limit per query");
    add_globals(*fetch, g);

    // review
    auto* review = app.add_subcommand("review", "Export or import the manual review queue");
    std::string review_tactic, review_import, review_export;
    bool accept_all = false;
    review->add_option("--tactic", review_tactic, "Tactic id")->required();
    auto* imp = review->add_option("--import", review_import, "JSONL file with reviewed statuses");
    review->add_option("--export", review_export, "Write the review queue to this JSONL file")->excludes(imp);
    review->add_flag("--accept-all", accept_all, "Mark every pending snippet accepted");
    add_globals(*review, g);

    // build
    auto* build = app.add_subcommand("build", "Assemble balanced datasets from reviewed snippets");
    std::vector<std::string> build_tactics;
    bool build_all = false;
    build->add_option("--tactic", build_tactics, "Tactic id (repeatable)");
    build->add_flag("--all", build_all, "Every tactic with a snippet file");
    add_globals(*build, g);

    // stats
    auto* stats = app.add_subcommand("stats", "Window statistics of the built datasets");
    std::size_t stats_window = 0;
    stats->add_option("--window", stats_window, "Window size in tokens");
    add_globals(*stats, g);

    // train
    auto* train = app.add_subcommand("train", "Train a classifier on built datasets");
    std::string train_classifier = "td";
    std::vector<std::string> train_tactics;
    std::string train_backend;
    train->add_option("--classifier", train_classifier, "td or mlp")
        ->check(CLI::IsMember({"td", "mlp"}))
        ->capture_default_str();
    train->add_option("--tactic", train_tactics, "Tactic id; several ids train a multi-class mlp")->required();
    train->add_option("--backend", train_backend, "hashing, hashing:<dim> or file:<path>");
    add_globals(*train, g);

    // eval
    auto* eval = app.add_subcommand("eval", "Stratified k-fold evaluation of an experiment");
    int experiment = 1;
    std::vector<std::string> eval_classifiers;
    std::size_t k = 10;
    std::string eval_backend;
    eval->add_option("--experiment", experiment, "1, 2 or 3")->check(CLI::Range(1, 3))->required();
    eval->add_option("--classifier", eval_classifiers, "td or mlp (repeatable)")
        ->check(CLI::IsMember({"td", "mlp"}));
    eval->add_option("--k", k, "Number of folds")->check(CLI::Range(2, 1000))->capture_default_str();
    eval->add_option("--backend", eval_backend, "hashing, hashing:<dim> or file:<path>");
    add_globals(*eval, g);

    // compare
    auto* compare = app.add_subcommand("compare", "Mann-Whitney U test on the F columns of two CSVs");
    std::string csv_a, csv_b;
    compare->add_option("--a", csv_a, "First results CSV")->required()->check(CLI::ExistingFile);
    compare->add_option("--b", csv_b, "Second results CSV")->required()->check(CLI::ExistingFile);
    add_globals(*compare, g);

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Classify every Java file of a repository");
    std::string repo;
    std::vector<std::string> model_paths;
    std::string scan_backend;
    scan_cmd->add_option("--repo", repo, "Repository root")->required()->check(CLI::ExistingDirectory);
    scan_cmd->add_option("--model", model_paths, "Model JSON (repeatable)")->required()->check(CLI::ExistingFile);
    scan_cmd->add_option("--backend", scan_backend, "Backend for mlp models");
    add_globals(*scan_cmd, g);

    // pool
    auto* pool = app.add_subcommand("pool", "Sample a 1:4 related/unrelated test pool");
    std::string labels_path;
    pool->add_option("--labels", labels_path, "CSV path,label")->required()->check(CLI::ExistingFile);
    add_globals(*pool, g);

    // graph
    auto* graph = app.add_subcommand("graph", "Import dependency graph of a repository as DOT");
    std::string graph_repo;
    graph->add_option("--repo", graph_repo, "Repository root")->required()->check(CLI::ExistingDirectory);
    add_globals(*graph, g);

    if (args.empty()) {
        err << app.help();
        return kExitUsage;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    auto log = [&](const std::string& msg) {
        if (g.verbose) err << msg << "\n";
    };

    try {
        const Settings settings = load_settings(g);
        const fs::path out_dir = ensure_dir(g.out_dir);
        const auto& tax = TacticTaxonomy::builtin();

        if (fetch->parsed()) {
            if (fetch_tactics.empty() && !fetch_all && !fetch_unrelated)
                throw CLI::ValidationError("fetch", "give --tactic <id>, --all or --unrelated");
            FetchOptions opt = settings.fetch;
            if (!api_base.empty()) opt.api_base = api_base;
            if (max_pages) opt.max_pages = max_pages;
            const auto cache_dir = ensure_dir(out_dir / "cache");
            ensure_dir(out_dir / "snippets");
            auto fetch_cached = [&](const std::string& keyword) {
                const auto path = cache_dir / cache_key(keyword, opt.tagged);
                if (fs::exists(path)) {
                    log("cache hit " + path.string());
                    return load_question_cache(path);
                }
                auto qs = fetch_questions(keyword, opt);
                save_question_cache(path, qs);
                return qs;
            };
            std::vector<std::string> ids;
            if (fetch_all || !fetch_tactics.empty()) ids = resolve_tactics(fetch_tactics, fetch_all);
            for (const auto& id : ids) {
                const auto questions = fetch_cached(tax.query_keyword(id));
                std::vector<CodeSnippet> snippets;
                for (const auto& q : questions) {
                    auto r = extract_snippets(q, id);
                    for (const auto& w : r.warnings) log(w);
                    snippets.insert(snippets.end(), r.snippets.begin(), r.snippets.end());
                }
                write_snippet_file(snippet_path(out_dir, id), snippets);
                out << id << ": " << questions.size() << " questions, " << snippets.size() << " snippets\n";
            }
            if (fetch_unrelated) {
                opt.tagged = "java";
                const auto questions = fetch_cached("");
                const auto pool_questions = build_unrelated_pool(questions, {});
                write_snippet_file(snippet_path(out_dir, kUnrelated), pool_questions.snippets);
                out << kUnrelated << ": " << questions.size() << " questions, " << pool_questions.snippets.size()
                    << " snippets\n";
            }
            return kExitOk;
        }

        if (review->parsed()) {
            const auto path = snippet_path(out_dir, review_tactic);
            auto snippets = load_snippets(path);
            if (!review_export.empty()) {
                export_review(review_export, snippets);
                out << "exported " << snippets.size() << " snippets to " << review_export << "\n";
                return kExitOk;
            }
            if (!review_import.empty()) import_review(review_import, snippets);
            if (accept_all)
                for (auto& s : snippets)
                    if (s.review_status == ReviewStatus::Pending) s.review_status = ReviewStatus::Accepted;
            write_snippet_file(path, snippets);
            const auto accepted = std::count_if(snippets.begin(), snippets.end(), [](const auto& s) {
                return s.review_status == ReviewStatus::Accepted;
            });
            out << review_tactic << ": " << accepted << " of " << snippets.size() << " snippets accepted\n";
            return kExitOk;
        }

        if (build->parsed()) {
            std::vector<std::string> ids;
            if (build_all) {
                for (const auto* t : tax.included_tactics())
                    if (fs::exists(snippet_path(out_dir, t->id))) ids.push_back(t->id);
            } else {
                ids = build_tactics;
                if (ids.empty()) throw CLI::ValidationError("build", "give --tactic <id> or --all");
            }
            const auto pool_snippets = load_snippets(snippet_path(out_dir, kUnrelated));
            ensure_dir(out_dir / "datasets");
            for (const auto& id : ids) {
                const auto related = load_snippets(snippet_path(out_dir, id));
                const auto ds = assemble_dataset(id, related, pool_snippets, g.seed);
                write_snippet_file(dataset_path(out_dir, id), ds.snippets());
                out << id << ": " << ds.related.size() << " related + " << ds.unrelated.size() << " unrelated\n";
            }
            return kExitOk;
        }

        if (stats->parsed()) {
            const auto datasets = load_datasets(out_dir);
            std::vector<TacticDataset> list;
            for (const auto& [id, ds] : datasets) list.push_back(ds);
            const auto ws = stats_window ? stats_window : settings.window_size;
            const auto rows = length_stats(list, Preprocessor(settings.preprocess), ws);
            std::ostringstream csv;
            write_length_stats_csv(csv, rows);
            write_text(out_dir / "stats.csv", csv.str());
            out << csv.str();
            return kExitOk;
        }

        if (train->parsed()) {
            const auto datasets = load_datasets(out_dir);
            std::vector<const TacticDataset*> selected;
            for (const auto& id : train_tactics) {
                const auto it = datasets.find(id);
                if (it == datasets.end()) throw Error("no dataset for tactic '" + id + "'");
                selected.push_back(&it->second);
            }
            const Preprocessor prep(settings.preprocess);
            ensure_dir(out_dir / "models");
            std::string name;
            for (const auto& id : train_tactics) name += (name.empty() ? "" : "+") + id;
            const auto model_path = out_dir / "models" / (name + "-" + train_classifier + ".json");

            if (train_classifier == "td") {
                if (selected.size() != 1) throw Error("the td classifier trains one tactic at a time");
                const auto corpus = binary_corpus(*selected.front(), prep);
                const auto n = corpus.set.labels.size();
                std::unique_ptr<bool[]> related(new bool[n]);
                for (std::size_t i = 0; i < n; ++i) related[i] = corpus.set.labels[i] == 1;
                const auto model = td_train(name, corpus.tokens, std::span<const bool>(related.get(), n));
                write_json(model_path, model);
                out << name << ": td threshold " << fmt(model.threshold, "%.6f") << ", " << model.vocab_size()
                    << " terms -> " << model_path.generic_string() << "\n";
                return kExitOk;
            }

            const auto backend = make_backend(train_backend.empty() ? settings.backend : train_backend);
            const auto corpus = selected.size() == 1 ? binary_corpus(*selected.front(), prep)
                                                     : multiclass_corpus(selected, prep);
            std::vector<EmbeddingVector> reps;
            reps.reserve(corpus.tokens.size());
            for (const auto& t : corpus.tokens) reps.push_back(represent(t, *backend, settings.window_size));
            const auto result =
                mlp_train(reps, corpus.set.labels, corpus.set.class_labels, settings.train, backend->name());
            write_json(model_path, result.model);
            out << name << ": mlp loss " << fmt(result.initial_loss) << " -> " << fmt(result.final_loss) << " -> "
                << model_path.generic_string() << "\n";
            return kExitOk;
        }

        if (eval->parsed()) {
            const auto datasets = load_datasets(out_dir);
            ExperimentConfig cfg;
            cfg.experiment = experiment;
            cfg.k = k;
            cfg.seed = g.seed;
            cfg.preprocess = settings.preprocess;
            cfg.train = settings.train;
            cfg.window_size = settings.window_size;
            cfg.classifiers.clear();
            if (eval_classifiers.empty()) eval_classifiers.push_back("td");
            for (const auto& c : eval_classifiers) cfg.classifiers.push_back(parse_classifier(c));
            std::unique_ptr<EmbeddingBackend> backend;
            if (std::find(cfg.classifiers.begin(), cfg.classifiers.end(), ClassifierKind::Mlp) !=
                cfg.classifiers.end()) {
                backend = make_backend(eval_backend.empty() ? settings.backend : eval_backend);
                cfg.backend = backend.get();
            }
            const auto result = run_experiment(cfg, datasets, tax);
            const auto eval_dir = ensure_dir(out_dir / "eval");
            const auto stem = "exp" + std::to_string(experiment);
            for (auto kind : cfg.classifiers) {
                ExperimentResult part = result;
                std::erase_if(part.rows, [&](const auto& r) { return r.classifier != to_string(kind); });
                std::ostringstream csv;
                write_experiment_csv(csv, part);
                write_text(eval_dir / (stem + "_" + std::string(to_string(kind)) + ".csv"), csv.str());
            }
            write_json(eval_dir / (stem + ".json"), experiment_json(result));
            for (const auto& row : result.rows)
                out << row.unit << " " << row.classifier << " P=" << fmt(row.metrics.precision, "%.2f")
                    << " R=" << fmt(row.metrics.recall, "%.2f") << " F=" << fmt(row.metrics.f_measure, "%.2f")
                    << "\n";
            if (result.comparison)
                out << "Mann-Whitney U=" << fmt(result.comparison->test.u_a, "%.1f")
                    << " p=" << fmt(result.comparison->test.p_two_sided, "%.4g") << "\n";
            return kExitOk;
        }

        if (compare->parsed()) {
            auto read = [](const std::string& path) {
                std::ifstream in(path);
                if (!in) throw Error("cannot read " + path);
                return read_f_column(in);
            };
            Comparison c;
            c.classifier_a = fs::path(csv_a).stem().string();
            c.classifier_b = fs::path(csv_b).stem().string();
            c.f_a = read(csv_a);
            c.f_b = read(csv_b);
            c.test = mann_whitney_u(c.f_a, c.f_b);
            write_json(out_dir / "compare.json", comparison_json(c));
            out << "U=" << fmt(c.test.u_a, "%.1f") << " p=" << fmt(c.test.p_two_sided, "%.4g")
                << (c.test.exact ? " (exact)" : " (normal approximation)") << "\n";
            return kExitOk;
        }

        if (scan_cmd->parsed()) {
            std::vector<ScanModel> models;
            for (const auto& p : model_paths) models.push_back(load_scan_model(p));
            std::unique_ptr<EmbeddingBackend> backend;
            if (!scan_backend.empty()) backend = make_backend(scan_backend);
            ScanOptions opt;
            opt.preprocess = settings.scan_preprocess;
            opt.window_size = settings.window_size;
            opt.timestamp = source_date();
            const auto report = scan(repo, models, backend.get(), opt);
            write_json(out_dir / "report.json", report);
            std::ostringstream csv;
            write_scan_csv(csv, report);
            write_text(out_dir / "report.csv", csv.str());
            out << report.per_file.size() << " files scanned, " << report.ruled_out.size() << " ruled out, "
                << report.skipped.size() << " skipped\n";
            return kExitOk;
        }

        if (pool->parsed()) {
            std::ifstream in(labels_path);
            const auto labels = read_labels_csv(in);
            const auto paths = build_test_pool(labels, g.seed);
            std::string csv = "path,label\n";
            std::size_t positives = 0;
            for (const auto& p : paths) {
                const bool related = labels.at(p);
                positives += related;
                csv += p + "," + (related ? "1" : "0") + "\n";
            }
            write_text(out_dir / "pool.csv", csv);
            out << positives << " related + " << paths.size() - positives << " unrelated files\n";
            return kExitOk;
        }

        if (graph->parsed()) {
            const auto dg = dependency_graph(fs::path(graph_repo));
            write_text(out_dir / "graph.dot", to_dot(dg));
            out << dg.nodes.size() << " nodes, " << dg.edges.size() << " edges\n";
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << app.help();
    return kExitUsage;
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace tacticscan::cli

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

#include <algorithm>
#include <map>
#include <set>

#include "tacticscan/cross_validation.hpp"
#include "tacticscan/error.hpp"
#include "tacticscan/random.hpp"

using namespace tacticscan;

namespace {

LabeledSet make_set(const std::vector<std::size_t>& class_sizes) {
    LabeledSet s;
    for (std::size_t c = 0; c < class_sizes.size(); ++c) {
        s.class_labels.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < class_sizes[c]; ++i) {
            s.ids.push_back("c" + std::to_string(c) + "-" + std::to_string(i));
            s.labels.push_back(c);
        }
    }
    return s;
}

// Per fold and class, the number of test samples.
std::vector<std::vector<std::size_t>> fold_counts(const LabeledSet& s, const FoldPlan& plan) {
    std::vector<std::vector<std::size_t>> counts(plan.k, std::vector<std::size_t>(s.class_labels.size()));
    for (std::size_t i = 0; i < s.size(); ++i) ++counts[plan.fold_of[i]][s.labels[i]];
    return counts;
}

Learner oracle_learner(const LabeledSet& s) {
    return [&s](std::span<const std::size_t>) { return Predictor([&s](std::size_t i) { return s.labels[i]; }); };
}

}  // namespace

TEST_CASE("balanced folds") {
    const auto s = make_set({50, 50});
    const auto plan = stratified_folds(s, 10, 42);
    for (const auto& fold : fold_counts(s, plan)) CHECK(fold == std::vector<std::size_t>{5, 5});
}

TEST_CASE("one extra sample lands in one fold") {
    const auto s = make_set({51, 50});
    const auto counts = fold_counts(s, stratified_folds(s, 10, 42));
    std::size_t sixes = 0;
    for (const auto& fold : counts) {
        CHECK((fold[0] == 5 || fold[0] == 6));
        CHECK(fold[1] == 5);
        sixes += fold[0] == 6;
    }
    CHECK(sixes == 1);
}

TEST_CASE("classes smaller than k are rejected") {
    const auto s = make_set({9, 50});
    try {
        stratified_folds(s, 10, 1);
        FAIL("expected Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("c0") != std::string::npos);
    }
    CHECK_THROWS_AS(stratified_folds(make_set({20, 20}), 1, 1), Error);
}

TEST_CASE("fold plans partition the ids") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + rng.uniform_index(9);
        std::vector<std::size_t> sizes(2 + rng.uniform_index(3));
        for (auto& n : sizes) n = k + rng.uniform_index(60);
        const auto s = make_set(sizes);
        const auto plan = stratified_folds(s, k, rng.next());
        CHECK(plan.assignments().size() == s.size());
        std::multiset<std::size_t> seen;
        for (std::size_t f = 0; f < k; ++f)
            for (auto i : plan.test_indices(f)) seen.insert(i);
        CHECK(seen.size() == s.size());
        CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == s.size());
        const auto counts = fold_counts(s, plan);
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            std::size_t lo = SIZE_MAX, hi = 0;
            for (const auto& fold : counts) {
                lo = std::min(lo, fold[c]);
                hi = std::max(hi, fold[c]);
            }
            CHECK(hi - lo <= 1);
        }
    }
}

TEST_CASE("fold plans depend only on the seed") {
    const auto s = make_set({30, 20});
    CHECK(stratified_folds(s, 5, 7).fold_of == stratified_folds(s, 5, 7).fold_of);
    CHECK(stratified_folds(s, 5, 7).fold_of != stratified_folds(s, 5, 8).fold_of);
}

TEST_CASE("oversampling") {
    const auto s = make_set({200, 50, 200, 50});
    std::vector<std::size_t> all(s.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto over = oversample(all, s.labels, 3);
    std::map<std::size_t, std::size_t> per_class;
    for (auto i : over) ++per_class[s.labels[i]];
    for (const auto& [c, n] : per_class) CHECK(n == 200);

    const auto balanced = make_set({5, 5});
    std::vector<std::size_t> idx(10);
    for (std::size_t i = 0; i < 10; ++i) idx[i] = i;
    CHECK(oversample(idx, balanced.labels, 3) == idx);

    const auto tiny = make_set({3, 1});
    const std::vector<std::size_t> t{0, 1, 2, 3};
    const auto o = oversample(t, tiny.labels, 5);
    CHECK(o.size() == 6);
    CHECK(std::count(o.begin(), o.end(), 3) == 3);
    for (auto i : t) CHECK(std::count(o.begin(), o.end(), i) >= 1);
}

TEST_CASE("perfect classifier") {
    const auto s = make_set({30, 30, 20});
    const auto r = cross_validate(s, oracle_learner(s), {10, 42, false});
    for (const auto& m : r.per_class) {
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f_measure == 1.0);
    }
    CHECK(r.macro.f_measure == 1.0);
    CHECK(r.fold_matrices.size() == 10);
}

TEST_CASE("majority classifier on balanced data") {
    const auto s = make_set({50, 50});
    Learner always_zero = [](std::span<const std::size_t>) { return Predictor([](std::size_t) { return 0; }); };
    const auto r = cross_validate(s, always_zero, {});
    CHECK(r.per_class[0].recall == 1.0);
    CHECK(r.per_class[1].recall == 0.0);
    CHECK(r.per_class[0].precision == 0.5);
}

TEST_CASE("averaged matrix rows equal mean test counts") {
    const auto s = make_set({37, 23});
    Rng rng(4);
    Learner noisy = [&](std::span<const std::size_t>) {
        return Predictor([&](std::size_t) { return static_cast<std::size_t>(rng.uniform_index(2)); });
    };
    const auto r = cross_validate(s, noisy, {});
    for (Eigen::Index c = 0; c < 2; ++c)
        CHECK(r.averaged.counts.row(c).sum() == doctest::Approx((c == 0 ? 37.0 : 23.0) / 10.0));
    for (const auto& m : r.per_class) CHECK(m.f_measure == doctest::Approx(f_measure(m.precision, m.recall)));
}

TEST_CASE("oversampled training never touches the test fold") {
    const auto s = make_set({60, 12});
    std::set<std::size_t> current_test;
    Learner checker = [&](std::span<const std::size_t> train) {
        std::set<std::string> train_ids;
        for (auto i : train) train_ids.insert(s.ids[i]);
        std::map<std::size_t, std::size_t> per_class;
        for (auto i : train) ++per_class[s.labels[i]];
        CHECK(per_class[0] == per_class[1]);
        return Predictor([&s, train_ids](std::size_t i) {
            CHECK_FALSE(train_ids.count(s.ids[i]));
            return s.labels[i];
        });
    };
    cross_validate(s, checker, {6, 1, true});
}

TEST_CASE("learner failures name the fold") {
    const auto s = make_set({20, 20});
    Learner failing = [](std::span<const std::size_t>) -> Predictor { throw Error("boom"); };
    try {
        cross_validate(s, failing, {5, 1, false});
        FAIL("expected Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "fold 0: boom");
    }
}

TEST_CASE("report JSON omits the runtime") {
    const auto s = make_set({20, 20});
    const auto r = cross_validate(s, oracle_learner(s), {5, 1, false});
    nlohmann::json j = r;
    CHECK_FALSE(j.contains("runtime_seconds"));
    CHECK(j.at("folds").size() == 5);
    CHECK(j.at("per_class").at("c1").at("f_measure") == 1.0);
}

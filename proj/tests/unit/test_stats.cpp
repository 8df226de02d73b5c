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

#include <cmath>

#include "tacticscan/random.hpp"
#include "tacticscan/stats.hpp"

using namespace tacticscan;

TEST_CASE("midranks") {
    const std::vector<double> v{3, 1, 3, 2};
    CHECK(midranks(v) == std::vector<double>{3.5, 1, 3.5, 2});
}

TEST_CASE("exact branch on fully separated samples") {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    const auto r = mann_whitney_u(a, b);
    CHECK(r.exact);
    CHECK(r.u_a == 0.0);
    CHECK(r.u_b == 9.0);
    CHECK(r.p_two_sided == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("identical samples") {
    const std::vector<double> small{1, 2, 3, 4};
    CHECK(mann_whitney_u(small, small).p_two_sided >= 0.99);
    std::vector<double> big;
    for (int i = 0; i < 30; ++i) big.push_back(i * 0.1);
    const auto r = mann_whitney_u(big, big);
    CHECK_FALSE(r.exact);
    CHECK(r.p_two_sided == doctest::Approx(1.0));
}

TEST_CASE("U statistics sum to the product of sizes") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + rng.uniform_index(25)), b(1 + rng.uniform_index(25));
        for (auto& x : a) x = std::round(rng.uniform_real(0, 10));
        for (auto& x : b) x = std::round(rng.uniform_real(0, 10));
        const auto r = mann_whitney_u(a, b);
        CHECK(r.u_a + r.u_b == doctest::Approx(double(a.size() * b.size())));
        CHECK(r.p_two_sided >= 0.0);
        CHECK(r.p_two_sided <= 1.0);
    }
}

TEST_CASE("U is invariant under increasing transforms") {
    Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(2 + rng.uniform_index(20)), b(2 + rng.uniform_index(20));
        for (auto& x : a) x = rng.uniform_real(0.1, 5);
        for (auto& x : b) x = rng.uniform_real(0.1, 5);
        auto ta = a, tb = b;
        for (auto& x : ta) x = std::exp(x) + 3;
        for (auto& x : tb) x = std::exp(x) + 3;
        const auto r = mann_whitney_u(a, b);
        const auto t = mann_whitney_u(ta, tb);
        CHECK(r.u_a == t.u_a);
        CHECK(r.p_two_sided == doctest::Approx(t.p_two_sided));
    }
}

TEST_CASE("exact p agrees with brute-force enumeration") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t na = 2 + rng.uniform_index(4), nb = 2 + rng.uniform_index(4);
        std::vector<double> a(na), b(nb), all;
        for (auto& x : a) x = double(rng.uniform_index(100));
        for (auto& x : b) x = double(rng.uniform_index(100)) + 0.5;
        all = a;
        all.insert(all.end(), b.begin(), b.end());
        const auto r = mann_whitney_u(a, b);
        REQUIRE(r.exact);
        // All distinct values, so U for a subset is a rank-sum shift.
        const auto n = all.size();
        std::size_t low = 0, high = 0, total = 0;
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            if (std::size_t(__builtin_popcount(mask)) != na) continue;
            double u = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(mask >> i & 1U)) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (!(mask >> j & 1U)) u += all[i] > all[j] ? 1.0 : (all[i] == all[j] ? 0.5 : 0.0);
            }
            ++total;
            low += u <= r.u_a;
            high += u >= r.u_a;
        }
        const double expected = std::min(1.0, 2.0 * double(std::min(low, high)) / double(total));
        CHECK(r.p_two_sided == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("normal approximation on a clear shift") {
    std::vector<double> a, b;
    for (int i = 0; i < 20; ++i) {
        a.push_back(i);
        b.push_back(i + 15);
    }
    const auto r = mann_whitney_u(a, b);
    CHECK_FALSE(r.exact);
    CHECK(r.p_two_sided < 0.001);
}

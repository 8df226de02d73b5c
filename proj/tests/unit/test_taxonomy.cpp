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
#include <set>

#include "tacticscan/error.hpp"
#include "tacticscan/taxonomy.hpp"

using namespace tacticscan;

namespace {

std::vector<std::string> ids(const std::vector<const TaxonomyNode*>& nodes) {
    std::vector<std::string> out;
    for (const auto* n : nodes) out.push_back(n->id);
    return out;
}

}  // namespace

TEST_CASE("builtin taxonomy has the three top-level categories") {
    const auto& tax = TacticTaxonomy::builtin();
    REQUIRE(tax.roots().size() == 3);
    CHECK(tax.roots()[0].id == "detect");
    CHECK(tax.roots()[1].id == "prevent");
    CHECK(tax.roots()[2].id == "react");
}

TEST_CASE("included tactics are distinct and carry query keywords") {
    const auto& tax = TacticTaxonomy::builtin();
    const auto included = ids(tax.included_tactics());
    CHECK(included.size() == 20);
    CHECK(std::set<std::string>(included.begin(), included.end()).size() == included.size());
    for (const auto& id : included) CHECK_FALSE(tax.query_keyword(id).empty());
}

TEST_CASE("query keywords match the dataset table") {
    const auto& tax = TacticTaxonomy::builtin();
    CHECK(tax.query_keyword("aes") == "aes");
    CHECK(tax.query_keyword("sha256") == "sha256");
    CHECK(tax.query_keyword("token_authentication") == "token authentication");
    CHECK(tax.query_keyword("input_validation") == "validation interceptor");
    CHECK(tax.query_keyword("audit_trail") == "audit trail");
}

TEST_CASE("excluded tactics cannot be queried") {
    const auto& tax = TacticTaxonomy::builtin();
    const auto excluded = ids(tax.excluded_tactics());
    CHECK(std::find(excluded.begin(), excluded.end(), "intrusion") != excluded.end());
    CHECK_THROWS_AS(tax.query_keyword("intrusion"), Error);
    CHECK_THROWS_AS(tax.query_keyword("no_such_tactic"), Error);
}

TEST_CASE("experiment categories group at least two tactics") {
    const auto& tax = TacticTaxonomy::builtin();
    const auto cats = ids(tax.experiment_categories());
    for (const auto* c : tax.experiment_categories()) CHECK(tax.tactics_of(*c).size() >= 2);
    CHECK(std::find(cats.begin(), cats.end(), "data_integrity") != cats.end());
    CHECK(std::find(cats.begin(), cats.end(), "encrypt_decrypt") != cats.end());
    const auto* enc = tax.find("encrypt_decrypt");
    REQUIRE(enc != nullptr);
    const auto members = tax.tactics_of(*enc);
    CHECK(std::set<std::string>(members.begin(), members.end()) ==
          std::set<std::string>{"aes", "blowfish", "rsa", "3des"});
    const auto* di = tax.find("data_integrity");
    REQUIRE(di != nullptr);
    const auto di_members = tax.tactics_of(*di);
    CHECK(std::set<std::string>(di_members.begin(), di_members.end()) ==
          std::set<std::string>{"sha256", "sha512", "md5"});
}

TEST_CASE("a tactic may sit under two categories") {
    const auto& tax = TacticTaxonomy::builtin();
    const auto* authn = tax.find("authenticate");
    const auto* authz = tax.find("authorize");
    REQUIRE(authn != nullptr);
    REQUIRE(authz != nullptr);
    const auto a = tax.tactics_of(*authn);
    const auto b = tax.tactics_of(*authz);
    CHECK(std::find(a.begin(), a.end(), "ldap") != a.end());
    CHECK(std::find(b.begin(), b.end(), "ldap") != b.end());
}

TEST_CASE("constructor rejects malformed trees") {
    CHECK_THROWS_AS(TacticTaxonomy({}), Error);
    std::vector<TaxonomyNode> roots;
    for (const char* id : {"detect", "prevent", "react"})
        roots.push_back({id, id, NodeKind::Category, std::nullopt, true, {}});
    CHECK_NOTHROW(TacticTaxonomy{roots});
    roots[0].children.push_back({"x", "X", NodeKind::Tactic, std::nullopt, true, {}});
    CHECK_THROWS_AS(TacticTaxonomy{roots}, Error);
}

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
#include "tacticscan/depgraph.hpp"

using namespace tacticscan;
using Edge = std::pair<std::string, std::string>;

TEST_CASE("header parsing") {
    const auto h = parse_java_header(
        "/* license */\n@Generated\npackage com.acme.auth;\n\n"
        "import java.util.List;\n"
        "import static com.acme.util.Strings.join;\n"
        "import com.acme.crypto.*;\n"
        "// import fake.Commented;\n"
        "import com.acme . model . User ;\n"
        "public class Login { String s = \"import not.This;\"; }\n"
        "import after.Body;\n");
    CHECK(h.package == "com.acme.auth");
    REQUIRE(h.imports.size() == 4);
    CHECK(h.imports[0].name == "java.util.List");
    CHECK(h.imports[1].is_static);
    CHECK(h.imports[1].name == "com.acme.util.Strings.join");
    CHECK(h.imports[2].wildcard);
    CHECK(h.imports[2].name == "com.acme.crypto");
    CHECK(h.imports[3].name == "com.acme.model.User");
}

TEST_CASE("default package") {
    const auto h = parse_java_header("import b.C;\nclass A {}");
    CHECK(h.package.empty());
    REQUIRE(h.imports.size() == 1);
}

TEST_CASE("single type import edge") {
    const auto g = dependency_graph(std::vector<JavaSource>{
        {"a/A.java", "package a;\nimport b.C;\nclass A {}"},
        {"b/C.java", "package b;\nclass C {}"},
    });
    CHECK(g.nodes == std::vector<std::string>{"a/A.java", "b/C.java"});
    CHECK(g.edges == std::vector<Edge>{{"a/A.java", "b/C.java"}});
}

TEST_CASE("wildcard import edges") {
    const auto g = dependency_graph(std::vector<JavaSource>{
        {"A.java", "import b.*;\nclass A {}"},
        {"b/C.java", "package b;\nclass C {}"},
        {"b/D.java", "package b;\nimport b.*;\nclass D {}"},
        {"e/E.java", "package e;\nclass E {}"},
    });
    CHECK(g.edges == std::vector<Edge>{{"A.java", "b/C.java"}, {"A.java", "b/D.java"}, {"b/D.java", "b/C.java"}});
}

TEST_CASE("static and nested imports resolve to the enclosing type") {
    const auto g = dependency_graph(std::vector<JavaSource>{
        {"A.java", "import static b.C.helper;\nimport b.D.Inner;\nclass A {}"},
        {"b/C.java", "package b;\nclass C {}"},
        {"b/D.java", "package b;\nclass D {}"},
    });
    CHECK(g.edges == std::vector<Edge>{{"A.java", "b/C.java"}, {"A.java", "b/D.java"}});
}

TEST_CASE("DOT output for four files and three imports") {
    const std::vector<JavaSource> files{
        {"p/Main.java", "package p;\nimport q.Auth;\nimport q.Store;\nclass Main {}"},
        {"q/Auth.java", "package q;\nimport r.Ldap;\nclass Auth {}"},
        {"q/Store.java", "package q;\nclass Store {}"},
        {"r/Ldap.java", "package r;\nclass Ldap {}"},
    };
    const auto dot = to_dot(dependency_graph(files));
    CHECK(dot ==
          "digraph dependencies {\n"
          "  \"p/Main.java\";\n"
          "  \"q/Auth.java\";\n"
          "  \"q/Store.java\";\n"
          "  \"r/Ldap.java\";\n"
          "  \"p/Main.java\" -> \"q/Auth.java\";\n"
          "  \"p/Main.java\" -> \"q/Store.java\";\n"
          "  \"q/Auth.java\" -> \"r/Ldap.java\";\n"
          "}\n");
    auto reversed = files;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(to_dot(dependency_graph(reversed)) == dot);
}

TEST_CASE("DOT quoting") {
    DependencyGraph g{{"we\"ird\\name.java"}, {}};
    CHECK(to_dot(g) == "digraph dependencies {\n  \"we\\\"ird\\\\name.java\";\n}\n");
}

TEST_CASE("graph of a directory") {
    tacticscan::testing::TempDir dir;
    tacticscan::testing::write_java_repo(dir.path(), "aes", 6, 1, 2);
    const auto g = dependency_graph(dir.path());
    CHECK(g.nodes.size() == 6);
    CHECK(g.edges.size() == 5);
}

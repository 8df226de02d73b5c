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

#include "tacticscan/depgraph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tacticscan/error.hpp"
#include "tacticscan/scanner.hpp"

namespace fs = std::filesystem;

namespace tacticscan {

namespace {

// Source with comments and literals blanked out, split into ';'-terminated
// statements.
std::vector<std::string> statements(std::string_view src) {
    std::vector<std::string> out;
    std::string cur;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const char c = src[i];
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            cur += ' ';
        } else if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            const auto end = src.find("*/", i + 2);
            i = end == std::string_view::npos ? n : end + 2;
            cur += ' ';
        } else if (c == '"' || c == '\'') {
            ++i;
            while (i < n && src[i] != c) i += src[i] == '\\' ? 2 : 1;
            ++i;
            cur += ' ';
        } else if (c == ';' || c == '{') {
            out.push_back(std::move(cur));
            cur.clear();
            if (c == '{') return out;
            ++i;
        } else {
            cur += c;
            ++i;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> words(const std::string& stmt) {
    std::vector<std::string> out;
    std::string w;
    for (char c : stmt) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!w.empty()) out.push_back(std::move(w)), w.clear();
        } else {
            w += c;
        }
    }
    if (!w.empty()) out.push_back(std::move(w));
    return out;
}

std::string join_from(const std::vector<std::string>& ws, std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < ws.size(); ++i) out += ws[i];
    return out;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

}  // namespace

JavaHeader parse_java_header(std::string_view source) {
    JavaHeader header;
    for (const auto& stmt : statements(source)) {
        const auto ws = words(stmt);
        if (ws.empty()) continue;
        // Annotations may precede the package declaration.
        std::size_t k = 0;
        while (k < ws.size() && ws[k].starts_with('@')) ++k;
        if (k == ws.size()) continue;
        if (ws[k] == "package") {
            header.package = join_from(ws, k + 1);
        } else if (ws[k] == "import") {
            JavaImport imp;
            std::size_t from = k + 1;
            if (from < ws.size() && ws[from] == "static") {
                imp.is_static = true;
                ++from;
            }
            imp.name = join_from(ws, from);
            if (imp.name.ends_with(".*")) {
                imp.wildcard = true;
                imp.name.resize(imp.name.size() - 2);
            }
            if (!imp.name.empty()) header.imports.push_back(std::move(imp));
        } else {
            break;
        }
    }
    return header;
}

DependencyGraph dependency_graph(const std::vector<JavaSource>& files) {
    struct Parsed {
        std::string path;
        std::string package;
        std::string fqn;
        std::vector<JavaImport> imports;
    };
    std::vector<Parsed> parsed;
    std::map<std::string, std::vector<std::string>> by_fqn, by_package;
    for (const auto& f : files) {
        auto header = parse_java_header(f.text);
        const auto stem = fs::path(f.path).stem().string();
        Parsed p{f.path, header.package, header.package.empty() ? stem : header.package + "." + stem,
                 std::move(header.imports)};
        by_fqn[p.fqn].push_back(p.path);
        by_package[p.package].push_back(p.path);
        parsed.push_back(std::move(p));
    }

    std::set<std::string> nodes;
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& p : parsed) {
        nodes.insert(p.path);
        auto link = [&](const std::map<std::string, std::vector<std::string>>& index, const std::string& key) {
            const auto it = index.find(key);
            if (it == index.end()) return false;
            for (const auto& target : it->second)
                if (target != p.path) edges.emplace(p.path, target);
            return true;
        };
        for (const auto& imp : p.imports) {
            if (imp.wildcard) {
                // import b.* names a package; import static b.C.* names a type.
                if (!link(by_package, imp.name)) link(by_fqn, imp.name);
                continue;
            }
            if (link(by_fqn, imp.name)) continue;
            // import static b.C.member or import b.C.Inner: try enclosing names.
            auto name = imp.name;
            for (auto dot = name.rfind('.'); dot != std::string::npos; dot = name.rfind('.')) {
                name.resize(dot);
                if (link(by_fqn, name)) break;
            }
        }
    }
    return {{nodes.begin(), nodes.end()}, {edges.begin(), edges.end()}};
}

DependencyGraph dependency_graph(const fs::path& root) {
    std::vector<JavaSource> files;
    for (const auto& path : walk_repo(root)) {
        std::ifstream in(path, std::ios::binary);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        files.push_back({path.lexically_relative(root).generic_string(), buf.str()});
    }
    return dependency_graph(files);
}

std::string to_dot(const DependencyGraph& graph) {
    std::string out = "digraph dependencies {\n";
    for (const auto& n : graph.nodes) out += "  " + dot_quote(n) + ";\n";
    for (const auto& [from, to] : graph.edges) out += "  " + dot_quote(from) + " -> " + dot_quote(to) + ";\n";
    out += "}\n";
    return out;
}

}  // namespace tacticscan

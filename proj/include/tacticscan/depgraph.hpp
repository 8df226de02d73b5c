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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tacticscan {

struct JavaImport {
    std::string name;  ///< fully qualified, without the trailing ".*"
    bool wildcard = false;
    bool is_static = false;
};

struct JavaHeader {
    std::string package;  ///< empty for the default package
    std::vector<JavaImport> imports;
};

/// Reads package and import declarations, ignoring comments and string
/// literals. Stops at the first type declaration.
JavaHeader parse_java_header(std::string_view source);

struct JavaSource {
    std::string path;  ///< node name in the graph
    std::string text;
};

struct DependencyGraph {
    std::vector<std::string> nodes;                           ///< sorted
    std::vector<std::pair<std::string, std::string>> edges;  ///< sorted, unique
};

/// Edge A -> B when A imports B's fully qualified type (package plus file
/// stem) or B's whole package. Self edges are dropped.
DependencyGraph dependency_graph(const std::vector<JavaSource>& files);

/// Reads every file under root found by walk_repo; paths are relative.
DependencyGraph dependency_graph(const std::filesystem::path& root);

std::string to_dot(const DependencyGraph& graph);

}  // namespace tacticscan

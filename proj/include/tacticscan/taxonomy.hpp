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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tacticscan {

enum class NodeKind { Category, Tactic };

struct TaxonomyNode {
    std::string id;
    std::string name;
    NodeKind kind = NodeKind::Category;
    std::optional<std::string> query_keyword;
    bool included = true;
    std::vector<TaxonomyNode> children;
};

/// A tactic leaf may appear under more than one category (LDAP is both an
/// authentication and an authorization control); such leaves share an id.
class TacticTaxonomy {
public:
    explicit TacticTaxonomy(std::vector<TaxonomyNode> roots);

    /// Detect / Prevent / React tree with the twenty studied tactics.
    static const TacticTaxonomy& builtin();

    const std::vector<TaxonomyNode>& roots() const { return roots_; }

    /// Distinct included tactics in tree order.
    std::vector<const TaxonomyNode*> included_tactics() const;

    /// Distinct excluded tactic leaves in tree order.
    std::vector<const TaxonomyNode*> excluded_tactics() const;

    const TaxonomyNode* find(std::string_view id) const;

    /// Query keyword of an included tactic; throws Error if unknown or excluded.
    const std::string& query_keyword(std::string_view tactic_id) const;

    /// Non-root categories whose direct children hold at least two included
    /// tactics. These are the grouping units of the category experiments.
    std::vector<const TaxonomyNode*> experiment_categories() const;

    /// Included tactic ids directly under a category, in tree order.
    std::vector<std::string> tactics_of(const TaxonomyNode& category) const;

private:
    std::vector<TaxonomyNode> roots_;
};

}  // namespace tacticscan

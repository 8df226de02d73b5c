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

#include "tacticscan/taxonomy.hpp"

#include <functional>
#include <set>

#include "tacticscan/error.hpp"

namespace tacticscan {

namespace {

TaxonomyNode category(std::string id, std::string name, std::vector<TaxonomyNode> children) {
    return TaxonomyNode{std::move(id), std::move(name), NodeKind::Category, std::nullopt, true,
                        std::move(children)};
}

TaxonomyNode tactic(std::string id, std::string name, std::string keyword) {
    return TaxonomyNode{std::move(id), std::move(name), NodeKind::Tactic, std::move(keyword), true,
                        {}};
}

TaxonomyNode excluded(std::string id, std::string name) {
    return TaxonomyNode{std::move(id), std::move(name), NodeKind::Tactic, std::nullopt, false, {}};
}

void walk(const TaxonomyNode& node, const std::function<void(const TaxonomyNode&)>& visit) {
    visit(node);
    for (const auto& child : node.children) walk(child, visit);
}

void validate(const TaxonomyNode& node) {
    if (node.kind == NodeKind::Tactic) {
        if (!node.children.empty()) throw Error("tactic node '" + node.id + "' has children");
        if (node.included && (!node.query_keyword || node.query_keyword->empty()))
            throw Error("included tactic '" + node.id + "' has no query keyword");
    }
    for (const auto& child : node.children) validate(child);
}

}  // namespace

TacticTaxonomy::TacticTaxonomy(std::vector<TaxonomyNode> roots) : roots_(std::move(roots)) {
    const std::vector<std::string> expected{"detect", "prevent", "react"};
    if (roots_.size() != expected.size()) throw Error("taxonomy must have exactly three roots");
    for (std::size_t i = 0; i < roots_.size(); ++i) {
        if (roots_[i].id != expected[i] || roots_[i].kind != NodeKind::Category)
            throw Error("taxonomy roots must be detect, prevent, react");
        validate(roots_[i]);
    }
}

const TacticTaxonomy& TacticTaxonomy::builtin() {
    static const TacticTaxonomy taxonomy(std::vector<TaxonomyNode>{
        category("detect", "Detect",
                 {
                     excluded("intrusion", "Intrusion"),
                     category("data_integrity", "Data Integrity",
                              {
                                  tactic("sha256", "SHA256", "sha256"),
                                  tactic("sha512", "SHA512", "sha512"),
                                  tactic("md5", "MD5", "md5"),
                              }),
                     excluded("dos", "Denial of Service"),
                 }),
        category("prevent", "Prevent",
                 {
                     category("authenticate", "Authenticate",
                              {
                                  tactic("token_authentication", "Token Authentication",
                                         "token authentication"),
                                  tactic("digest_authentication", "Digest Authentication",
                                         "digest authentication"),
                                  tactic("kerberos", "Kerberos", "kerberos"),
                                  tactic("ldap", "LDAP", "ldap"),
                                  excluded("pap", "PAP"),
                                  excluded("chap", "CHAP"),
                                  excluded("eap", "EAP"),
                              }),
                     category("encrypt_decrypt", "Encrypt / Decrypt",
                              {
                                  tactic("aes", "AES", "aes"),
                                  tactic("blowfish", "Blowfish", "blowfish"),
                                  tactic("rsa", "RSA", "rsa"),
                                  tactic("3des", "3DES", "3des"),
                              }),
                     category("authorize", "Authorize",
                              {
                                  tactic("ldap", "LDAP", "ldap"),
                                  tactic("oauth2", "OAuth 2.0", "oauth2"),
                                  tactic("acl", "Access Control List", "acl"),
                                  excluded("privilege_management", "Privilege Management"),
                                  tactic("session_management", "Session Management",
                                         "session management"),
                                  excluded("revoke_access", "Revoke Access/Privilege"),
                              }),
                     tactic("input_validation", "Input Validation", "validation interceptor"),
                     category("secure_communication", "Secure Communication",
                              {
                                  tactic("sftp", "SFTP", "sftp"),
                                  tactic("tls", "TLS", "tls"),
                                  tactic("vpn", "VPN", "vpn"),
                                  tactic("ssh", "SSH", "ssh"),
                              }),
                 }),
        category("react", "React",
                 {
                     tactic("audit_trail", "Audit Trail", "audit trail"),
                     excluded("block", "Block"),
                     excluded("isolate", "Isolate"),
                     excluded("restore", "Restore"),
                 }),
    });
    return taxonomy;
}

std::vector<const TaxonomyNode*> TacticTaxonomy::included_tactics() const {
    std::vector<const TaxonomyNode*> out;
    std::set<std::string> seen;
    for (const auto& root : roots_) {
        walk(root, [&](const TaxonomyNode& n) {
            if (n.kind == NodeKind::Tactic && n.included && seen.insert(n.id).second)
                out.push_back(&n);
        });
    }
    return out;
}

std::vector<const TaxonomyNode*> TacticTaxonomy::excluded_tactics() const {
    std::vector<const TaxonomyNode*> out;
    std::set<std::string> seen;
    for (const auto& root : roots_) {
        walk(root, [&](const TaxonomyNode& n) {
            if (n.kind == NodeKind::Tactic && !n.included && seen.insert(n.id).second)
                out.push_back(&n);
        });
    }
    return out;
}

const TaxonomyNode* TacticTaxonomy::find(std::string_view id) const {
    const TaxonomyNode* found = nullptr;
    for (const auto& root : roots_) {
        walk(root, [&](const TaxonomyNode& n) {
            if (!found && n.id == id) found = &n;
        });
    }
    return found;
}

const std::string& TacticTaxonomy::query_keyword(std::string_view tactic_id) const {
    const auto* node = find(tactic_id);
    if (!node || node->kind != NodeKind::Tactic)
        throw Error("unknown tactic '" + std::string(tactic_id) + "'");
    if (!node->included) throw Error("tactic '" + std::string(tactic_id) + "' is excluded");
    return *node->query_keyword;
}

std::vector<const TaxonomyNode*> TacticTaxonomy::experiment_categories() const {
    std::vector<const TaxonomyNode*> out;
    for (const auto& root : roots_) {
        walk(root, [&](const TaxonomyNode& n) {
            if (&n == &root || n.kind != NodeKind::Category) return;
            if (tactics_of(n).size() >= 2) out.push_back(&n);
        });
    }
    return out;
}

std::vector<std::string> TacticTaxonomy::tactics_of(const TaxonomyNode& cat) const {
    std::vector<std::string> ids;
    for (const auto& child : cat.children)
        if (child.kind == NodeKind::Tactic && child.included) ids.push_back(child.id);
    return ids;
}

}  // namespace tacticscan

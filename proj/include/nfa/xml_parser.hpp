#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfa/dewey.hpp"
#include "nfa/tokenizer.hpp"

namespace nfa {

// Maps a namespace URI to its single-token semantic label.
using NamespaceLabelMap = std::map<std::string, std::string>;

struct NamespaceBinding {
    std::string prefix;
    std::string uri;
    std::string semantic_label; // non-empty single lowercase token

    friend bool operator==(const NamespaceBinding&, const NamespaceBinding&) = default;
};

struct ElementNode {
    DeweyId dewey;
    std::string tag; // local name, without prefix
    std::optional<NamespaceBinding> binding;
    std::vector<std::string> direct_tokens; // element text only, attribute values ignored
    std::vector<ElementNode> children;
};

// Returns ns_map[uri] when present, otherwise the last non-empty path
// segment of the URI lowercased and tokenized. Throws EmptyLabel when the
// fallback yields no alphanumeric token.
std::string resolve_semantic_label(const std::string& uri, const NamespaceLabelMap& ns_map);

// Parses a well-formed XML 1.0 document into a Dewey-labeled element tree.
// Only element text contributes tokens; attributes and comments are skipped.
// Throws MalformedXml (with line:column position) and UnresolvablePrefix.
ElementNode parse_document(std::string_view xml_text, const NamespaceLabelMap& ns_map,
                           const StopwordSet& stopwords);

inline ElementNode parse_document(std::string_view xml_text, const NamespaceLabelMap& ns_map) {
    return parse_document(xml_text, ns_map, default_stopwords());
}

// Multiset union of direct_tokens over the node and all of its descendants.
std::map<std::string, int> subtree_terms(const ElementNode& node);

std::size_t count_elements(const ElementNode& node);

// Calls f(node) for every element in document order.
template <class F>
void visit_document_order(const ElementNode& node, F&& f) {
    f(node);
    for (const ElementNode& child : node.children) {
        visit_document_order(child, f);
    }
}

// One `uri<TAB>label` pair per line; '#' starts a comment.
NamespaceLabelMap load_namespace_map(const std::string& path);

} // namespace nfa

#pragma once

#include <compare>
#include <string>
#include <vector>

namespace nfa {

// Hierarchical element label. The document root is [0]; the i-th child of a
// node (1-based among element children) appends i to its parent's label.
// Ancestor tests reduce to component-prefix checks and the natural ordering
// (lexicographic by components, shorter prefix first on ties) equals
// document order.
class DeweyId {
public:
    DeweyId() = default;
    explicit DeweyId(std::vector<int> components);

    static DeweyId root();
    // Parses a dotted label such as "0.1.2". Throws DomainError on anything
    // that is not a valid label.
    static DeweyId parse(const std::string& dotted);

    DeweyId child(int ordinal) const;
    DeweyId parent() const; // throws DomainError when called on the root

    bool valid() const noexcept { return !components_.empty(); }
    bool is_root() const noexcept { return components_.size() == 1; }
    std::size_t depth() const noexcept { return components_.size(); }
    const std::vector<int>& components() const noexcept { return components_; }

    std::string str() const;

    bool is_strict_ancestor_of(const DeweyId& other) const;

    friend bool operator==(const DeweyId& a, const DeweyId& b) = default;
    friend std::strong_ordering operator<=>(const DeweyId& a, const DeweyId& b) {
        return a.components_ <=> b.components_;
    }

private:
    std::vector<int> components_;
};

} // namespace nfa

#pragma once

#include <map>
#include <string>
#include <utility>

#include "nfa/semantic_index.hpp"

namespace nfa {

// Answers correlation(label, keyword) queries. Either backed by the concept
// space (default) or by an explicit table of pair values. Total function:
// unknown pairs and out-of-vocabulary terms return 0. Values always lie in
// [-1, 1] and the two arguments commute.
class CorrelationProvider {
public:
    using Table = std::map<std::pair<std::string, std::string>, double>;

    static CorrelationProvider from_table(Table table);
    // The vocabulary and space must outlive the provider.
    static CorrelationProvider from_concept_space(const Vocabulary& vocab, const ConceptSpace& space);

    double operator()(const std::string& label, const std::string& keyword) const;

    bool table_backed() const noexcept { return table_backed_; }

private:
    CorrelationProvider() = default;

    bool table_backed_ = false;
    Table table_;
    const Vocabulary* vocab_ = nullptr;
    const ConceptSpace* space_ = nullptr;
};

inline double prefix_correlation(const CorrelationProvider& provider, const std::string& label,
                                 const std::string& keyword) {
    return provider(label, keyword);
}

// One `label<TAB>keyword<TAB>value` per line; '#' starts a comment. Values
// outside [-1, 1] are rejected.
CorrelationProvider::Table load_correlation_table(const std::string& path);

} // namespace nfa

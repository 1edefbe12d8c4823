#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nfa/correlation.hpp"
#include "nfa/index.hpp"
#include "nfa/scoring.hpp"

namespace nfa {

enum class RelevanceClass {
    high,       // lambda1 <= corr <= 1
    common,     // lambda2 <= corr < lambda1
    irrelevant, // -1 <= corr < lambda2
};

struct QueryConfig {
    double lambda1 = 0.9;
    double lambda2 = 0.6;
    double a1 = 0.9;
    double a2 = 0.1;
    int top_k = 20;
    int svd_rank = 2; // used at build time
    bool filter_enabled = true;

    // Throws ConfigError naming the violated constraint.
    void validate() const;
};

RelevanceClass classify_relevance(double corr, double lambda1, double lambda2);
inline RelevanceClass classify_relevance(double corr, const QueryConfig& cfg) {
    return classify_relevance(corr, cfg.lambda1, cfg.lambda2);
}

struct Candidate {
    std::int32_t element = 0;
    double correlation = 0.0; // mean over High/Common query terms for the element's label
};

// Set A: an element joins iff its namespace label has High or Common
// relevance to at least one query term; unlabeled elements stay out. With
// the filter disabled every element joins with correlation 0.
std::vector<Candidate> build_candidate_set(const IndexArtifact& index,
                                           const std::vector<std::string>& query_terms,
                                           const QueryConfig& cfg, const CorrelationProvider& provider,
                                           ExecMode mode = default_exec_mode());

struct ScoredElement {
    DeweyId dewey;
    std::int32_t doc = 0;
    std::int32_t label = -1;
    double value = 0.0;       // text-match component
    double correlation = 0.0; // namespace component
    double final_score = 0.0; // a1 * correlation + a2 * value
};

double final_score(double value, double correlation, double a1, double a2);

// Descending final score; ties go to the shallower Dewey id, then
// lexicographic Dewey order, then document id.
void sort_by_final_score(std::vector<ScoredElement>& results);

// Applies the two-phase overlap rule within each document and re-sorts by
// final score. Input holds at most one entry per element.
//  Phase 1 (value > 0): within every ancestor-descendant chain only the
//  element with the maximum value survives; ties go to the shallower one.
//  Phase 2 (value = 0): each maximal subtree of zero-value elements keeps
//  only its shallowest representative, even underneath a retained phase-1
//  element.
std::vector<ScoredElement> merge_overlaps(std::vector<ScoredElement> results);

// Scores and sorts candidates without merging.
std::vector<ScoredElement> final_rank(std::vector<ScoredElement> candidates, double a1, double a2);
std::vector<ScoredElement> final_rank(std::vector<ScoredElement> candidates, const QueryConfig& cfg);

struct QueryOutcome {
    std::vector<ScoredElement> results; // top K, merged, score > 0
    std::size_t candidate_count = 0;    // |A|
};

// Full pipeline: tokenize, filter, accumulate, score, merge, rank, cut to
// K. Deterministic for identical inputs. Throws EmptyQueryAfterStopwords.
QueryOutcome nfa_query_detailed(const IndexArtifact& index, const std::string& query,
                                const QueryConfig& cfg, const CorrelationProvider& provider,
                                ExecMode mode = default_exec_mode());

std::vector<ScoredElement> nfa_query(const IndexArtifact& index, const std::string& query,
                                     const QueryConfig& cfg, const CorrelationProvider& provider,
                                     ExecMode mode = default_exec_mode());

// Concept-space provider convenience overload.
std::vector<ScoredElement> nfa_query(const IndexArtifact& index, const std::string& query,
                                     const QueryConfig& cfg, ExecMode mode = default_exec_mode());

} // namespace nfa

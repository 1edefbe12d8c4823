#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nfa/index.hpp"
#include "nfa/parallel.hpp"

namespace nfa {

// ief = log10(N / ef). Throws DomainError when ef = 0 or ef > N.
double compute_ief(std::int64_t total_elements, std::int64_t element_frequency);

// Element-side weight: 0 when tf = 0, else (1 + log10 tf) * ief.
double weight_element(std::int64_t tf, double ief);

// Query-side weight: (1 + log10 tf_q) * ief. Throws DomainError when tf_q = 0.
double weight_query(std::int64_t tf_q, double ief);

struct QueryVector {
    std::vector<std::string> terms;        // tokenized keywords, order preserved
    std::map<std::string, int> tf_q;       // term -> count in the query
    std::map<std::string, double> weights; // term -> W_{t,q}, vocabulary terms only
    // Compact form used by the accumulation kernel: (term id, W_{t,q}) for
    // distinct in-vocabulary terms with ef > 0, in first-appearance order.
    std::vector<std::pair<std::int32_t, double>> weighted_ids;
};

QueryVector make_query_vector(const std::vector<std::string>& tokens, const IndexArtifact& index);

// value[e] = sum over query terms of W_{t,e} * W_{t,q}, divided by
// length[e]; elements with zero length get 0. The query-norm divisor is
// omitted (it is constant per query and cannot change the ranking). Returns
// one value per entry of `candidates`, in order.
std::vector<double> accumulate_values(const IndexArtifact& index,
                                      std::span<const std::int32_t> candidates,
                                      const QueryVector& query, ExecMode mode = default_exec_mode());

} // namespace nfa

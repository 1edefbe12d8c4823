#include "nfa/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "nfa/errors.hpp"

namespace nfa {

double compute_ief(std::int64_t total_elements, std::int64_t element_frequency) {
    if (total_elements < 1) {
        raise(ErrorKind::domain_error, "element count must be at least 1");
    }
    if (element_frequency < 1 || element_frequency > total_elements) {
        raise(ErrorKind::domain_error,
              "element frequency " + std::to_string(element_frequency) + " outside [1, " +
                  std::to_string(total_elements) + "]");
    }
    return std::log10(static_cast<double>(total_elements) / static_cast<double>(element_frequency));
}

double weight_element(std::int64_t tf, double ief) {
    if (tf <= 0) {
        return 0.0;
    }
    return (1.0 + std::log10(static_cast<double>(tf))) * ief;
}

double weight_query(std::int64_t tf_q, double ief) {
    if (tf_q < 1) {
        raise(ErrorKind::domain_error, "query term frequency must be at least 1");
    }
    return (1.0 + std::log10(static_cast<double>(tf_q))) * ief;
}

QueryVector make_query_vector(const std::vector<std::string>& tokens, const IndexArtifact& index) {
    QueryVector q;
    q.terms = tokens;
    for (const std::string& term : tokens) {
        ++q.tf_q[term];
    }
    std::vector<std::string> seen;
    for (const std::string& term : tokens) {
        if (std::find(seen.begin(), seen.end(), term) != seen.end()) {
            continue;
        }
        seen.push_back(term);
        int id = index.vocab.find(term);
        if (id < 0) {
            continue; // out-of-vocabulary query terms contribute 0
        }
        double ief = index.ief[static_cast<std::size_t>(id)];
        if (index.stats.element_frequency[static_cast<std::size_t>(id)] == 0) {
            continue; // label-only vocabulary entries never occur in text
        }
        double w = weight_query(q.tf_q[term], ief);
        q.weights[term] = w;
        q.weighted_ids.emplace_back(id, w);
    }
    // Canonical accumulation order makes value[e] exactly invariant under
    // query-term reordering.
    std::sort(q.weighted_ids.begin(), q.weighted_ids.end());
    return q;
}

std::vector<double> accumulate_values(const IndexArtifact& index,
                                      std::span<const std::int32_t> candidates,
                                      const QueryVector& query, ExecMode mode) {
    std::vector<double> values(candidates.size(), 0.0);
    parallel_for(candidates.size(), mode, [&](std::size_t i) {
        const ElementRecord& rec = index.elements[static_cast<std::size_t>(candidates[i])];
        if (rec.length == 0.0) {
            return;
        }
        double acc = 0.0;
        for (const auto& [term_id, wq] : query.weighted_ids) {
            std::int32_t tf = rec.tf(term_id);
            if (tf > 0) {
                acc += weight_element(tf, index.ief[static_cast<std::size_t>(term_id)]) * wq;
            }
        }
        values[i] = acc / rec.length;
    });
    return values;
}

} // namespace nfa

#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nfa/engine.hpp"

namespace nfa {

// A ranked result or relevance judgment identified by (document name,
// dotted Dewey id).
using ResultKey = std::pair<std::string, std::string>;
using RelevantSet = std::set<ResultKey>;

struct Qrels {
    std::map<std::string, RelevantSet> by_query;
};

struct EvalQuery {
    std::string id;
    std::string text;
};

// precision = |top-K intersect relevant| / min(K, |ranked|)
// recall    = |top-K intersect relevant| / |relevant|
// Each is 0 when its denominator is 0.
std::pair<double, double> precision_recall(const std::vector<ResultKey>& ranked,
                                           const RelevantSet& relevant, int cutoff);

struct QueryEval {
    std::string id;
    std::string text;
    bool empty_query = false; // every term was a stopword
    double precision = 0.0;
    double recall = 0.0;
    std::size_t candidates_filtered = 0;
    std::size_t candidates_unfiltered = 0;
    double median_ms_filtered = 0.0;
    double median_ms_unfiltered = 0.0;
    std::size_t results_filtered = 0;
};

struct EvalReport {
    int repetitions = 0;
    std::vector<QueryEval> queries;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
};

// Runs every query in both filter modes `repetitions` times (sequentially,
// to keep timings comparable), records median wall time and |A| per mode,
// and verifies that repeated runs return identical top-K lists. Precision
// and recall come from the filtered run when qrels are supplied.
EvalReport timing_compare(const IndexArtifact& index, const std::vector<EvalQuery>& queries,
                          const QueryConfig& cfg, int repetitions, const CorrelationProvider& provider,
                          const Qrels* qrels = nullptr);

// `query-id<TAB>query text` per line; '#' starts a comment.
std::vector<EvalQuery> load_queries(const std::string& path);
// `query-id<TAB>doc-id<TAB>dewey` per line; '#' starts a comment.
Qrels load_qrels(const std::string& path);

void write_report(const EvalReport& report, std::ostream& out);

} // namespace nfa

#include "nfa/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nfa/errors.hpp"
#include "nfa/tokenizer.hpp"

namespace nfa {

void QueryConfig::validate() const {
    if (!(lambda2 >= 0.0 && lambda2 <= lambda1 && lambda1 <= 1.0)) {
        raise(ErrorKind::config_error, "thresholds must satisfy 0 <= lambda2 <= lambda1 <= 1");
    }
    if (std::abs(a1 + a2 - 1.0) > 1e-9) {
        raise(ErrorKind::config_error, "weights must satisfy a1 + a2 = 1");
    }
    if (!(a2 >= 0.0 && a2 <= a1 && a1 <= 1.0)) {
        raise(ErrorKind::config_error, "weights must satisfy 0 <= a2 <= a1 <= 1");
    }
    if (top_k < 1) {
        raise(ErrorKind::config_error, "result cutoff K must be at least 1");
    }
    if (svd_rank < 1) {
        raise(ErrorKind::config_error, "SVD rank k must be at least 1");
    }
}

RelevanceClass classify_relevance(double corr, double lambda1, double lambda2) {
    if (corr >= lambda1) {
        return RelevanceClass::high;
    }
    if (corr >= lambda2) {
        return RelevanceClass::common;
    }
    return RelevanceClass::irrelevant;
}

std::vector<Candidate> build_candidate_set(const IndexArtifact& index,
                                           const std::vector<std::string>& query_terms,
                                           const QueryConfig& cfg, const CorrelationProvider& provider,
                                           ExecMode mode) {
    std::vector<Candidate> out;
    if (!cfg.filter_enabled) {
        out.reserve(index.elements.size());
        for (std::size_t e = 0; e < index.elements.size(); ++e) {
            out.push_back({static_cast<std::int32_t>(e), 0.0});
        }
        return out;
    }

    std::vector<std::string> distinct;
    for (const std::string& term : query_terms) {
        if (std::find(distinct.begin(), distinct.end(), term) == distinct.end()) {
            distinct.push_back(term);
        }
    }
    // Canonical order so the mean does not depend on query-term order.
    std::sort(distinct.begin(), distinct.end());

    struct LabelDecision {
        bool admitted = false;
        double correlation = 0.0;
    };
    std::vector<LabelDecision> decisions(index.labels.size());
    // Too few labels to pay a fork-join; the result is identical either way.
    if (index.labels.size() < 64) {
        mode = ExecMode::serial;
    }
    parallel_for(index.labels.size(), mode, [&](std::size_t label_id) {
        double sum = 0.0;
        int passing = 0;
        for (const std::string& term : distinct) {
            double corr = provider(index.labels[label_id], term);
            if (classify_relevance(corr, cfg) != RelevanceClass::irrelevant) {
                sum += corr;
                ++passing;
            }
        }
        if (passing > 0) {
            decisions[label_id] = {true, sum / static_cast<double>(passing)};
        }
    });

    for (std::size_t e = 0; e < index.elements.size(); ++e) {
        const ElementRecord& rec = index.elements[e];
        if (rec.label < 0) {
            continue; // unlabeled elements never pass the filter
        }
        const LabelDecision& decision = decisions[static_cast<std::size_t>(rec.label)];
        if (decision.admitted) {
            out.push_back({static_cast<std::int32_t>(e), decision.correlation});
        }
    }
    return out;
}

double final_score(double value, double correlation, double a1, double a2) {
    return a1 * correlation + a2 * value;
}

void sort_by_final_score(std::vector<ScoredElement>& results) {
    std::sort(results.begin(), results.end(), [](const ScoredElement& a, const ScoredElement& b) {
        if (a.final_score != b.final_score) {
            return a.final_score > b.final_score;
        }
        if (a.dewey.depth() != b.dewey.depth()) {
            return a.dewey.depth() < b.dewey.depth();
        }
        if (a.dewey != b.dewey) {
            return a.dewey < b.dewey;
        }
        return a.doc < b.doc;
    });
}

namespace {

// Phase-1 rule over one document's text-matched entries, which arrive
// sorted by Dewey id (document order): an entry survives iff its value
// strictly beats every ancestor in the list and is at least every
// descendant's value.
void mark_phase1_keepers(const std::vector<ScoredElement>& items, const std::vector<std::size_t>& sorted,
                         std::vector<char>& keep) {
    struct Frame {
        std::size_t idx;
        double anc_max;  // max value over list-ancestors
        double desc_max; // max value over list-descendants, filled on pop
    };
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<Frame> stack;
    auto pop_and_mark = [&]() {
        Frame frame = stack.back();
        stack.pop_back();
        const ScoredElement& e = items[frame.idx];
        keep[frame.idx] = (e.value > frame.anc_max && e.value >= frame.desc_max) ? 1 : 0;
        if (!stack.empty()) {
            stack.back().desc_max = std::max(stack.back().desc_max, std::max(e.value, frame.desc_max));
        }
    };
    for (std::size_t idx : sorted) {
        while (!stack.empty() &&
               !items[stack.back().idx].dewey.is_strict_ancestor_of(items[idx].dewey)) {
            pop_and_mark();
        }
        double anc_max = stack.empty() ? kNegInf
                                       : std::max(stack.back().anc_max, items[stack.back().idx].value);
        stack.push_back({idx, anc_max, kNegInf});
    }
    while (!stack.empty()) {
        pop_and_mark();
    }
}

// Phase-2 rule: a zero-value entry survives iff no zero-value entry in the
// list is a strict ancestor of it.
void mark_phase2_keepers(const std::vector<ScoredElement>& items, const std::vector<std::size_t>& sorted,
                         std::vector<char>& keep) {
    std::vector<std::size_t> stack;
    for (std::size_t idx : sorted) {
        while (!stack.empty() && !items[stack.back()].dewey.is_strict_ancestor_of(items[idx].dewey)) {
            stack.pop_back();
        }
        if (stack.empty()) {
            keep[idx] = 1;
        }
        stack.push_back(idx);
    }
}

} // namespace

std::vector<ScoredElement> merge_overlaps(std::vector<ScoredElement> results) {
    std::vector<char> keep(results.size(), 0);

    std::vector<std::int32_t> docs;
    for (const ScoredElement& e : results) {
        if (std::find(docs.begin(), docs.end(), e.doc) == docs.end()) {
            docs.push_back(e.doc);
        }
    }
    for (std::int32_t doc : docs) {
        std::vector<std::size_t> text_matched;
        std::vector<std::size_t> zero_value;
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].doc != doc) {
                continue;
            }
            (results[i].value > 0.0 ? text_matched : zero_value).push_back(i);
        }
        auto by_dewey = [&](std::size_t a, std::size_t b) { return results[a].dewey < results[b].dewey; };
        std::sort(text_matched.begin(), text_matched.end(), by_dewey);
        std::sort(zero_value.begin(), zero_value.end(), by_dewey);
        mark_phase1_keepers(results, text_matched, keep);
        mark_phase2_keepers(results, zero_value, keep);
    }

    std::vector<ScoredElement> merged;
    merged.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (keep[i]) {
            merged.push_back(std::move(results[i]));
        }
    }
    sort_by_final_score(merged);
    return merged;
}

std::vector<ScoredElement> final_rank(std::vector<ScoredElement> candidates, double a1, double a2) {
    for (ScoredElement& e : candidates) {
        e.final_score = final_score(e.value, e.correlation, a1, a2);
    }
    sort_by_final_score(candidates);
    return candidates;
}

std::vector<ScoredElement> final_rank(std::vector<ScoredElement> candidates, const QueryConfig& cfg) {
    cfg.validate();
    return final_rank(std::move(candidates), cfg.a1, cfg.a2);
}

QueryOutcome nfa_query_detailed(const IndexArtifact& index, const std::string& query,
                                const QueryConfig& cfg, const CorrelationProvider& provider,
                                ExecMode mode) {
    cfg.validate();
    std::vector<std::string> tokens = tokenize(query);
    if (tokens.empty()) {
        raise(ErrorKind::empty_query, "query '" + query + "' has no terms after stopword removal");
    }

    std::vector<Candidate> candidates = build_candidate_set(index, tokens, cfg, provider, mode);
    std::vector<std::int32_t> candidate_ids;
    candidate_ids.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        candidate_ids.push_back(c.element);
    }

    QueryVector qv = make_query_vector(tokens, index);
    std::vector<double> values = accumulate_values(index, candidate_ids, qv, mode);

    std::vector<ScoredElement> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const ElementRecord& rec = index.elements[static_cast<std::size_t>(candidates[i].element)];
        ScoredElement e;
        e.dewey = rec.dewey;
        e.doc = rec.doc;
        e.label = rec.label;
        e.value = values[i];
        e.correlation = candidates[i].correlation;
        e.final_score = final_score(e.value, e.correlation, cfg.a1, cfg.a2);
        scored.push_back(std::move(e));
    }

    std::vector<ScoredElement> merged = merge_overlaps(std::move(scored));
    std::erase_if(merged, [](const ScoredElement& e) { return !(e.final_score > 0.0); });
    if (merged.size() > static_cast<std::size_t>(cfg.top_k)) {
        merged.resize(static_cast<std::size_t>(cfg.top_k));
    }
    return {std::move(merged), candidates.size()};
}

std::vector<ScoredElement> nfa_query(const IndexArtifact& index, const std::string& query,
                                     const QueryConfig& cfg, const CorrelationProvider& provider,
                                     ExecMode mode) {
    return nfa_query_detailed(index, query, cfg, provider, mode).results;
}

std::vector<ScoredElement> nfa_query(const IndexArtifact& index, const std::string& query,
                                     const QueryConfig& cfg, ExecMode mode) {
    CorrelationProvider provider = index.concept_provider();
    return nfa_query(index, query, cfg, provider, mode);
}

} // namespace nfa

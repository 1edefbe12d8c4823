#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <thread>

#include "nfa/engine.hpp"
#include "nfa/errors.hpp"
#include "support/fixtures.hpp"
#include "support/synth.hpp"

using namespace nfa;

namespace {

QueryConfig scenario_cfg(double l1, double l2) {
    QueryConfig cfg;
    cfg.lambda1 = l1;
    cfg.lambda2 = l2;
    return cfg;
}

ScoredElement scored(const std::string& dewey, double value, double correlation = 0.0,
                     double final = 0.0, std::int32_t doc = 0) {
    ScoredElement e;
    e.dewey = DeweyId::parse(dewey);
    e.doc = doc;
    e.value = value;
    e.correlation = correlation;
    e.final_score = final;
    return e;
}

std::vector<std::string> deweys(const std::vector<ScoredElement>& list) {
    std::vector<std::string> out;
    for (const ScoredElement& e : list) {
        out.push_back(e.dewey.str());
    }
    return out;
}

} // namespace

TEST_CASE("classification uses half-open boundaries") {
    QueryConfig cfg = scenario_cfg(0.8, 0.6);
    CHECK(classify_relevance(0.9984, cfg) == RelevanceClass::high);
    CHECK(classify_relevance(0.6558, cfg) == RelevanceClass::common);
    CHECK(classify_relevance(0.3168, cfg) == RelevanceClass::irrelevant);
    // Boundary values land in the upper class.
    CHECK(classify_relevance(0.8, cfg) == RelevanceClass::high);
    CHECK(classify_relevance(0.6, cfg) == RelevanceClass::common);
    CHECK(classify_relevance(1.0, cfg) == RelevanceClass::high);
    CHECK(classify_relevance(-1.0, cfg) == RelevanceClass::irrelevant);
    // Any lambda pair keeps the same boundary semantics.
    CHECK(classify_relevance(0.25, scenario_cfg(0.25, 0.25)) == RelevanceClass::high);
    CHECK(classify_relevance(0.2, scenario_cfg(0.25, 0.2)) == RelevanceClass::common);
}

TEST_CASE("query config constraints are rejected at construction") {
    auto expect_message = [](QueryConfig cfg, const char* needle) {
        try {
            cfg.validate();
            FAIL_CHECK("expected ConfigError mentioning: " << needle);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::config_error);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    QueryConfig bad_sum;
    bad_sum.a1 = 0.5;
    bad_sum.a2 = 0.6;
    expect_message(bad_sum, "a1 + a2");
    QueryConfig swapped;
    swapped.a1 = 0.4;
    swapped.a2 = 0.6;
    expect_message(swapped, "a2 <= a1");
    QueryConfig lambdas;
    lambdas.lambda1 = 0.3;
    lambdas.lambda2 = 0.6;
    expect_message(lambdas, "lambda2 <= lambda1");
    QueryConfig cutoff;
    cutoff.top_k = 0;
    expect_message(cutoff, "K");
    CHECK_NOTHROW(QueryConfig{}.validate());
}

TEST_CASE("candidate set on the record fixture, strict thresholds") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    std::vector<std::string> query = {"data", "space", "algorithm"};

    std::vector<Candidate> a = build_candidate_set(index, query, scenario_cfg(0.8, 0.6), provider);
    CHECK(a.size() == 8); // every computer-labeled element, no joy, no bare root
    for (const Candidate& c : a) {
        const ElementRecord& rec = index.elements[static_cast<std::size_t>(c.element)];
        CHECK(*index.label_of(rec) == "computer");
        // mean(0.9984, 0.6558) with the irrelevant "space" value excluded
        CHECK(std::abs(c.correlation - 0.8271) < 5e-5);
    }
}

TEST_CASE("candidate set on the record fixture, relaxed thresholds") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    std::vector<std::string> query = {"data", "space", "algorithm"};

    std::vector<Candidate> a = build_candidate_set(index, query, scenario_cfg(0.6, 0.3), provider);
    CHECK(a.size() == 12); // only the unlabeled root stays out
    bool saw_joy = false;
    for (const Candidate& c : a) {
        const ElementRecord& rec = index.elements[static_cast<std::size_t>(c.element)];
        if (*index.label_of(rec) == "joy") {
            saw_joy = true;
            CHECK(std::abs(c.correlation - 0.3470) < 5e-5); // only "space" passes
        } else {
            CHECK(std::abs(c.correlation - (0.9984 + 0.3168 + 0.6558) / 3.0) < 5e-5);
        }
    }
    CHECK(saw_joy);
}

TEST_CASE("candidate set edge cases") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    CHECK(build_candidate_set(index, {}, scenario_cfg(0.8, 0.6), provider).empty());

    QueryConfig off = scenario_cfg(0.8, 0.6);
    off.filter_enabled = false;
    std::vector<Candidate> all = build_candidate_set(index, {"data"}, off, provider);
    CHECK(all.size() == 13);
    for (const Candidate& c : all) {
        CHECK(c.correlation == 0.0);
    }
}

TEST_CASE("filtered candidates are always a subset of unfiltered") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    QueryConfig on = scenario_cfg(0.6, 0.3);
    QueryConfig off = on;
    off.filter_enabled = false;
    std::vector<std::string> query = {"data", "space"};
    std::set<std::int32_t> filtered, unfiltered;
    for (const Candidate& c : build_candidate_set(index, query, on, provider)) {
        filtered.insert(c.element);
    }
    for (const Candidate& c : build_candidate_set(index, query, off, provider)) {
        unfiltered.insert(c.element);
    }
    CHECK(std::includes(unfiltered.begin(), unfiltered.end(), filtered.begin(), filtered.end()));
}

TEST_CASE("lowering lambda2 never removes candidates") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    std::vector<std::string> query = {"data", "space", "algorithm"};
    std::set<std::int32_t> previous;
    for (double lambda2 : {0.65, 0.5, 0.34, 0.2, 0.0}) {
        std::set<std::int32_t> current;
        for (const Candidate& c : build_candidate_set(index, query, scenario_cfg(0.8, lambda2), provider)) {
            current.insert(c.element);
        }
        CHECK(std::includes(current.begin(), current.end(), previous.begin(), previous.end()));
        previous = std::move(current);
    }
}

TEST_CASE("merge keeps the strongest element of every chain") {
    // Five entries ranked by value; two chains: {0.2.1, 0.2} and
    // {0.1, 0.1.1, 0.1.2}.
    std::vector<ScoredElement> ranked = {
        scored("0.2.1", 5.0, 0.0, 5.0), scored("0.2", 4.0, 0.0, 4.0), scored("0.1", 3.0, 0.0, 3.0),
        scored("0.1.1", 2.0, 0.0, 2.0), scored("0.1.2", 1.0, 0.0, 1.0),
    };
    std::vector<ScoredElement> merged = merge_overlaps(ranked);
    CHECK(deweys(merged) == std::vector<std::string>{"0.2.1", "0.1"});
}

TEST_CASE("merge keeps zero-value subtree representatives") {
    // The worked result list: 0.1 dominates its text-matched descendants;
    // the token-less subtree under 0.1.1 survives via its shallowest node.
    double corr = 0.8271;
    auto with_final = [&](const std::string& d, double value) {
        return scored(d, value, corr, final_score(value, corr, 0.9, 0.1));
    };
    std::vector<ScoredElement> ranked = {
        with_final("0.1", 1.6160),    with_final("0.1.4", 1.5779),  with_final("0.1.3", 1.5779),
        with_final("0.1.2", 1.4145),  with_final("0.1.3.1", 1.4145), with_final("0.1.3.2", 1.0),
        with_final("0.1.1", 0.0),     with_final("0.1.1.1", 0.0),   with_final("0.1.1.2", 0.0),
    };
    std::vector<ScoredElement> merged = merge_overlaps(ranked);
    REQUIRE(deweys(merged) == std::vector<std::string>{"0.1", "0.1.1"});
    CHECK(std::abs(merged[0].final_score - 0.9060) < 5e-4);
    CHECK(std::abs(merged[1].final_score - 0.7444) < 5e-4);
}

TEST_CASE("merge leaves chain-free lists unchanged") {
    std::vector<ScoredElement> ranked = {
        scored("0.1", 3.0, 0.0, 3.0), scored("0.2", 2.0, 0.0, 2.0), scored("0.3.1", 1.0, 0.0, 1.0),
    };
    CHECK(deweys(merge_overlaps(ranked)) == std::vector<std::string>{"0.1", "0.2", "0.3.1"});
}

TEST_CASE("merge ties go to the shallower element") {
    std::vector<ScoredElement> ranked = {
        scored("0.1.1", 2.0, 0.0, 2.0),
        scored("0.1", 2.0, 0.0, 2.0),
    };
    CHECK(deweys(merge_overlaps(ranked)) == std::vector<std::string>{"0.1"});
}

TEST_CASE("merge works per document") {
    std::vector<ScoredElement> ranked = {
        scored("0.1", 3.0, 0.0, 3.0, 0),
        scored("0.1.1", 9.0, 0.0, 9.0, 1), // different document: not an overlap
    };
    CHECK(merge_overlaps(ranked).size() == 2);
}

TEST_CASE("merged output never nests within a phase") {
    testing::Rng rng(17);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<ScoredElement> list;
        std::set<std::string> used;
        int n = 2 + static_cast<int>(rng.bounded(20));
        for (int i = 0; i < n; ++i) {
            // Random chain-heavy deweys over a tiny alphabet, one entry per
            // element like the real candidate lists.
            std::string dewey = "0";
            int depth = static_cast<int>(rng.bounded(4));
            for (int d = 0; d < depth; ++d) {
                dewey += "." + std::to_string(1 + rng.bounded(2));
            }
            if (!used.insert(dewey).second) {
                continue;
            }
            double value = (rng.bounded(3) == 0) ? 0.0 : static_cast<double>(rng.bounded(5));
            list.push_back(scored(dewey, value, 0.5, 0.5 + value));
        }
        std::vector<ScoredElement> merged = merge_overlaps(list);
        for (std::size_t a = 0; a < merged.size(); ++a) {
            for (std::size_t b = 0; b < merged.size(); ++b) {
                if (a == b) {
                    continue;
                }
                bool same_phase = (merged[a].value > 0.0) == (merged[b].value > 0.0);
                if (same_phase && merged[a].dewey.is_strict_ancestor_of(merged[b].dewey)) {
                    FAIL_CHECK("nested pair " << merged[a].dewey.str() << " / "
                                              << merged[b].dewey.str());
                }
            }
        }
    }
}

TEST_CASE("final rank computes the combined score") {
    std::vector<ScoredElement> ranked = final_rank(
        {scored("0.1", 1.6160, 0.8271), scored("0.1.1", 0.0, 0.8271)}, 0.9, 0.1);
    REQUIRE(ranked.size() == 2);
    CHECK(std::abs(ranked[0].final_score - 0.9060) < 5e-4);
    CHECK(std::abs(ranked[1].final_score - 0.7444) < 5e-4);
    CHECK(ranked[0].dewey.str() == "0.1");
}

TEST_CASE("degenerate weights rank by value alone") {
    std::vector<ScoredElement> in = {
        scored("0.3", 0.5, 0.9), scored("0.2", 2.5, 0.1), scored("0.1", 1.5, 0.8),
    };
    std::vector<ScoredElement> by_score = final_rank(in, 0.0, 1.0);
    std::vector<ScoredElement> expectation = in;
    std::sort(expectation.begin(), expectation.end(),
              [](const ScoredElement& a, const ScoredElement& b) { return a.value > b.value; });
    CHECK(deweys(by_score) == deweys(expectation));
}

TEST_CASE("rank ties break to the shallower then lexicographic dewey") {
    std::vector<ScoredElement> ranked = final_rank(
        {scored("0.2.1", 1.0, 0.0), scored("0.10", 1.0, 0.0), scored("0.2", 1.0, 0.0)}, 0.0, 1.0);
    CHECK(deweys(ranked) == std::vector<std::string>{"0.2", "0.10", "0.2.1"});
}

TEST_CASE("nfa_query end to end: strict scenario excludes the joy namespace") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    QueryConfig cfg = scenario_cfg(0.8, 0.6);
    std::vector<ScoredElement> results =
        nfa_query(index, "data and space in algorithm", cfg, provider);
    REQUIRE(!results.empty());
    for (const ScoredElement& e : results) {
        CHECK(index.labels[static_cast<std::size_t>(e.label)] == "computer");
        CHECK(std::abs(e.correlation - 0.8271) < 5e-5);
    }
    // The token-less DBMS subtree shows up as a zero-value representative.
    bool has_zero_value = false;
    for (const ScoredElement& e : results) {
        if (e.value == 0.0) {
            has_zero_value = true;
            CHECK(std::abs(e.final_score - 0.9 * 0.8271) < 5e-4);
        }
    }
    CHECK(has_zero_value);
}

TEST_CASE("nfa_query end to end: relaxed scenario admits the joy namespace") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    std::vector<ScoredElement> results =
        nfa_query(index, "data and space in algorithm", scenario_cfg(0.6, 0.3), provider);
    bool saw_joy = false;
    for (const ScoredElement& e : results) {
        if (index.labels[static_cast<std::size_t>(e.label)] == "joy") {
            saw_joy = true;
        }
    }
    CHECK(saw_joy);
}

TEST_CASE("nfa_query is deterministic") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    QueryConfig cfg = scenario_cfg(0.8, 0.6);
    auto a = nfa_query(index, "data and space in algorithm", cfg, provider);
    auto b = nfa_query(index, "data and space in algorithm", cfg, provider);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dewey == b[i].dewey);
        CHECK(a[i].final_score == b[i].final_score);
        CHECK(a[i].value == b[i].value);
    }
}

TEST_CASE("nfa_query rejects stopword-only queries") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    try {
        nfa_query(index, "and of the", scenario_cfg(0.8, 0.6), provider);
        FAIL_CHECK("expected EmptyQueryAfterStopwords");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::empty_query);
    }
}

TEST_CASE("unfiltered single-keyword query ranks the matching element first") {
    ElementNode root;
    root.dewey = DeweyId::root();
    root.tag = "r";
    ElementNode apple;
    apple.dewey = DeweyId::parse("0.1");
    apple.tag = "x";
    apple.direct_tokens = {"apple"};
    ElementNode pear;
    pear.dewey = DeweyId::parse("0.2");
    pear.tag = "y";
    pear.direct_tokens = {"pear"};
    root.children = {apple, pear};
    IndexArtifact index = build_index({{"mini.xml", root}});

    QueryConfig cfg;
    cfg.filter_enabled = false;
    CorrelationProvider provider = index.concept_provider();
    std::vector<ScoredElement> results = nfa_query(index, "apple", cfg, provider);
    REQUIRE(!results.empty());
    CHECK(results[0].dewey.str() == "0.1");
}

TEST_CASE("query results and candidate counts expose |A|") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    QueryOutcome outcome =
        nfa_query_detailed(index, "data and space in algorithm", scenario_cfg(0.8, 0.6), provider);
    CHECK(outcome.candidate_count == 8);

    QueryConfig off = scenario_cfg(0.8, 0.6);
    off.filter_enabled = false;
    QueryOutcome unfiltered =
        nfa_query_detailed(index, "data and space in algorithm", off, provider);
    CHECK(unfiltered.candidate_count == 13);
}

TEST_CASE("scaling values preserves order at fixed correlation") {
    testing::Rng rng(53);
    for (double c : {0.25, 3.0, 1e4}) {
        std::vector<ScoredElement> base;
        for (int i = 0; i < 12; ++i) {
            base.push_back(scored("0." + std::to_string(i + 1),
                                  static_cast<double>(rng.bounded(1000)) / 7.0, 0.42));
        }
        std::vector<ScoredElement> scaled = base;
        for (ScoredElement& e : scaled) {
            e.value *= c;
        }
        CHECK(deweys(final_rank(base, 0.9, 0.1)) == deweys(final_rank(scaled, 0.9, 0.1)));
    }
}

TEST_CASE("concurrent queries against one index agree") {
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = CorrelationProvider::from_table(testing::injected_correlations());
    QueryConfig cfg = scenario_cfg(0.8, 0.6);
    std::vector<ScoredElement> reference = nfa_query(index, "data and space in algorithm", cfg, provider);

    std::vector<std::thread> workers;
    std::vector<int> mismatches(4, 0);
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&, t] {
            for (int rep = 0; rep < 25; ++rep) {
                auto got = nfa_query(index, "data and space in algorithm", cfg, provider);
                if (got.size() != reference.size()) {
                    ++mismatches[static_cast<std::size_t>(t)];
                    continue;
                }
                for (std::size_t i = 0; i < got.size(); ++i) {
                    if (got[i].dewey != reference[i].dewey ||
                        got[i].final_score != reference[i].final_score) {
                        ++mismatches[static_cast<std::size_t>(t)];
                    }
                }
            }
        });
    }
    for (std::thread& w : workers) {
        w.join();
    }
    for (int m : mismatches) {
        CHECK(m == 0);
    }
}

TEST_CASE("concept-space provider reproduces the scenario separations") {
    // Expected values recomputed with an independent dense SVD (numpy) over
    // hand-tallied subtree counts of the record fixture, rank 2.
    IndexArtifact index = testing::build_record_index();
    CorrelationProvider provider = index.concept_provider();
    CHECK(std::abs(provider("computer", "data") - 0.988545) < 1e-4);
    CHECK(std::abs(provider("computer", "space") - 0.343895) < 1e-4);
    CHECK(std::abs(provider("joy", "space") - 0.946987) < 1e-4);
    CHECK(std::abs(provider("joy", "algorithm") - 0.023986) < 1e-4);
    // "computer" and "algorithm" occur in exactly the same elements with the
    // same counts, so their rows coincide and the cosine is exactly 1.
    CHECK(provider("computer", "algorithm") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(provider("computer", "nosuchterm") == 0.0);
}

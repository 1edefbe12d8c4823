#include "support/fixtures.hpp"

namespace nfa::testing {

std::string record_xml() {
    return R"(<root1>
  <c:cs xmlns:c="http://...../computer">
    <c:DBMS>
      <c:DB>attribute</c:DB>
      <c:DB>Management</c:DB>
    </c:DBMS>
    <c:programming>
      <c:complexity>data and space</c:complexity>
      <c:time>data in computer's Algorithm</c:time>
    </c:programming>
    <c:java>data of Algorithm in computer science</c:java>
  </c:cs>
  <n:joy xmlns:n="http://...../happiness">
    <n:entertainment>
      <n:in>no space with audience's joy</n:in>
      <n:out>jackson dance in large space</n:out>
    </n:entertainment>
  </n:joy>
</root1>
)";
}

NamespaceLabelMap record_ns_map() {
    // "computer" resolves through the URI-segment fallback; "joy" needs the
    // explicit mapping because the URI segment says "happiness".
    return {{"http://...../happiness", "joy"}};
}

namespace {

Matrix from_rows(const double (&rows)[5][8]) {
    Matrix m(5, 8);
    for (std::size_t r = 0; r < 5; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

} // namespace

Matrix fixture_counts() {
    static const double rows[5][8] = {
        {0, 0, 1, 0, 1, 1, 0, 0}, // computer
        {0, 0, 1, 1, 1, 1, 0, 0}, // data
        {0, 0, 1, 1, 0, 0, 1, 1}, // space
        {0, 0, 0, 0, 1, 1, 0, 0}, // algorithm
        {0, 0, 0, 0, 0, 0, 1, 0}, // joy
    };
    return from_rows(rows);
}

Matrix fixture_normalized_reference() {
    static const double rows[5][8] = {
        {0, 0, 0.5774, 0, 0.5774, 0.5774, 0, 0},
        {0, 0, 0.5774, 0.7071, 0.5774, 0.5774, 0, 0},
        {0, 0, 0.5774, 0.7071, 0, 0, 0.7071, 1},
        {0, 0, 0, 0, 0.5774, 0.5774, 0, 0},
        {0, 0, 0, 0, 0, 0, 0.7071, 0},
    };
    return from_rows(rows);
}

Matrix fixture_rank2_reference() {
    static const double rows[5][8] = {
        {0, 0, 0.4024, 0.2472, 0.5804, 0.5804, -0.0650, -0.0321},
        {0, 0, 0.5707, 0.4292, 0.6475, 0.6475, 0.0937, 0.1492},
        {0, 0, 0.5813, 0.7346, -0.0059, -0.0059, 0.7997, 0.8897},
        {0, 0, 0.2490, 0.1097, 0.4559, 0.4559, -0.1426, -0.1271},
        {0, 0, 0.0950, 0.1587, -0.0874, -0.0874, 0.2222, 0.2413},
    };
    return from_rows(rows);
}

CorrelationProvider::Table injected_correlations() {
    return {
        {{"computer", "data"}, 0.9984},    {{"computer", "space"}, 0.3168},
        {{"computer", "algorithm"}, 0.6558}, {{"joy", "data"}, 0.0642},
        {{"joy", "space"}, 0.3470},        {{"joy", "algorithm"}, -0.0899},
    };
}

IndexArtifact build_record_index(int k) {
    ElementNode root = parse_document(record_xml(), record_ns_map());
    BuildOptions options;
    options.k = k;
    return build_index({{"record.xml", std::move(root)}}, options);
}

} // namespace nfa::testing

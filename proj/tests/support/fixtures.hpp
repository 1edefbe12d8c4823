#pragma once

#include <array>
#include <string>

#include "nfa/correlation.hpp"
#include "nfa/index.hpp"
#include "nfa/matrix.hpp"

namespace nfa::testing {

// The five-term worked fixture: record.xml, its hand-checked term-element
// matrices, and the injected correlation table.

std::string record_xml();
NamespaceLabelMap record_ns_map();

// Row order of the fixture matrices.
inline constexpr std::array<const char*, 5> kFixtureTerms = {"computer", "data", "space", "algorithm",
                                                             "joy"};

// 5x8 raw counts for the eight leaf elements (corrected: column 5 contains
// no "space" occurrence, consistent with its normalized form).
Matrix fixture_counts();
// Column-normalized counts, 4-decimal reference values.
Matrix fixture_normalized_reference();
// Rank-2 reconstruction, 4-decimal reference values.
Matrix fixture_rank2_reference();

// Reference singular values of the normalized fixture matrix.
inline constexpr std::array<double, 5> kReferenceSingularValues = {1.8397, 1.3770, 0.6569, 0.4126,
                                                                   0.3433};

// Reference constants from the independent dense-SVD oracle
// (tests/oracle/derive_constants.py), frozen before the implementation was
// written.
inline constexpr std::array<double, 5> kOracleSingularValues = {
    1.8396629970, 1.3769480829, 0.6569410579, 0.4126020173, 0.3432813079};
inline constexpr double kOracleCorrComputerData = 0.965058228778;
inline constexpr double kOracleCorrComputerSpace = 0.228217935157;
inline constexpr double kOracleCorrComputerAlgorithm = 0.972309597711;
inline constexpr double kOracleCorrJoyData = 0.142540454826;
inline constexpr double kOracleCorrJoySpace = 0.938564262344;
inline constexpr double kOracleCorrJoyAlgorithm = -0.350383874141;

// Injected label/keyword correlations used by the scenario tests.
CorrelationProvider::Table injected_correlations();

// Parses record.xml and builds a rank-k index over it (document name
// "record.xml").
IndexArtifact build_record_index(int k = 2);

} // namespace nfa::testing

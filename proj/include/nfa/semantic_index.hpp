#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "nfa/matrix.hpp"
#include "nfa/svd.hpp"
#include "nfa/xml_parser.hpp"

namespace nfa {

// Sorted term list with reverse lookup. Term ids are positions.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> sorted_terms);

    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::string& term(std::size_t id) const { return terms_[id]; }

    // -1 when the term is unknown.
    int find(const std::string& term) const;
    // Throws UnknownTerm.
    std::size_t require(const std::string& term) const;

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, int> ids_;
};

struct TermElementMatrix {
    Vocabulary vocab;
    std::vector<std::string> element_ids; // column labels, document order
    Matrix counts;                        // |terms| x |elements|, subtree term frequencies
};

// Vocabulary = every post-tokenization term plus every namespace semantic
// label (labels missing from text get an all-zero row); one column per
// element of every tree, in document order. Throws EmptyCorpus.
TermElementMatrix build_matrix(const std::vector<ElementNode>& corpus);

// Divides each nonzero column by its Euclidean norm; zero columns stay zero.
Matrix normalize_columns(const Matrix& m);

// Rank-k concept space from truncated SVD factors.
struct ConceptSpace {
    int k = 0;
    std::vector<double> singular_values;  // leading k, all > 0
    std::vector<double> full_rank_values; // every singular value of the factorization
    Matrix term_coords;                   // |terms| x k, row i of U_k scaled by the singular values
    Matrix reconstruction;                // U_k S_k V_k^T; empty when the space was loaded from disk

    bool has_reconstruction() const { return !reconstruction.empty(); }
};

// Keeps the leading k singular triples. Requires 1 <= k <= numerical rank
// (RankOutOfRange otherwise).
ConceptSpace truncate(const SvdResult& factors, int k);

// Cosine between two rows of term_coords; 0 when either row is zero.
double coord_cosine(const Matrix& coords, std::size_t row_a, std::size_t row_b);

// Cosine between two term rows of the concept space. Same value as the
// cosine between the corresponding rows of the rank-k reconstruction.
double term_correlation(const ConceptSpace& space, std::size_t term_a, std::size_t term_b);

} // namespace nfa

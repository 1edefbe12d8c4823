#include "nfa/semantic_index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nfa/errors.hpp"

namespace nfa {

Vocabulary::Vocabulary(std::vector<std::string> sorted_terms) : terms_(std::move(sorted_terms)) {
    ids_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        ids_.emplace(terms_[i], static_cast<int>(i));
    }
}

int Vocabulary::find(const std::string& term) const {
    auto it = ids_.find(term);
    return it == ids_.end() ? -1 : it->second;
}

std::size_t Vocabulary::require(const std::string& term) const {
    int id = find(term);
    if (id < 0) {
        raise(ErrorKind::unknown_term, "term '" + term + "' is not in the vocabulary");
    }
    return static_cast<std::size_t>(id);
}

TermElementMatrix build_matrix(const std::vector<ElementNode>& corpus) {
    if (corpus.empty()) {
        raise(ErrorKind::empty_corpus, "no documents to index");
    }
    std::set<std::string> term_set;
    std::size_t element_total = 0;
    for (const ElementNode& root : corpus) {
        visit_document_order(root, [&](const ElementNode& node) {
            ++element_total;
            for (const std::string& term : node.direct_tokens) {
                term_set.insert(term);
            }
            if (node.binding) {
                term_set.insert(node.binding->semantic_label);
            }
        });
    }
    if (element_total == 0) {
        raise(ErrorKind::empty_corpus, "corpus has no elements");
    }

    TermElementMatrix out;
    out.vocab = Vocabulary(std::vector<std::string>(term_set.begin(), term_set.end()));
    out.counts = Matrix(out.vocab.size(), element_total);
    out.element_ids.reserve(element_total);

    std::size_t col = 0;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        // Bottom-up subtree counts to avoid re-walking each subtree.
        struct Walk {
            TermElementMatrix& out;
            std::size_t& col;
            std::size_t doc;

            std::map<std::string, int> run(const ElementNode& node) {
                std::size_t my_col = col++;
                out.element_ids.push_back(std::to_string(doc) + ":" + node.dewey.str());
                std::map<std::string, int> counts;
                for (const std::string& term : node.direct_tokens) {
                    ++counts[term];
                }
                for (const ElementNode& child : node.children) {
                    for (const auto& [term, tf] : run(child)) {
                        counts[term] += tf;
                    }
                }
                for (const auto& [term, tf] : counts) {
                    out.counts(out.vocab.require(term), my_col) = static_cast<double>(tf);
                }
                return counts;
            }
        };
        Walk walk{out, col, d};
        walk.run(corpus[d]);
    }
    return out;
}

Matrix normalize_columns(const Matrix& m) {
    Matrix out = m;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double norm = column_norm(m, j);
        if (norm > 0.0) {
            double inv = 1.0 / norm;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                out(i, j) = m(i, j) * inv;
            }
        }
    }
    return out;
}

ConceptSpace truncate(const SvdResult& factors, int k) {
    int rank = factors.numerical_rank();
    if (k < 1 || k > rank) {
        raise(ErrorKind::rank_out_of_range,
              "k = " + std::to_string(k) + " outside [1, " + std::to_string(rank) + "]");
    }
    ConceptSpace space;
    space.k = k;
    space.full_rank_values = factors.sigma;
    space.singular_values.assign(factors.sigma.begin(), factors.sigma.begin() + k);

    std::size_t terms = factors.u.rows();
    space.term_coords = Matrix(terms, static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < terms; ++i) {
        for (int c = 0; c < k; ++c) {
            space.term_coords(i, static_cast<std::size_t>(c)) =
                factors.u(i, static_cast<std::size_t>(c)) * factors.sigma[static_cast<std::size_t>(c)];
        }
    }

    std::size_t elements = factors.v.rows();
    space.reconstruction = Matrix(terms, elements);
    for (std::size_t i = 0; i < terms; ++i) {
        for (int c = 0; c < k; ++c) {
            double scale = space.term_coords(i, static_cast<std::size_t>(c));
            if (scale == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < elements; ++j) {
                space.reconstruction(i, j) += scale * factors.v(j, static_cast<std::size_t>(c));
            }
        }
    }
    return space;
}

double coord_cosine(const Matrix& coords, std::size_t row_a, std::size_t row_b) {
    double aa = 0.0;
    double bb = 0.0;
    double ab = 0.0;
    for (std::size_t c = 0; c < coords.cols(); ++c) {
        double x = coords(row_a, c);
        double y = coords(row_b, c);
        aa += x * x;
        bb += y * y;
        ab += x * y;
    }
    if (aa == 0.0 || bb == 0.0) {
        return 0.0;
    }
    double cosine = ab / (std::sqrt(aa) * std::sqrt(bb));
    return std::clamp(cosine, -1.0, 1.0);
}

double term_correlation(const ConceptSpace& space, std::size_t term_a, std::size_t term_b) {
    if (term_a >= space.term_coords.rows() || term_b >= space.term_coords.rows()) {
        raise(ErrorKind::unknown_term, "term row out of range");
    }
    return coord_cosine(space.term_coords, term_a, term_b);
}

} // namespace nfa

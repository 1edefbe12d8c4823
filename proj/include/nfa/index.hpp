#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nfa/correlation.hpp"
#include "nfa/dewey.hpp"
#include "nfa/parallel.hpp"
#include "nfa/semantic_index.hpp"
#include "nfa/xml_parser.hpp"

namespace nfa {

struct ParsedDocument {
    std::string name;
    ElementNode root;
};

struct ElementRecord {
    DeweyId dewey;
    std::int32_t doc = 0;
    std::int32_t label = -1; // index into IndexArtifact::labels, -1 = unlabeled
    std::vector<std::pair<std::int32_t, std::int32_t>> postings; // (term id, subtree tf), term-sorted
    double length = 0.0; // Euclidean norm of the element's full weight vector

    // Subtree term frequency; 0 when the term does not occur.
    std::int32_t tf(std::int32_t term_id) const;
};

struct CorpusStats {
    std::int64_t element_count = 0;            // N
    std::vector<std::int64_t> element_frequency; // ef, per vocabulary term
};

// Immutable queryable unit. Safe for unlimited concurrent readers once built
// or loaded.
struct IndexArtifact {
    static constexpr int kFormatVersion = 1;

    int format_version = kFormatVersion;
    Vocabulary vocab;
    std::vector<std::string> documents; // doc id -> file name
    std::vector<std::string> labels;    // label id -> semantic label
    std::vector<ElementRecord> elements; // global document order
    CorpusStats stats;
    std::vector<double> ief; // per term; 0 for terms absent from all text
    ConceptSpace space;

    const std::string& document_name(std::int32_t doc) const { return documents[static_cast<std::size_t>(doc)]; }
    const std::string* label_of(const ElementRecord& rec) const {
        return rec.label < 0 ? nullptr : &labels[static_cast<std::size_t>(rec.label)];
    }

    // Concept-space cosine between two vocabulary terms. Throws UnknownTerm.
    double term_correlation(const std::string& a, const std::string& b) const;

    CorrelationProvider concept_provider() const {
        return CorrelationProvider::from_concept_space(vocab, space);
    }
};

struct BuildOptions {
    int k = 2; // requested SVD rank; clamped to the matrix's numerical rank
    ExecMode mode = default_exec_mode();
};

// Full build: records, postings, corpus stats, lengths, term-element matrix,
// SVD, concept space. Document order fixes element order; vocabulary is
// sorted. Throws EmptyCorpus.
IndexArtifact build_index(const std::vector<ParsedDocument>& docs, const BuildOptions& options = {});

// NFAX/1 text format. save writes '\n'-terminated tab-separated records and
// a trailing END count; load verifies structure, version, and the END count.
void save_index(const IndexArtifact& index, std::ostream& out);
void save_index_file(const IndexArtifact& index, const std::string& path);
IndexArtifact load_index(std::istream& in);
IndexArtifact load_index_file(const std::string& path);

// Shared float rendering: 9 significant decimal digits, locale-independent.
std::string format_float(double value);

} // namespace nfa

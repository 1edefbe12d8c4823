#include "nfa/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nfa/errors.hpp"
#include "nfa/scoring.hpp"

namespace nfa {

std::int32_t ElementRecord::tf(std::int32_t term_id) const {
    auto it = std::lower_bound(postings.begin(), postings.end(), term_id,
                               [](const auto& posting, std::int32_t key) { return posting.first < key; });
    if (it == postings.end() || it->first != term_id) {
        return 0;
    }
    return it->second;
}

double IndexArtifact::term_correlation(const std::string& a, const std::string& b) const {
    std::size_t ia = vocab.require(a);
    std::size_t ib = vocab.require(b);
    if (space.k == 0) {
        return 0.0;
    }
    return nfa::term_correlation(space, ia, ib);
}

std::string format_float(double value) {
    if (!std::isfinite(value)) {
        raise(ErrorKind::domain_error, "refusing to serialize a non-finite float");
    }
    if (value == 0.0) {
        return "0"; // collapses negative zero
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

namespace {

struct FlatElement {
    DeweyId dewey;
    std::int32_t doc = 0;
    std::string label; // empty = none
    std::map<std::string, int> subtree_tf;
};

void flatten(const ElementNode& node, std::int32_t doc, const std::string& inherited_label,
             std::vector<FlatElement>& out, std::map<std::string, int>* parent_tf) {
    FlatElement flat;
    flat.dewey = node.dewey;
    flat.doc = doc;
    flat.label = node.binding ? node.binding->semantic_label : inherited_label;
    std::size_t my_slot = out.size();
    out.push_back(std::move(flat));

    std::map<std::string, int> counts;
    for (const std::string& term : node.direct_tokens) {
        ++counts[term];
    }
    for (const ElementNode& child : node.children) {
        flatten(child, doc, out[my_slot].label, out, &counts);
    }
    if (parent_tf != nullptr) {
        for (const auto& [term, tf] : counts) {
            (*parent_tf)[term] += tf;
        }
    }
    out[my_slot].subtree_tf = std::move(counts);
}

} // namespace

IndexArtifact build_index(const std::vector<ParsedDocument>& docs, const BuildOptions& options) {
    if (docs.empty()) {
        raise(ErrorKind::empty_corpus, "no documents to index");
    }
    if (options.k < 1) {
        raise(ErrorKind::config_error, "SVD rank k must be at least 1");
    }

    IndexArtifact index;
    std::vector<FlatElement> flat;
    std::set<std::string> term_set;
    std::set<std::string> label_set;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        index.documents.push_back(docs[d].name);
        flatten(docs[d].root, static_cast<std::int32_t>(d), std::string{}, flat, nullptr);
    }
    for (const FlatElement& fe : flat) {
        for (const auto& [term, tf] : fe.subtree_tf) {
            (void)tf;
            term_set.insert(term);
        }
        if (!fe.label.empty()) {
            label_set.insert(fe.label);
        }
    }
    term_set.insert(label_set.begin(), label_set.end());
    index.vocab = Vocabulary(std::vector<std::string>(term_set.begin(), term_set.end()));
    index.labels.assign(label_set.begin(), label_set.end());

    std::map<std::string, std::int32_t> label_id;
    for (std::size_t i = 0; i < index.labels.size(); ++i) {
        label_id[index.labels[i]] = static_cast<std::int32_t>(i);
    }

    index.elements.reserve(flat.size());
    for (FlatElement& fe : flat) {
        ElementRecord rec;
        rec.dewey = std::move(fe.dewey);
        rec.doc = fe.doc;
        rec.label = fe.label.empty() ? -1 : label_id[fe.label];
        rec.postings.reserve(fe.subtree_tf.size());
        for (const auto& [term, tf] : fe.subtree_tf) {
            // map iteration is sorted by term, and the vocabulary is sorted,
            // so posting term ids come out ascending.
            rec.postings.emplace_back(static_cast<std::int32_t>(index.vocab.require(term)),
                                      static_cast<std::int32_t>(tf));
        }
        index.elements.push_back(std::move(rec));
    }

    index.stats.element_count = static_cast<std::int64_t>(index.elements.size());
    index.stats.element_frequency.assign(index.vocab.size(), 0);
    for (const ElementRecord& rec : index.elements) {
        for (const auto& [term_id, tf] : rec.postings) {
            (void)tf;
            ++index.stats.element_frequency[static_cast<std::size_t>(term_id)];
        }
    }
    index.ief.assign(index.vocab.size(), 0.0);
    for (std::size_t t = 0; t < index.vocab.size(); ++t) {
        std::int64_t ef = index.stats.element_frequency[t];
        if (ef > 0) {
            index.ief[t] = compute_ief(index.stats.element_count, ef);
        }
    }

    // Element vector lengths over all matched vocabulary terms.
    parallel_for(index.elements.size(), options.mode, [&](std::size_t i) {
        ElementRecord& rec = index.elements[i];
        double sum = 0.0;
        for (const auto& [term_id, tf] : rec.postings) {
            double w = weight_element(tf, index.ief[static_cast<std::size_t>(term_id)]);
            sum += w * w;
        }
        rec.length = std::sqrt(sum);
    });

    // Term-element matrix over the whole collection, then the concept space.
    if (index.vocab.size() == 0) {
        // No tokens and no namespaces anywhere: empty concept space.
        index.space.k = 0;
        index.space.term_coords = Matrix(0, 0);
        return index;
    }
    Matrix counts(index.vocab.size(), index.elements.size());
    for (std::size_t e = 0; e < index.elements.size(); ++e) {
        for (const auto& [term_id, tf] : index.elements[e].postings) {
            counts(static_cast<std::size_t>(term_id), e) = static_cast<double>(tf);
        }
    }
    Matrix normalized = normalize_columns(counts);
    SvdOptions svd_options;
    svd_options.mode = options.mode;
    SvdResult factors = svd_decompose(normalized, svd_options);
    int rank = factors.numerical_rank();
    int k_eff = std::min(options.k, rank);
    if (k_eff >= 1) {
        index.space = truncate(factors, k_eff);
    } else {
        // Degenerate corpus with no text at all: empty concept space, every
        // correlation is 0.
        index.space.k = 0;
        index.space.full_rank_values = factors.sigma;
        index.space.term_coords = Matrix(index.vocab.size(), 0);
    }
    return index;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t tab = line.find('\t', pos);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

[[noreturn]] void bad_format(int line_no, const std::string& message) {
    raise(ErrorKind::index_format, "index line " + std::to_string(line_no) + ": " + message);
}

std::int64_t parse_int(const std::string& text, int line_no) {
    if (text.empty()) {
        bad_format(line_no, "empty integer field");
    }
    std::int64_t value = 0;
    std::size_t used = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        bad_format(line_no, "bad integer '" + text + "'");
    }
    if (used != text.size()) {
        bad_format(line_no, "bad integer '" + text + "'");
    }
    return value;
}

double parse_float(const std::string& text, int line_no) {
    if (text.empty()) {
        bad_format(line_no, "empty float field");
    }
    double value = 0.0;
    std::size_t used = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        bad_format(line_no, "bad float '" + text + "'");
    }
    if (used != text.size()) {
        bad_format(line_no, "bad float '" + text + "'");
    }
    return value;
}

} // namespace

void save_index(const IndexArtifact& index, std::ostream& out) {
    std::int64_t records = 0;
    auto emit = [&](const std::string& line) {
        out << line << '\n';
        ++records;
    };

    emit("HEADER\tNFAX\t" + std::to_string(index.format_version) + "\t" +
         std::to_string(index.stats.element_count) + "\t" + std::to_string(index.space.k));
    for (std::size_t d = 0; d < index.documents.size(); ++d) {
        if (index.documents[d].find_first_of("\t\n") != std::string::npos) {
            raise(ErrorKind::domain_error, "document name contains a tab or newline");
        }
        emit("DOC\t" + std::to_string(d) + "\t" + index.documents[d]);
    }
    for (std::size_t t = 0; t < index.vocab.size(); ++t) {
        emit("VOCAB\t" + std::to_string(t) + "\t" + index.vocab.term(t));
    }
    for (std::size_t e = 0; e < index.elements.size(); ++e) {
        const ElementRecord& rec = index.elements[e];
        const std::string* label = index.label_of(rec);
        emit("ELEM\t" + std::to_string(e) + "\t" + std::to_string(rec.doc) + "\t" + rec.dewey.str() +
             "\t" + (rec.dewey.is_root() ? "-" : rec.dewey.parent().str()) + "\t" +
             (label != nullptr ? *label : "-") + "\t" + format_float(rec.length));
    }
    for (std::size_t e = 0; e < index.elements.size(); ++e) {
        for (const auto& [term_id, tf] : index.elements[e].postings) {
            emit("POST\t" + std::to_string(term_id) + "\t" + std::to_string(e) + "\t" +
                 std::to_string(tf));
        }
    }
    for (std::size_t i = 0; i < index.space.full_rank_values.size(); ++i) {
        emit("SING\t" + std::to_string(i) + "\t" + format_float(index.space.full_rank_values[i]));
    }
    for (std::size_t t = 0; t < index.vocab.size(); ++t) {
        std::string line = "COORD\t" + std::to_string(t);
        for (int c = 0; c < index.space.k; ++c) {
            line += "\t" + format_float(index.space.term_coords(t, static_cast<std::size_t>(c)));
        }
        emit(line);
    }
    out << "END\t" << records << '\n';
    if (!out) {
        raise(ErrorKind::io_error, "failed writing index stream");
    }
}

void save_index_file(const IndexArtifact& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        raise(ErrorKind::io_error, "cannot open '" + path + "' for writing");
    }
    save_index(index, out);
}

IndexArtifact load_index(std::istream& in) {
    IndexArtifact index;
    index.space.k = 0;

    static const std::vector<std::string> section_order = {"HEADER", "DOC",  "VOCAB", "ELEM",
                                                           "POST",   "SING", "COORD", "END"};
    auto section_rank = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < section_order.size(); ++i) {
            if (section_order[i] == name) {
                return static_cast<int>(i);
            }
        }
        return -1;
    };

    std::string line;
    int line_no = 0;
    int current_rank = 0;
    bool saw_header = false;
    bool saw_end = false;
    std::int64_t declared_n = 0;
    int declared_k = 0;
    std::int64_t records = 0;
    std::vector<std::string> vocab_terms;
    std::set<std::string> label_set;
    std::vector<std::string> element_labels;
    std::vector<double> coord_rows; // row-major staging, k columns
    std::int64_t coord_count = 0;
    std::pair<std::int64_t, std::int64_t> last_post{-1, -1};

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (saw_end) {
            bad_format(line_no, "content after END record");
        }
        std::vector<std::string> f = split_tabs(line);
        const std::string& section = f[0];
        int rank = section_rank(section);
        if (rank < 0) {
            bad_format(line_no, "unknown section '" + section + "'");
        }
        if (!saw_header && section != "HEADER") {
            bad_format(line_no, "file must start with a HEADER record");
        }
        if (rank < current_rank) {
            bad_format(line_no, "section '" + section + "' out of order");
        }
        current_rank = rank;

        if (section == "HEADER") {
            if (saw_header) {
                bad_format(line_no, "duplicate HEADER");
            }
            if (f.size() != 5) {
                bad_format(line_no, "HEADER needs 5 fields");
            }
            if (f[1] != "NFAX") {
                bad_format(line_no, "not an NFAX index (tag '" + f[1] + "')");
            }
            int version = static_cast<int>(parse_int(f[2], line_no));
            if (version != IndexArtifact::kFormatVersion) {
                raise(ErrorKind::index_version_mismatch,
                      "index version " + f[2] + ", reader supports " +
                          std::to_string(IndexArtifact::kFormatVersion));
            }
            declared_n = parse_int(f[3], line_no);
            declared_k = static_cast<int>(parse_int(f[4], line_no));
            if (declared_n < 0 || declared_k < 0) {
                bad_format(line_no, "negative HEADER counts");
            }
            saw_header = true;
        } else if (section == "DOC") {
            if (f.size() != 3) {
                bad_format(line_no, "DOC needs 3 fields");
            }
            if (parse_int(f[1], line_no) != static_cast<std::int64_t>(index.documents.size())) {
                bad_format(line_no, "non-sequential DOC id");
            }
            index.documents.push_back(f[2]);
        } else if (section == "VOCAB") {
            if (f.size() != 3) {
                bad_format(line_no, "VOCAB needs 3 fields");
            }
            if (parse_int(f[1], line_no) != static_cast<std::int64_t>(vocab_terms.size())) {
                bad_format(line_no, "non-sequential VOCAB id");
            }
            vocab_terms.push_back(f[2]);
        } else if (section == "ELEM") {
            if (f.size() != 7) {
                bad_format(line_no, "ELEM needs 7 fields");
            }
            if (parse_int(f[1], line_no) != static_cast<std::int64_t>(index.elements.size())) {
                bad_format(line_no, "non-sequential ELEM id");
            }
            ElementRecord rec;
            std::int64_t doc = parse_int(f[2], line_no);
            if (doc < 0 || doc >= static_cast<std::int64_t>(index.documents.size())) {
                bad_format(line_no, "ELEM references unknown document " + f[2]);
            }
            rec.doc = static_cast<std::int32_t>(doc);
            try {
                rec.dewey = DeweyId::parse(f[3]);
            } catch (const Error& e) {
                bad_format(line_no, e.what());
            }
            std::string expected_parent = rec.dewey.is_root() ? "-" : rec.dewey.parent().str();
            if (f[4] != expected_parent) {
                bad_format(line_no, "parent '" + f[4] + "' does not match Dewey id " + f[3]);
            }
            rec.length = parse_float(f[6], line_no);
            if (!(rec.length >= 0.0)) {
                bad_format(line_no, "negative element length");
            }
            element_labels.push_back(f[5] == "-" ? "" : f[5]);
            if (f[5] != "-") {
                label_set.insert(f[5]);
            }
            index.elements.push_back(std::move(rec));
        } else if (section == "POST") {
            if (f.size() != 4) {
                bad_format(line_no, "POST needs 4 fields");
            }
            std::int64_t term = parse_int(f[1], line_no);
            std::int64_t elem = parse_int(f[2], line_no);
            std::int64_t tf = parse_int(f[3], line_no);
            if (term < 0 || term >= static_cast<std::int64_t>(vocab_terms.size())) {
                bad_format(line_no, "POST references unknown term " + f[1]);
            }
            if (elem < 0 || elem >= static_cast<std::int64_t>(index.elements.size())) {
                bad_format(line_no, "POST references unknown element " + f[2]);
            }
            if (tf < 1) {
                bad_format(line_no, "POST tf must be positive");
            }
            if (std::pair{elem, term} <= last_post) {
                bad_format(line_no, "POST records out of (element, term) order");
            }
            last_post = {elem, term};
            index.elements[static_cast<std::size_t>(elem)].postings.emplace_back(
                static_cast<std::int32_t>(term), static_cast<std::int32_t>(tf));
        } else if (section == "SING") {
            if (f.size() != 3) {
                bad_format(line_no, "SING needs 3 fields");
            }
            if (parse_int(f[1], line_no) !=
                static_cast<std::int64_t>(index.space.full_rank_values.size())) {
                bad_format(line_no, "non-sequential SING id");
            }
            double sigma = parse_float(f[2], line_no);
            if (sigma < 0.0 ||
                (!index.space.full_rank_values.empty() && sigma > index.space.full_rank_values.back())) {
                bad_format(line_no, "singular values must be non-negative and non-increasing");
            }
            index.space.full_rank_values.push_back(sigma);
        } else if (section == "COORD") {
            if (f.size() != static_cast<std::size_t>(2 + declared_k)) {
                bad_format(line_no, "COORD needs " + std::to_string(2 + declared_k) + " fields");
            }
            if (parse_int(f[1], line_no) != coord_count) {
                bad_format(line_no, "non-sequential COORD id");
            }
            ++coord_count;
            for (int c = 0; c < declared_k; ++c) {
                coord_rows.push_back(parse_float(f[static_cast<std::size_t>(2 + c)], line_no));
            }
        } else { // END
            if (f.size() != 2) {
                bad_format(line_no, "END needs 2 fields");
            }
            if (parse_int(f[1], line_no) != records) {
                bad_format(line_no, "END count " + f[1] + " does not match " +
                                        std::to_string(records) + " records (truncated file?)");
            }
            saw_end = true;
            continue;
        }
        ++records;
    }
    if (!saw_header) {
        raise(ErrorKind::index_format, "empty stream is not an NFAX index");
    }
    if (!saw_end) {
        raise(ErrorKind::index_format, "missing END record (truncated file?)");
    }
    if (declared_n != static_cast<std::int64_t>(index.elements.size())) {
        raise(ErrorKind::index_format, "HEADER element count does not match ELEM records");
    }

    index.vocab = Vocabulary(std::move(vocab_terms));
    index.labels.assign(label_set.begin(), label_set.end());
    std::map<std::string, std::int32_t> label_id;
    for (std::size_t i = 0; i < index.labels.size(); ++i) {
        label_id[index.labels[i]] = static_cast<std::int32_t>(i);
    }
    for (std::size_t e = 0; e < index.elements.size(); ++e) {
        index.elements[e].label = element_labels[e].empty() ? -1 : label_id[element_labels[e]];
    }

    index.stats.element_count = static_cast<std::int64_t>(index.elements.size());
    index.stats.element_frequency.assign(index.vocab.size(), 0);
    for (const ElementRecord& rec : index.elements) {
        for (const auto& [term_id, tf] : rec.postings) {
            (void)tf;
            ++index.stats.element_frequency[static_cast<std::size_t>(term_id)];
        }
    }
    index.ief.assign(index.vocab.size(), 0.0);
    for (std::size_t t = 0; t < index.vocab.size(); ++t) {
        if (index.stats.element_frequency[t] > 0) {
            index.ief[t] = compute_ief(index.stats.element_count, index.stats.element_frequency[t]);
        }
    }

    index.space.k = declared_k;
    if (static_cast<int>(index.space.full_rank_values.size()) < declared_k) {
        raise(ErrorKind::index_format, "fewer SING records than the HEADER rank");
    }
    index.space.singular_values.assign(index.space.full_rank_values.begin(),
                                       index.space.full_rank_values.begin() + declared_k);
    if (coord_count != static_cast<std::int64_t>(index.vocab.size())) {
        raise(ErrorKind::index_format, "COORD records do not cover the vocabulary");
    }
    index.space.term_coords = Matrix(index.vocab.size(), static_cast<std::size_t>(declared_k));
    for (std::size_t t = 0; t < index.vocab.size(); ++t) {
        for (int c = 0; c < declared_k; ++c) {
            index.space.term_coords(t, static_cast<std::size_t>(c)) =
                coord_rows[t * static_cast<std::size_t>(declared_k) + static_cast<std::size_t>(c)];
        }
    }
    return index;
}

IndexArtifact load_index_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorKind::io_error, "cannot open index '" + path + "'");
    }
    return load_index(in);
}

} // namespace nfa

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nfa/engine.hpp"
#include "nfa/errors.hpp"
#include "nfa/eval.hpp"
#include "nfa/index.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

int exit_code_for(nfa::ErrorKind kind) {
    switch (kind) {
        case nfa::ErrorKind::config_error:
            return kExitUsage;
        case nfa::ErrorKind::malformed_xml:
        case nfa::ErrorKind::unresolvable_prefix:
        case nfa::ErrorKind::empty_label:
        case nfa::ErrorKind::empty_corpus:
        case nfa::ErrorKind::unknown_term:
        case nfa::ErrorKind::empty_query:
        case nfa::ErrorKind::index_version_mismatch:
        case nfa::ErrorKind::index_format:
        case nfa::ErrorKind::io_error:
            return kExitInput;
        case nfa::ErrorKind::convergence_failure:
        case nfa::ErrorKind::rank_out_of_range:
        case nfa::ErrorKind::domain_error:
            return kExitInternal;
    }
    return kExitInternal;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        nfa::raise(nfa::ErrorKind::io_error, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool has_xml_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".xml";
}

struct IndexArgs {
    std::string input_dir;
    std::string out_path;
    std::string ns_map_path;
    std::string stopwords_path;
    int k = 2;
};

int run_index(const IndexArgs& args) {
    if (args.k < 1) {
        nfa::raise(nfa::ErrorKind::config_error, "SVD rank k must be at least 1");
    }
    nfa::NamespaceLabelMap ns_map;
    if (!args.ns_map_path.empty()) {
        ns_map = nfa::load_namespace_map(args.ns_map_path);
    }
    nfa::StopwordSet stopwords =
        args.stopwords_path.empty() ? nfa::default_stopwords() : nfa::load_stopwords(args.stopwords_path);

    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(args.input_dir, ec)) {
        if (entry.is_regular_file() && has_xml_extension(entry.path())) {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        nfa::raise(nfa::ErrorKind::io_error, "cannot read directory '" + args.input_dir + "'");
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (files.empty()) {
        nfa::raise(nfa::ErrorKind::empty_corpus, "no .xml files under '" + args.input_dir + "'");
    }

    std::vector<nfa::ParsedDocument> docs;
    docs.reserve(files.size());
    for (const fs::path& file : files) {
        try {
            docs.push_back({file.filename().string(),
                            nfa::parse_document(read_file(file.string()), ns_map, stopwords)});
        } catch (const nfa::Error& e) {
            nfa::raise(e.kind(), std::string(e.what()) + " [" + file.string() + "]");
        }
    }

    nfa::BuildOptions options;
    options.k = args.k;
    nfa::IndexArtifact index = nfa::build_index(docs, options);
    nfa::save_index_file(index, args.out_path);
    std::cerr << "indexed " << index.stats.element_count << " elements from " << docs.size()
              << " documents (vocabulary " << index.vocab.size() << ", rank " << index.space.k
              << ") -> " << args.out_path << "\n";
    return kExitOk;
}

struct QueryArgs {
    std::string index_path;
    std::string query_text;
    std::string corr_table_path;
    nfa::QueryConfig cfg;
};

int run_query(const QueryArgs& args) {
    args.cfg.validate();
    nfa::IndexArtifact index = nfa::load_index_file(args.index_path);
    nfa::CorrelationProvider provider =
        args.corr_table_path.empty()
            ? index.concept_provider()
            : nfa::CorrelationProvider::from_table(nfa::load_correlation_table(args.corr_table_path));

    std::vector<nfa::ScoredElement> results = nfa::nfa_query(index, args.query_text, args.cfg, provider);
    std::ostringstream out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const nfa::ScoredElement& e = results[i];
        out << (i + 1) << '\t' << e.dewey.str() << '\t'
            << (e.dewey.is_root() ? "-" : e.dewey.parent().str()) << '\t'
            << index.document_name(e.doc) << '\t' << nfa::format_float(e.final_score) << '\t'
            << nfa::format_float(e.value) << '\t' << nfa::format_float(e.correlation) << '\n';
    }
    std::cout << out.str();
    return kExitOk;
}

struct EvalArgs {
    std::string index_path;
    std::string queries_path;
    std::string qrels_path;
    std::string corr_table_path;
    std::string out_path;
    int repetitions = 5;
    nfa::QueryConfig cfg;
};

int run_eval(const EvalArgs& args) {
    args.cfg.validate();
    if (args.repetitions < 3) {
        nfa::raise(nfa::ErrorKind::config_error, "timing comparison needs at least 3 repetitions");
    }
    nfa::IndexArtifact index = nfa::load_index_file(args.index_path);
    std::vector<nfa::EvalQuery> queries = nfa::load_queries(args.queries_path);
    nfa::Qrels qrels = nfa::load_qrels(args.qrels_path);
    nfa::CorrelationProvider provider =
        args.corr_table_path.empty()
            ? index.concept_provider()
            : nfa::CorrelationProvider::from_table(nfa::load_correlation_table(args.corr_table_path));

    nfa::EvalReport report =
        nfa::timing_compare(index, queries, args.cfg, args.repetitions, provider, &qrels);
    if (args.out_path.empty()) {
        nfa::write_report(report, std::cout);
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) {
            nfa::raise(nfa::ErrorKind::io_error, "cannot open '" + args.out_path + "' for writing");
        }
        nfa::write_report(report, out);
    }
    return kExitOk;
}

void add_query_config_flags(CLI::App* cmd, nfa::QueryConfig& cfg, bool& no_filter) {
    cmd->add_option("--lambda1", cfg.lambda1, "high-relevance threshold");
    cmd->add_option("--lambda2", cfg.lambda2, "common-relevance threshold");
    cmd->add_option("--a1", cfg.a1, "weight of the namespace correlation");
    cmd->add_option("--a2", cfg.a2, "weight of the text-match value");
    cmd->add_option("--top", cfg.top_k, "result cutoff K");
    cmd->add_flag("--no-filter", no_filter, "rank every element instead of the filtered set");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"namespace-aware XML element retrieval"};
    app.require_subcommand(1);

    IndexArgs index_args;
    CLI::App* index_cmd = app.add_subcommand("index", "build an NFAX/1 index from a directory of XML files");
    index_cmd->add_option("--input", index_args.input_dir, "directory of .xml files")->required();
    index_cmd->add_option("--out", index_args.out_path, "output index path")->required();
    index_cmd->add_option("--ns-map", index_args.ns_map_path, "uri<TAB>label file");
    index_cmd->add_option("--stopwords", index_args.stopwords_path, "stopword file, one term per line");
    index_cmd->add_option("--k", index_args.k, "SVD rank for the concept space");

    QueryArgs query_args;
    bool query_no_filter = false;
    CLI::App* query_cmd = app.add_subcommand("query", "run a keyword query against an index");
    query_cmd->add_option("--index", query_args.index_path, "index file")->required();
    query_cmd->add_option("--query", query_args.query_text, "keyword query text")->required();
    query_cmd->add_option("--corr-table", query_args.corr_table_path,
                          "label<TAB>keyword<TAB>value correlation override table");
    add_query_config_flags(query_cmd, query_args.cfg, query_no_filter);

    EvalArgs eval_args;
    bool eval_no_filter = false;
    CLI::App* eval_cmd = app.add_subcommand("eval", "precision/recall and filtered-vs-unfiltered timing");
    eval_cmd->add_option("--index", eval_args.index_path, "index file")->required();
    eval_cmd->add_option("--queries", eval_args.queries_path, "query-id<TAB>text file")->required();
    eval_cmd->add_option("--qrels", eval_args.qrels_path, "query-id<TAB>doc-id<TAB>dewey file")->required();
    eval_cmd->add_option("--reps", eval_args.repetitions, "repetitions per query and mode");
    eval_cmd->add_option("--corr-table", eval_args.corr_table_path, "correlation override table");
    eval_cmd->add_option("--out", eval_args.out_path, "write the report here instead of stdout");
    add_query_config_flags(eval_cmd, eval_args.cfg, eval_no_filter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (index_cmd->parsed()) {
            return run_index(index_args);
        }
        if (query_cmd->parsed()) {
            query_args.cfg.filter_enabled = !query_no_filter;
            return run_query(query_args);
        }
        eval_args.cfg.filter_enabled = !eval_no_filter;
        return run_eval(eval_args);
    } catch (const nfa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

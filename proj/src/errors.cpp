#include "nfa/errors.hpp"

namespace nfa {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::malformed_xml: return "MalformedXml";
        case ErrorKind::unresolvable_prefix: return "UnresolvablePrefix";
        case ErrorKind::empty_label: return "EmptyLabel";
        case ErrorKind::empty_corpus: return "EmptyCorpus";
        case ErrorKind::convergence_failure: return "ConvergenceFailure";
        case ErrorKind::rank_out_of_range: return "RankOutOfRange";
        case ErrorKind::unknown_term: return "UnknownTerm";
        case ErrorKind::domain_error: return "DomainError";
        case ErrorKind::empty_query: return "EmptyQueryAfterStopwords";
        case ErrorKind::index_version_mismatch: return "IndexVersionMismatch";
        case ErrorKind::index_format: return "IndexFormat";
        case ErrorKind::io_error: return "IoError";
        case ErrorKind::config_error: return "ConfigError";
    }
    return "UnknownError";
}

} // namespace nfa

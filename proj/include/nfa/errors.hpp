#pragma once

#include <stdexcept>
#include <string>

namespace nfa {

enum class ErrorKind {
    malformed_xml,
    unresolvable_prefix,
    empty_label,
    empty_corpus,
    convergence_failure,
    rank_out_of_range,
    unknown_term,
    domain_error,
    empty_query,
    index_version_mismatch,
    index_format,
    io_error,
    config_error,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace nfa

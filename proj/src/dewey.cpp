#include "nfa/dewey.hpp"

#include <utility>

#include "nfa/errors.hpp"

namespace nfa {

DeweyId::DeweyId(std::vector<int> components) : components_(std::move(components)) {
    if (components_.empty()) {
        raise(ErrorKind::domain_error, "Dewey id must not be empty");
    }
    if (components_.front() != 0) {
        raise(ErrorKind::domain_error, "Dewey id must start with 0, got " + str());
    }
    for (std::size_t i = 1; i < components_.size(); ++i) {
        if (components_[i] < 0) {
            raise(ErrorKind::domain_error, "Dewey component must be non-negative in " + str());
        }
    }
}

DeweyId DeweyId::root() {
    return DeweyId(std::vector<int>{0});
}

DeweyId DeweyId::parse(const std::string& dotted) {
    std::vector<int> parts;
    std::size_t pos = 0;
    if (dotted.empty()) {
        raise(ErrorKind::domain_error, "empty Dewey id string");
    }
    while (pos <= dotted.size()) {
        std::size_t dot = dotted.find('.', pos);
        std::string piece = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (piece.empty()) {
            raise(ErrorKind::domain_error, "malformed Dewey id '" + dotted + "'");
        }
        long long value = 0;
        for (char c : piece) {
            if (c < '0' || c > '9') {
                raise(ErrorKind::domain_error, "malformed Dewey id '" + dotted + "'");
            }
            value = value * 10 + (c - '0');
            if (value > 1000000000) {
                raise(ErrorKind::domain_error, "Dewey component out of range in '" + dotted + "'");
            }
        }
        parts.push_back(static_cast<int>(value));
        if (dot == std::string::npos) {
            break;
        }
        pos = dot + 1;
    }
    return DeweyId(std::move(parts));
}

DeweyId DeweyId::child(int ordinal) const {
    std::vector<int> parts = components_;
    parts.push_back(ordinal);
    return DeweyId(std::move(parts));
}

DeweyId DeweyId::parent() const {
    if (components_.size() <= 1) {
        raise(ErrorKind::domain_error, "the root Dewey id has no parent");
    }
    std::vector<int> parts(components_.begin(), components_.end() - 1);
    return DeweyId(std::move(parts));
}

std::string DeweyId::str() const {
    std::string out;
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (i) {
            out.push_back('.');
        }
        out += std::to_string(components_[i]);
    }
    return out;
}

bool DeweyId::is_strict_ancestor_of(const DeweyId& other) const {
    if (components_.size() >= other.components_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (components_[i] != other.components_[i]) {
            return false;
        }
    }
    return true;
}

} // namespace nfa

#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace nfa {

using StopwordSet = std::unordered_set<std::string>;

// Default list used when no stopword file is supplied.
const StopwordSet& default_stopwords();

// Lowercases, splits on any non-alphanumeric character, strips possessive
// "'s", drops stopwords, and preserves order and multiplicity. Bytes outside
// ASCII are kept verbatim so UTF-8 words survive unchanged.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

inline std::vector<std::string> tokenize(std::string_view text) {
    return tokenize(text, default_stopwords());
}

// One term per line, '#' starts a comment, blank lines ignored.
StopwordSet load_stopwords(const std::string& path);

} // namespace nfa

#include "nfa/tokenizer.hpp"

#include <cctype>
#include <fstream>

#include "nfa/errors.hpp"

namespace nfa {

namespace {

bool is_token_char(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

char to_lower_ascii(unsigned char c) {
    if (c >= 'A' && c <= 'Z') {
        return static_cast<char>(c - 'A' + 'a');
    }
    return static_cast<char>(c);
}

} // namespace

const StopwordSet& default_stopwords() {
    static const StopwordSet words = {"and", "in", "of", "the", "at", "with", "no", "a", "an"};
    return words;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!stopwords.contains(current)) {
                out.push_back(current);
            }
            current.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_token_char(c)) {
            current.push_back(to_lower_ascii(c));
            continue;
        }
        // Possessive strip: an apostrophe followed by a lone 's' closes the
        // current token without emitting the 's'.
        if (c == '\'' && !current.empty() && i + 1 < text.size() &&
            (text[i + 1] == 's' || text[i + 1] == 'S') &&
            (i + 2 >= text.size() || !is_token_char(static_cast<unsigned char>(text[i + 2])))) {
            ++i;
        }
        flush();
    }
    flush();
    return out;
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::io_error, "cannot open stopword file '" + path + "'");
    }
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        for (const std::string& term : tokenize(line, StopwordSet{})) {
            words.insert(term);
        }
    }
    return words;
}

} // namespace nfa

#include "nfa/correlation.hpp"

#include <fstream>

#include "nfa/errors.hpp"

namespace nfa {

CorrelationProvider CorrelationProvider::from_table(Table table) {
    for (const auto& [pair, value] : table) {
        if (!(value >= -1.0 && value <= 1.0)) {
            raise(ErrorKind::domain_error, "correlation for ('" + pair.first + "', '" + pair.second +
                                               "') outside [-1, 1]");
        }
    }
    CorrelationProvider provider;
    provider.table_backed_ = true;
    provider.table_ = std::move(table);
    return provider;
}

CorrelationProvider CorrelationProvider::from_concept_space(const Vocabulary& vocab,
                                                            const ConceptSpace& space) {
    CorrelationProvider provider;
    provider.vocab_ = &vocab;
    provider.space_ = &space;
    return provider;
}

double CorrelationProvider::operator()(const std::string& label, const std::string& keyword) const {
    if (table_backed_) {
        auto it = table_.find({label, keyword});
        if (it == table_.end()) {
            it = table_.find({keyword, label}); // symmetric lookup
        }
        return it == table_.end() ? 0.0 : it->second;
    }
    int a = vocab_->find(label);
    int b = vocab_->find(keyword);
    if (a < 0 || b < 0 || space_->k == 0) {
        return 0.0;
    }
    return term_correlation(*space_, static_cast<std::size_t>(a), static_cast<std::size_t>(b));
}

CorrelationProvider::Table load_correlation_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::io_error, "cannot open correlation table '" + path + "'");
    }
    CorrelationProvider::Table table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            raise(ErrorKind::io_error, "correlation table '" + path + "' line " + std::to_string(line_no) +
                                           ": expected label<TAB>keyword<TAB>value");
        }
        std::string label = line.substr(0, tab1);
        std::string keyword = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string value_text = line.substr(tab2 + 1);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(value_text, &used);
            while (used < value_text.size() && (value_text[used] == ' ' || value_text[used] == '\t')) {
                ++used;
            }
            if (used != value_text.size()) {
                throw std::invalid_argument("trailing junk");
            }
        } catch (const std::exception&) {
            raise(ErrorKind::io_error, "correlation table '" + path + "' line " + std::to_string(line_no) +
                                           ": bad value '" + value_text + "'");
        }
        if (value < -1.0 || value > 1.0) {
            raise(ErrorKind::io_error, "correlation table '" + path + "' line " + std::to_string(line_no) +
                                           ": value " + value_text + " outside [-1, 1]");
        }
        table[{label, keyword}] = value;
    }
    return table;
}

} // namespace nfa

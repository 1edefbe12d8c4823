#include "nfa/eval.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include "nfa/errors.hpp"

namespace nfa {

std::pair<double, double> precision_recall(const std::vector<ResultKey>& ranked,
                                           const RelevantSet& relevant, int cutoff) {
    if (cutoff < 1) {
        raise(ErrorKind::domain_error, "cutoff must be at least 1");
    }
    std::size_t considered = std::min(ranked.size(), static_cast<std::size_t>(cutoff));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < considered; ++i) {
        if (relevant.contains(ranked[i])) {
            ++hits;
        }
    }
    double precision =
        considered == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(considered);
    double recall =
        relevant.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(relevant.size());
    return {precision, recall};
}

namespace {

double median_ms(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    std::size_t n = samples.size();
    if (n == 0) {
        return 0.0;
    }
    if (n % 2 == 1) {
        return samples[n / 2];
    }
    return 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

bool same_results(const std::vector<ScoredElement>& a, const std::vector<ScoredElement>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].dewey != b[i].dewey || a[i].doc != b[i].doc ||
            a[i].final_score != b[i].final_score || a[i].value != b[i].value ||
            a[i].correlation != b[i].correlation) {
            return false;
        }
    }
    return true;
}

struct TimedRun {
    QueryOutcome outcome;
    double ms_median = 0.0;
};

TimedRun run_repeated(const IndexArtifact& index, const std::string& text, const QueryConfig& cfg,
                      int repetitions, const CorrelationProvider& provider) {
    TimedRun run;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
        auto start = std::chrono::steady_clock::now();
        QueryOutcome outcome = nfa_query_detailed(index, text, cfg, provider);
        auto stop = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        if (rep == 0) {
            run.outcome = std::move(outcome);
        } else if (!same_results(run.outcome.results, outcome.results)) {
            raise(ErrorKind::domain_error,
                  "repeated runs of the same query returned different top-K lists");
        }
    }
    run.ms_median = median_ms(std::move(samples));
    return run;
}

} // namespace

EvalReport timing_compare(const IndexArtifact& index, const std::vector<EvalQuery>& queries,
                          const QueryConfig& cfg, int repetitions, const CorrelationProvider& provider,
                          const Qrels* qrels) {
    if (repetitions < 3) {
        raise(ErrorKind::config_error, "timing comparison needs at least 3 repetitions");
    }
    cfg.validate();
    EvalReport report;
    report.repetitions = repetitions;

    QueryConfig filtered_cfg = cfg;
    filtered_cfg.filter_enabled = true;
    QueryConfig unfiltered_cfg = cfg;
    unfiltered_cfg.filter_enabled = false;

    double precision_sum = 0.0;
    double recall_sum = 0.0;
    std::size_t scored_queries = 0;
    for (const EvalQuery& query : queries) {
        QueryEval qe;
        qe.id = query.id;
        qe.text = query.text;
        try {
            TimedRun filtered = run_repeated(index, query.text, filtered_cfg, repetitions, provider);
            TimedRun unfiltered = run_repeated(index, query.text, unfiltered_cfg, repetitions, provider);
            qe.candidates_filtered = filtered.outcome.candidate_count;
            qe.candidates_unfiltered = unfiltered.outcome.candidate_count;
            qe.median_ms_filtered = filtered.ms_median;
            qe.median_ms_unfiltered = unfiltered.ms_median;
            qe.results_filtered = filtered.outcome.results.size();
            if (qrels != nullptr) {
                std::vector<ResultKey> ranked;
                ranked.reserve(filtered.outcome.results.size());
                for (const ScoredElement& e : filtered.outcome.results) {
                    ranked.emplace_back(index.document_name(e.doc), e.dewey.str());
                }
                RelevantSet empty;
                auto it = qrels->by_query.find(query.id);
                const RelevantSet& relevant = it == qrels->by_query.end() ? empty : it->second;
                auto [p, r] = precision_recall(ranked, relevant, cfg.top_k);
                qe.precision = p;
                qe.recall = r;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::empty_query) {
                throw;
            }
            qe.empty_query = true;
        }
        precision_sum += qe.precision;
        recall_sum += qe.recall;
        ++scored_queries;
        report.queries.push_back(std::move(qe));
    }
    if (scored_queries > 0) {
        report.mean_precision = precision_sum / static_cast<double>(scored_queries);
        report.mean_recall = recall_sum / static_cast<double>(scored_queries);
    }
    return report;
}

namespace {

// Shared TSV reading: drops comments and blank lines, splits on tabs.
std::vector<std::vector<std::string>> read_tsv(const std::string& path, std::size_t min_fields,
                                               const char* what) {
    std::ifstream in(path);
    if (!in) {
        raise(ErrorKind::io_error, std::string("cannot open ") + what + " file '" + path + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
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
        if (fields.size() < min_fields) {
            raise(ErrorKind::io_error, std::string(what) + " file '" + path + "' line " +
                                           std::to_string(line_no) + ": expected " +
                                           std::to_string(min_fields) + " tab-separated fields");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

std::vector<EvalQuery> load_queries(const std::string& path) {
    std::vector<EvalQuery> queries;
    for (auto& row : read_tsv(path, 2, "query")) {
        queries.push_back({std::move(row[0]), std::move(row[1])});
    }
    return queries;
}

Qrels load_qrels(const std::string& path) {
    Qrels qrels;
    for (auto& row : read_tsv(path, 3, "qrels")) {
        DeweyId::parse(row[2]); // validates the Dewey id
        qrels.by_query[row[0]].insert({std::move(row[1]), std::move(row[2])});
    }
    return qrels;
}

void write_report(const EvalReport& report, std::ostream& out) {
    out << "# repetitions\t" << report.repetitions << '\n';
    out << "# query_id\tprecision\trecall\tA_filtered\tA_unfiltered\tmedian_ms_filtered\t"
           "median_ms_unfiltered\tresults\n";
    for (const QueryEval& qe : report.queries) {
        if (qe.empty_query) {
            out << qe.id << "\t-\t-\t0\t0\t-\t-\t0\n";
            continue;
        }
        out << qe.id << '\t' << format_float(qe.precision) << '\t' << format_float(qe.recall) << '\t'
            << qe.candidates_filtered << '\t' << qe.candidates_unfiltered << '\t'
            << format_float(qe.median_ms_filtered) << '\t' << format_float(qe.median_ms_unfiltered)
            << '\t' << qe.results_filtered << '\n';
    }
    out << "MEAN\t" << format_float(report.mean_precision) << '\t' << format_float(report.mean_recall)
        << '\n';
}

} // namespace nfa

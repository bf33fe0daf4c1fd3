#ifndef ARTEXPLAIN_REPORT_HPP
#define ARTEXPLAIN_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "artexplain/eval.hpp"

// Table rendering for evaluation runs: CSV (RFC-4180), Markdown pipe
// tables and round-trippable JSON, plus side-by-side run comparison.

namespace artexplain {

enum class ReportFormat { CSV, Markdown, JSON };

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "csv") return ReportFormat::CSV;
    if (s == "md" || s == "markdown") return ReportFormat::Markdown;
    if (s == "json") return ReportFormat::JSON;
    throw std::invalid_argument("unknown report format: " + s);
}

namespace detail {

inline std::string one_decimal(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::vector<std::string> report_header(const std::vector<int>& windows) {
    std::vector<std::string> h = {"group",    "count",      "bleu",       "rouge1",
                                  "rouge2",   "rougeL",     "bertscore",  "ec_exact",
                                  "ec_partial", "entity_f1"};
    for (int n : windows)
        h.push_back("ecooc_n=" + (n == kInfiniteWindow ? std::string("inf") : std::to_string(n)));
    h.push_back("avg_length");
    return h;
}

inline std::vector<std::string> report_row(const GroupKey& key, const GroupAggregate& agg,
                                           const std::vector<int>& windows) {
    std::vector<std::string> row = {group_label(key),
                                    std::to_string(agg.count),
                                    one_decimal(agg.mean.bleu),
                                    one_decimal(agg.mean.rouge1),
                                    one_decimal(agg.mean.rouge2),
                                    one_decimal(agg.mean.rougeL),
                                    "n/a",
                                    one_decimal(agg.mean.ec_exact),
                                    one_decimal(agg.mean.ec_partial),
                                    one_decimal(agg.mean.entity_f1)};
    for (int n : windows) {
        auto it = agg.mean.ecooc.find(n);
        row.push_back(it == agg.mean.ecooc.end() ? "n/a" : one_decimal(it->second));
    }
    row.push_back(std::to_string(agg.mean.gen_len));
    return row;
}

inline std::vector<int> report_windows(const EvalRun& run) {
    if (run.aggregates.empty()) return default_windows();
    std::vector<int> w;
    bool has_inf = false;
    for (const auto& [n, _] : run.aggregates.begin()->second.mean.ecooc) {
        if (n == kInfiniteWindow) has_inf = true;
        else w.push_back(n);
    }
    std::sort(w.begin(), w.end());
    if (has_inf) w.push_back(kInfiniteWindow);
    return w;
}

}  // namespace detail

/// Renders the aggregate table. Group order is fixed: with-title before
/// without-title, unseen before seen. Scores carry one decimal, the
/// average length is an integer, and footer rows report the no-entity /
/// no-pair reference counts.
inline std::string emit_report(const EvalRun& run, ReportFormat format) {
    if (format == ReportFormat::JSON) return eval_run_to_json(run).dump(2) + "\n";

    std::vector<int> windows = detail::report_windows(run);
    std::vector<std::vector<std::string>> rows;
    rows.push_back(detail::report_header(windows));
    for (const auto& [key, agg] : run.aggregates)
        rows.push_back(detail::report_row(key, agg, windows));
    std::size_t ncols = rows[0].size();
    auto footer = [&](const std::string& name, std::size_t value) {
        std::vector<std::string> row(ncols, "");
        row[0] = name;
        row[1] = std::to_string(value);
        rows.push_back(row);
    };
    footer("no_entity_references", run.no_entity_count);
    footer("no_pair_references", run.no_pair_count);

    std::ostringstream out;
    if (format == ReportFormat::CSV) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ",";
                out << detail::csv_quote(row[i]);
            }
            out << "\r\n";
        }
    } else {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out << "|";
            for (const auto& cell : rows[r]) out << " " << cell << " |";
            out << "\n";
            if (r == 0) {
                out << "|";
                for (std::size_t i = 0; i < ncols; ++i) out << " --- |";
                out << "\n";
            }
        }
    }
    return out.str();
}

/// Side-by-side aggregate table for several runs over the same
/// instruction set, with per-run with-title minus without-title deltas.
inline std::string compare_runs(const std::vector<EvalRun>& runs,
                                ReportFormat format = ReportFormat::Markdown) {
    if (runs.size() < 2)
        throw std::invalid_argument("compare_runs requires at least two runs");
    std::set<std::string> base_ids;
    for (const auto& [id, _] : runs[0].per_pair) base_ids.insert(id);
    for (std::size_t r = 1; r < runs.size(); ++r) {
        std::set<std::string> ids;
        for (const auto& [id, _] : runs[r].per_pair) ids.insert(id);
        if (ids != base_ids)
            throw std::invalid_argument("compare_runs: instruction sets differ between runs");
    }

    struct Metric {
        const char* name;
        double (*get)(const MetricVector&);
    };
    static const std::vector<Metric> metrics = {
        {"bleu", [](const MetricVector& v) { return v.bleu; }},
        {"rouge1", [](const MetricVector& v) { return v.rouge1; }},
        {"rouge2", [](const MetricVector& v) { return v.rouge2; }},
        {"rougeL", [](const MetricVector& v) { return v.rougeL; }},
        {"ec_exact", [](const MetricVector& v) { return v.ec_exact; }},
        {"ec_partial", [](const MetricVector& v) { return v.ec_partial; }},
        {"entity_f1", [](const MetricVector& v) { return v.entity_f1; }},
    };

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"group", "metric"};
    for (const auto& run : runs)
        header.push_back(run.model_name.empty() ? run.run_id : run.model_name);
    rows.push_back(header);

    std::set<GroupKey> keys;
    for (const auto& run : runs)
        for (const auto& [key, _] : run.aggregates) keys.insert(key);
    for (const auto& key : keys) {
        for (const auto& m : metrics) {
            std::vector<std::string> row = {group_label(key), m.name};
            for (const auto& run : runs) {
                auto it = run.aggregates.find(key);
                row.push_back(it == run.aggregates.end() ? "n/a"
                                                         : detail::one_decimal(m.get(it->second.mean)));
            }
            rows.push_back(row);
        }
    }
    // Title-effect deltas: with_title minus without_title per split.
    std::set<Split> splits;
    for (const auto& key : keys) splits.insert(key.split);
    for (Split split : splits) {
        GroupKey with{true, split}, without{false, split};
        bool have = true;
        for (const auto& run : runs)
            if (!run.aggregates.count(with) || !run.aggregates.count(without)) have = false;
        if (!have) continue;
        for (const auto& m : metrics) {
            std::vector<std::string> row = {"delta_title/" + group_label(without).substr(14),
                                            m.name};
            for (const auto& run : runs)
                row.push_back(detail::one_decimal(m.get(run.aggregates.at(with).mean) -
                                                  m.get(run.aggregates.at(without).mean)));
            rows.push_back(row);
        }
    }

    std::ostringstream out;
    if (format == ReportFormat::CSV) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ",";
                out << detail::csv_quote(row[i]);
            }
            out << "\r\n";
        }
    } else {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out << "|";
            for (const auto& cell : rows[r]) out << " " << cell << " |";
            out << "\n";
            if (r == 0) {
                out << "|";
                for (std::size_t i = 0; i < rows[0].size(); ++i) out << " --- |";
                out << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace artexplain

#endif  // ARTEXPLAIN_REPORT_HPP

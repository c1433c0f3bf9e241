#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "backlog/adjudicator.hpp"

namespace backlog {

namespace {

constexpr std::string_view kColumns[] = {
    "lambda",       "production", "t",        "candidate", "candidate_value", "oracle_value",
    "oracle_bound", "gs_value",   "abs_dev",  "rel_dev",   "flags",
};

constexpr std::string_view kSummaryColumns[] = {
    "candidate", "verdict", "max_abs_dev", "max_rel_dev", "points_compared", "undefined_points",
};

// A cell is either a bare token (number, null) or a string needing quotes in JSON.
struct Cell {
    std::string text;
    bool is_string = false;
};

Cell number(double v) { return {format_double(v), false}; }

Cell json_number(double v) { return std::isfinite(v) ? number(v) : Cell{"null", false}; }

Cell optional_number(const std::optional<double>& v, ReportFormat format) {
    if (!v) return {format == ReportFormat::Json ? "null" : "", false};
    return format == ReportFormat::Json ? json_number(*v) : number(*v);
}

Cell text(std::string_view s) { return {std::string(s), true}; }

Cell integer(std::int64_t v) { return {std::to_string(v), false}; }

// Identifiers and flag names are plain ASCII without quotes or backslashes.
std::string emit(std::span<const std::string_view> columns, const std::vector<std::vector<Cell>>& rows,
                 ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Csv) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i != 0) out += ',';
            out += columns[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i != 0) out += ',';
                out += row[i].text;
            }
            out += '\n';
        }
        return out;
    }

    out += '[';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += r == 0 ? "\n  {" : ",\n  {";
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i != 0) out += ", ";
            out += '"';
            out += columns[i];
            out += "\": ";
            if (rows[r][i].is_string) {
                out += '"';
                out += rows[r][i].text;
                out += '"';
            } else {
                out += rows[r][i].text;
            }
        }
        out += '}';
    }
    out += rows.empty() ? "]\n" : "\n]\n";
    return out;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string render_report(const ComparisonReport& report, ReportFormat format) {
    const bool json = format == ReportFormat::Json;
    auto num = [json](double v) { return json ? json_number(v) : number(v); };

    std::vector<std::vector<Cell>> rows;
    rows.reserve(report.rows.size());
    for (const auto& r : report.rows) {
        rows.push_back({
            num(r.lambda),
            integer(r.production),
            num(r.t),
            text(candidate_name(r.candidate)),
            num(r.candidate_value),
            num(r.oracle_value),
            num(r.oracle_bound),
            optional_number(r.gs_value, format),
            num(r.abs_dev),
            num(r.rel_dev),
            text(flags_to_string(r.flags)),
        });
    }
    return emit(kColumns, rows, format);
}

std::string render_summary(const ComparisonReport& report, ReportFormat format) {
    const bool json = format == ReportFormat::Json;
    auto num = [json](double v) { return json ? json_number(v) : number(v); };

    std::vector<std::vector<Cell>> rows;
    for (const auto& s : report.summary) {
        rows.push_back({
            text(candidate_name(s.candidate)),
            text(verdict_name(s.verdict)),
            num(s.max_abs_dev),
            num(s.max_rel_dev),
            integer(s.points_compared),
            integer(s.undefined_points),
        });
    }
    return emit(kSummaryColumns, rows, format);
}

}  // namespace backlog

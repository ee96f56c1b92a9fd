// Reduction of scan CSVs into a transition report: per-temperature drop
// depth 1 - min F over the coupling axis, the coupling attaining the
// minimum, how many cells have an indicator above threshold, and, for
// phase-scan data, the temperature at which the geometric phase steps from
// pi to 0. Emits an aligned text table and one JSON object per line.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uhlmann/errors.hpp"
#include "uhlmann/scan.hpp"

namespace uhlmann {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_field(const std::string& field, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double x = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return x;
    } catch (const std::exception&) {
        throw MalformedCsv("line " + std::to_string(line_no) +
                           ": expected a number, got '" + field + "'");
    }
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

struct Row {
    double param = 0.0;
    double T = 0.0;
    std::optional<double> F;
    std::optional<double> delta;
    std::optional<double> phase;
    bool failed = false;
};

std::string two_sided(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

} // namespace

ScanSummary summarize(const std::string& csv_path, const SummaryOptions& options) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + csv_path);

    std::string line;
    if (!std::getline(in, line)) throw MalformedCsv("empty file " + csv_path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 3 || (header[0] != "param" && header[0] != "V") ||
        header[1] != "T" || header.back() != "error") {
        throw MalformedCsv("header does not look like scan output: " + line);
    }
    const int f_col = find_column(header, "F") >= 0 ? find_column(header, "F")
                                                    : find_column(header, "F_dV");
    int delta_col = find_column(header, "delta");
    if (delta_col < 0) delta_col = find_column(header, "delta_dT");
    const int phase_col = find_column(header, "phase");
    const int error_col = static_cast<int>(header.size()) - 1;

    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw MalformedCsv("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        }
        Row row;
        row.param = parse_field(fields[0], line_no);
        row.T = parse_field(fields[1], line_no);
        row.failed = !fields[error_col].empty();
        if (!row.failed) {
            if (f_col >= 0) row.F = parse_field(fields[f_col], line_no);
            if (delta_col >= 0) row.delta = parse_field(fields[delta_col], line_no);
            if (phase_col >= 0) row.phase = parse_field(fields[phase_col], line_no);
        }
        rows.push_back(row);
    }
    if (rows.empty()) throw MalformedCsv("no data rows in " + csv_path);
    if (in.bad()) throw IoError("failed reading " + csv_path);

    // Group rows per temperature, keeping first-appearance order.
    std::vector<double> temps;
    std::vector<std::vector<const Row*>> groups;
    for (const Row& row : rows) {
        std::size_t g = 0;
        while (g < temps.size() && temps[g] != row.T) ++g;
        if (g == temps.size()) {
            temps.push_back(row.T);
            groups.emplace_back();
        }
        groups[g].push_back(&row);
    }

    ScanSummary summary;
    for (std::size_t g = 0; g < temps.size(); ++g) {
        TemperatureSummary ts;
        ts.T = temps[g];
        for (const Row* row : groups[g]) {
            if (row->failed) {
                ++ts.failed;
                continue;
            }
            ++ts.valid;
            if (row->F && (!ts.drop || 1.0 - *row->F > *ts.drop)) {
                ts.drop = 1.0 - *row->F;
                ts.argmin = row->param;
            }
            if (row->delta && *row->delta > options.delta_threshold) ++ts.positive_delta;
        }
        summary.by_temperature.push_back(ts);
    }

    // Phase steps: per coupling value, walk temperatures in ascending order
    // and record each pi -> 0 branch change between adjacent valid rows.
    if (phase_col >= 0) {
        std::vector<double> params;
        for (const Row& row : rows) {
            if (std::find(params.begin(), params.end(), row.param) == params.end()) {
                params.push_back(row.param);
            }
        }
        for (const double p : params) {
            std::vector<const Row*> branch;
            for (const Row& row : rows) {
                if (row.param == p && !row.failed && row.phase) branch.push_back(&row);
            }
            std::sort(branch.begin(), branch.end(),
                      [](const Row* a, const Row* b) { return a->T < b->T; });
            for (std::size_t i = 1; i < branch.size(); ++i) {
                const bool was_pi = std::abs(*branch[i - 1]->phase) > kPi / 2;
                const bool is_zero = std::abs(*branch[i]->phase) < kPi / 2;
                if (was_pi && is_zero) {
                    PhaseStep step;
                    step.param = p;
                    step.T_lo = branch[i - 1]->T;
                    step.T_hi = branch[i]->T;
                    step.T_U = 0.5 * (step.T_lo + step.T_hi);
                    summary.phase_steps.push_back(step);
                }
            }
        }
    }

    // Aligned text table.
    std::string text;
    {
        char buf[160];
        std::size_t failed_total = 0;
        for (const Row& row : rows) failed_total += row.failed ? 1u : 0u;
        std::snprintf(buf, sizeof(buf), "%zu rows, %zu temperatures, %zu failed cells\n",
                      rows.size(), temps.size(), failed_total);
        text += buf;
        std::snprintf(buf, sizeof(buf), "%12s %12s %12s %10s %7s %7s\n", "T", "D(T)",
                      "argmin", "delta>thr", "valid", "failed");
        text += buf;
        for (const TemperatureSummary& ts : summary.by_temperature) {
            std::snprintf(buf, sizeof(buf), "%12s %12s %12s %10d %7d %7d\n",
                          two_sided(ts.T).c_str(),
                          ts.drop ? two_sided(*ts.drop).c_str() : "-",
                          ts.argmin ? two_sided(*ts.argmin).c_str() : "-",
                          ts.positive_delta, ts.valid, ts.failed);
            text += buf;
        }
        for (const PhaseStep& step : summary.phase_steps) {
            std::snprintf(buf, sizeof(buf),
                          "phase step at param %s: T_U = %s (between %s and %s)\n",
                          two_sided(step.param).c_str(), two_sided(step.T_U).c_str(),
                          two_sided(step.T_lo).c_str(), two_sided(step.T_hi).c_str());
            text += buf;
        }
        if (phase_col >= 0 && summary.phase_steps.empty()) {
            text += "no phase step found\n";
        }
    }
    summary.text = text;

    // JSON lines: one object per temperature, then one per phase step.
    {
        std::string jsonl;
        for (const TemperatureSummary& ts : summary.by_temperature) {
            nlohmann::json j;
            j["type"] = "temperature";
            j["T"] = ts.T;
            if (ts.drop) j["drop"] = *ts.drop;
            if (ts.argmin) j["argmin"] = *ts.argmin;
            j["positive_delta"] = ts.positive_delta;
            j["valid"] = ts.valid;
            j["failed"] = ts.failed;
            jsonl += j.dump();
            jsonl += '\n';
        }
        for (const PhaseStep& step : summary.phase_steps) {
            nlohmann::json j;
            j["type"] = "phase_step";
            j["param"] = step.param;
            j["T_lo"] = step.T_lo;
            j["T_hi"] = step.T_hi;
            j["T_U"] = step.T_U;
            jsonl += j.dump();
            jsonl += '\n';
        }
        summary.jsonl = jsonl;
    }
    return summary;
}

} // namespace uhlmann

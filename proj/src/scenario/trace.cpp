#include "dse/scenario/trace.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dse/errors.hpp"
#include "dse/io.hpp"

namespace dse {

std::size_t ScenarioTrace::column_of(FilterKind kind) const {
    const auto it = std::find(filters.begin(), filters.end(), kind);
    if (it == filters.end()) {
        throw ConfigError("trace: filter '" + std::string(filter_name(kind)) + "' was not run");
    }
    return static_cast<std::size_t>(it - filters.begin());
}

std::vector<std::string> trace_header(const std::vector<FilterKind>& filters) {
    std::vector<std::string> cols{"t", "x1_true", "x2_true", "x3_true", "x4_true", "y_clean", "y_attacked"};
    for (FilterKind kind : filters) {
        const std::string f(filter_name(kind));
        for (const char* suffix : {"_x1", "_x2", "_x3", "_x4", "_g", "_d", "_chi2_alarm", "_euclid_alarm"}) {
            cols.push_back(f + suffix);
        }
    }
    return cols;
}

namespace {

// Shortest representation that parses back to the identical double.
void append_number(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

std::vector<double> row_values(const TraceRow& row) {
    std::vector<double> v{row.t, row.x_true(0), row.x_true(1), row.x_true(2), row.x_true(3), row.y_clean,
                          row.y_attacked};
    for (const FilterStep& f : row.filters) {
        v.insert(v.end(), {f.estimate(0), f.estimate(1), f.estimate(2), f.estimate(3), f.g, f.d,
                           f.chi2_alarm ? 1.0 : 0.0, f.euclid_alarm ? 1.0 : 0.0});
    }
    return v;
}

std::string join_header(const std::vector<std::string>& cols) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i == 0 ? "" : ",") + cols[i];
    }
    return out + "\n";
}

} // namespace

std::string trace_to_csv(const ScenarioTrace& trace) {
    std::string out = join_header(trace_header(trace.filters));
    for (const TraceRow& row : trace.rows) {
        const auto values = row_values(row);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i != 0) {
                out += ',';
            }
            append_number(out, values[i]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::string trace_to_jsonl(const ScenarioTrace& trace) {
    const auto cols = trace_header(trace.filters);
    std::string out;
    for (const TraceRow& row : trace.rows) {
        const auto values = row_values(row);
        nlohmann::ordered_json rec;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            rec[cols[i]] = values[i];
        }
        out += rec.dump() + "\n";
    }
    return out;
}

} // namespace

void export_trace(const ScenarioTrace& trace, const std::string& path, TraceFormat format) {
    write_file_atomic(path, format == TraceFormat::csv ? trace_to_csv(trace) : trace_to_jsonl(trace));
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw IoError("trace: bad number '" + s + "' on line " + std::to_string(line_no));
    }
    return value;
}

} // namespace

ScenarioTrace parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("trace: missing header");
    }
    const auto cols = split(line, ',');
    const std::vector<std::string> base = trace_header({});
    if (cols.size() < base.size() || !std::equal(base.begin(), base.end(), cols.begin()) ||
        (cols.size() - base.size()) % 8 != 0) {
        throw IoError("trace: unexpected header");
    }
    ScenarioTrace trace;
    for (std::size_t c = base.size(); c < cols.size(); c += 8) {
        const std::string& col = cols[c];
        const auto kind = parse_filter(col.substr(0, col.find('_')));
        if (!kind) {
            throw IoError("trace: unknown filter column '" + col + "'");
        }
        trace.filters.push_back(*kind);
    }
    if (cols != trace_header(trace.filters)) {
        throw IoError("trace: unexpected header");
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != cols.size()) {
            throw IoError("trace: wrong column count on line " + std::to_string(line_no));
        }
        std::vector<double> v(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            v[i] = parse_double(cells[i], line_no);
        }
        TraceRow row;
        row.t = v[0];
        row.x_true = StateVector(v[1], v[2], v[3], v[4]);
        row.y_clean = v[5];
        row.y_attacked = v[6];
        for (std::size_t f = 0; f < trace.filters.size(); ++f) {
            const std::size_t o = base.size() + 8 * f;
            FilterStep step;
            step.estimate = StateVector(v[o], v[o + 1], v[o + 2], v[o + 3]);
            step.g = v[o + 4];
            step.d = v[o + 5];
            step.chi2_alarm = v[o + 6] != 0.0;
            step.euclid_alarm = v[o + 7] != 0.0;
            row.filters.push_back(step);
        }
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

ScenarioTrace read_trace_csv(const std::string& path) { return parse_trace_csv(read_file(path)); }

} // namespace dse

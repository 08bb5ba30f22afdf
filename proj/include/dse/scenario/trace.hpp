#pragma once

#include <string>
#include <vector>

#include "dse/filters/estimator.hpp"
#include "dse/machine_model.hpp"

namespace dse {

struct FilterStep {
    StateVector estimate = StateVector::Zero();
    double g = 0.0;
    double d = 0.0;
    bool chi2_alarm = false;
    bool euclid_alarm = false;
};

struct TraceRow {
    double t = 0.0;
    StateVector x_true = StateVector::Zero();
    double y_clean = 0.0;
    double y_attacked = 0.0;
    std::vector<FilterStep> filters; // parallel to ScenarioTrace::filters
};

struct ScenarioTrace {
    std::vector<FilterKind> filters;
    std::vector<TraceRow> rows;

    // Index of `kind` in `filters`; throws ConfigError if it was not run.
    std::size_t column_of(FilterKind kind) const;
};

enum class TraceFormat { csv, jsonl };

/// Column names in file order: t, x1_true..x4_true, y_clean, y_attacked, then
/// for each filter F: F_x1..F_x4, F_g, F_d, F_chi2_alarm, F_euclid_alarm.
std::vector<std::string> trace_header(const std::vector<FilterKind>& filters);

std::string trace_to_csv(const ScenarioTrace& trace);

/// Atomic write (temp file + rename). Throws IoError.
void export_trace(const ScenarioTrace& trace, const std::string& path, TraceFormat format);

ScenarioTrace parse_trace_csv(const std::string& text);
ScenarioTrace read_trace_csv(const std::string& path);

} // namespace dse

#pragma once

#include <string>

#include "hmckit/diagnostics.hpp"
#include "hmckit/samplers.hpp"

namespace hmckit {

// Trace CSV layout: header "index,q1,...,qd,log_density,accepted"; one row
// per state; doubles printed with 17 significant digits so parsing the file
// recovers the exact values; accepted as 0/1; LF line endings.
void write_trace_csv(const Trace& trace, const std::string& path);

// Inverse of write_trace_csv. The model/sampler names and the config
// snapshot are not part of the file format and come back empty.
Trace read_trace_csv(const std::string& path);

// Report as flat key = value text.
std::string report_kv_text(const DiagnosticsReport& rep);
void write_report_txt(const DiagnosticsReport& rep, const std::string& path);

// Report as a one-row CSV (fixed column set shared with comparison tables).
std::string report_csv_header();
std::string report_csv_row(const DiagnosticsReport& rep);
void write_report_csv(const DiagnosticsReport& rep, const std::string& path);

}  // namespace hmckit

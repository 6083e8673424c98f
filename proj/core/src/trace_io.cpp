#include "hmckit/trace_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hmckit/format.hpp"

namespace hmckit {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& field, const std::string& path,
                    std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    parse_fail(path, line, "bad numeric field '" + field + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);

  std::string header = "index";
  for (int j = 1; j <= trace.dim; ++j) header += ",q" + std::to_string(j);
  header += ",log_density,accepted\n";
  out << header;

  const std::size_t d = static_cast<std::size_t>(trace.dim);
  std::string row;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    row = std::to_string(i);
    const double* r = trace.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      row += ',';
      row += format_g17(r[j]);
    }
    row += ',';
    row += format_g17(trace.log_density[i]);
    row += trace.accepted[i] ? ",1\n" : ",0\n";
    out << row;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> head = split_fields(line);
  if (head.size() < 4 || head.front() != "index" ||
      head[head.size() - 2] != "log_density" || head.back() != "accepted") {
    parse_fail(path, 1, "expected header index,q1,...,log_density,accepted");
  }
  const std::size_t d = head.size() - 3;
  for (std::size_t j = 0; j < d; ++j) {
    if (head[j + 1] != "q" + std::to_string(j + 1)) {
      parse_fail(path, 1, "unexpected column '" + head[j + 1] + "'");
    }
  }

  Trace trace;
  trace.dim = static_cast<int>(d);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != d + 3) {
      parse_fail(path, lineno, "expected " + std::to_string(d + 3) + " fields");
    }
    for (std::size_t j = 0; j < d; ++j) {
      trace.states.push_back(parse_double(fields[j + 1], path, lineno));
    }
    trace.log_density.push_back(parse_double(fields[d + 1], path, lineno));
    const std::string& acc = fields[d + 2];
    if (acc != "0" && acc != "1") {
      parse_fail(path, lineno, "accepted flag must be 0 or 1");
    }
    trace.accepted.push_back(acc == "1" ? 1 : 0);
  }
  return trace;
}

namespace {

void append_kv(std::string& out, const std::string& key,
               const std::string& value) {
  out += key;
  out += " = ";
  out += value;
  out += '\n';
}

}  // namespace

std::string report_kv_text(const DiagnosticsReport& rep) {
  std::string out;
  if (!rep.label.empty()) append_kv(out, "label", rep.label);
  append_kv(out, "model", rep.model);
  append_kv(out, "sampler", rep.sampler);
  append_kv(out, "n", std::to_string(rep.n));
  append_kv(out, "dim", std::to_string(rep.dim));
  append_kv(out, "acceptance_rate", format_g17(rep.acceptance));
  append_kv(out, "burnin", std::to_string(rep.burnin));
  append_kv(out, "burnin_mode", rep.burnin_auto ? "auto" : "explicit");
  append_kv(out, "iat", format_g17(rep.iat_monitored));
  append_kv(out, "iat_per_dim", join_csv(rep.iat_per_dim));
  append_kv(out, "monitored_dim", std::to_string(rep.monitored_dim + 1));
  append_kv(out, "lag", std::to_string(rep.lag));
  append_kv(out, "lag_mode", rep.lag_auto ? "auto" : "explicit");
  append_kv(out, "effective_sample", format_g17(rep.ess_value));
  append_kv(out, "sampling_seconds", format_g17(rep.sampling_seconds));
  append_kv(out, "seconds_per_effective_sample",
            format_g17(rep.seconds_per_ess));
  for (std::size_t j = 0; j < rep.post_summary.size(); ++j) {
    const DimSummary& s = rep.post_summary[j];
    const std::string tag = "q" + std::to_string(j + 1);
    append_kv(out, tag + "_mean", format_g17(s.mean));
    append_kv(out, tag + "_variance", format_g17(s.variance));
    append_kv(out, tag + "_q025", format_g17(s.q025));
    append_kv(out, tag + "_median", format_g17(s.q500));
    append_kv(out, tag + "_q975", format_g17(s.q975));
  }
  if (!rep.warning.empty()) append_kv(out, "warning", rep.warning);
  return out;
}

void write_report_txt(const DiagnosticsReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << report_kv_text(rep);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string report_csv_header() {
  return "label,model,sampler,n,acceptance_rate,burnin,iat,lag,"
         "effective_sample,sampling_seconds,seconds_per_effective_sample,"
         "warning\n";
}

std::string report_csv_row(const DiagnosticsReport& rep) {
  std::string out;
  out += rep.label + ',' + rep.model + ',' + rep.sampler + ',';
  out += std::to_string(rep.n) + ',';
  out += format_g17(rep.acceptance) + ',';
  out += std::to_string(rep.burnin) + ',';
  out += format_g17(rep.iat_monitored) + ',';
  out += std::to_string(rep.lag) + ',';
  out += format_g17(rep.ess_value) + ',';
  out += format_g17(rep.sampling_seconds) + ',';
  out += format_g17(rep.seconds_per_ess) + ',';
  out += rep.warning;
  out += '\n';
  return out;
}

void write_report_csv(const DiagnosticsReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << report_csv_header() << report_csv_row(rep);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hmckit

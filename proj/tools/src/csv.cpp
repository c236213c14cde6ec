#include "fluxsim/cli/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace fluxsim::cli {
namespace {

void put(std::ostream& out, double v) { out << format_double(v); }

void put_vector(std::ostream& out, const SpaceVector& v) {
  put(out, v.x);
  out << ',';
  put(out, v.y);
}

void write_truth_columns(std::ostream& out, const TraceRecord& r) {
  put(out, r.t);
  out << ',';
  put_vector(out, r.u_s);
  out << ',';
  put_vector(out, r.i_s);
  out << ',';
  put_vector(out, r.i_r);
  out << ',';
  put(out, r.omega);
  out << ',';
  put_vector(out, r.psi_s);
  out << ',';
  put_vector(out, r.psi_r);
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') {
      q += '"';
    }
    q += c;
  }
  return q + '"';
}

void put_metrics(std::ostream& out, const ErrorMetrics& m) {
  put(out, m.rms);
  out << ',';
  put(out, m.relative_rms);
  out << ',';
  put(out, m.max_abs);
  out << ',';
  put(out, m.final_offset);
  out << ',';
  put(out, m.drift_slope);
  out << ',' << (m.diverged ? "true" : "false") << ',';
  put(out, m.peak_true);
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) {
    throw std::runtime_error("cannot format number");
  }
  return {buffer.data(), ptr};
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    write_truth_columns(out, r);
    out << '\n';
  }
}

void write_scenario_csv(std::ostream& out, const ScenarioResult& result) {
  const auto& records = result.truth.records;
  if (records.size() != result.estimates.size()) {
    throw std::invalid_argument("trace and estimate lengths differ");
  }
  out << kScenarioTraceHeader << '\n';
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& est = result.estimates[k];
    write_truth_columns(out, records[k]);
    out << ',';
    put_vector(out, est.psi_s_hat);
    out << ',';
    if (est.psi_r_hat) {
      put_vector(out, *est.psi_r_hat);
    } else {
      out << ',';
    }
    const SpaceVector err = est.psi_s_hat - records[k].psi_s;
    out << ',';
    put_vector(out, err);
    out << ',';
    put(out, err.magnitude());
    out << '\n';
  }
}

void write_metrics_csv(std::ostream& out, std::string_view name, const ErrorMetrics& metrics) {
  out << kMetricsHeader << '\n' << quote(name) << ',';
  put_metrics(out, metrics);
  out << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepAxis& axis, std::span<const SweepCell> cells) {
  out << kSweepHeader << '\n';
  for (const auto& cell : cells) {
    out << quote(axis.parameter) << ',';
    put(out, cell.value);
    out << ',';
    if (cell.metrics) {
      put_metrics(out, *cell.metrics);
    } else {
      out << ",,,,,,";
    }
    out << ',' << quote(cell.error) << '\n';
  }
}

}  // namespace fluxsim::cli

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "fluxsim/harness.hpp"

namespace fluxsim::cli {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

inline constexpr std::string_view kTraceHeader = "t,usx,usy,isx,isy,irx,iry,omega,psi_sx,psi_sy,psi_rx,psi_ry";
inline constexpr std::string_view kScenarioTraceHeader =
    "t,usx,usy,isx,isy,irx,iry,omega,psi_sx,psi_sy,psi_rx,psi_ry,est_psi_sx,est_psi_sy,est_psi_rx,est_psi_ry,err_x,"
    "err_y,err_mag";
inline constexpr std::string_view kMetricsHeader =
    "name,rms,relative_rms,max_abs,final_offset,drift_slope,diverged,peak_true";
inline constexpr std::string_view kSweepHeader =
    "parameter,value,rms,relative_rms,max_abs,final_offset,drift_slope,diverged,peak_true,error";

/// Ground-truth trace, one row per record.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Truth, estimate and error columns. Absent rotor-flux estimates are empty fields.
void write_scenario_csv(std::ostream& out, const ScenarioResult& result);

void write_metrics_csv(std::ostream& out, std::string_view name, const ErrorMetrics& metrics);

void write_sweep_csv(std::ostream& out, const SweepAxis& axis, std::span<const SweepCell> cells);

}  // namespace fluxsim::cli

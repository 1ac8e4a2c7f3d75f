// SPDX-License-Identifier: Apache-2.0
// Machine-readable reports shared by the command line tool and the tests.
#pragma once

#include <string>

#include <json.hpp>

#include "fperr/abstraction.hpp"
#include "fperr/shadow.hpp"

namespace fperr {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct AnalysisRun {
  IncrementalResult result;
  double seconds = 0.0;  // wall clock for the whole run
};

/// run_incremental plus a stopwatch.
AnalysisRun analyze(const ExprDag& dag, const AnalysisConfig& cfg);

nlohmann::json config_json(const AnalysisConfig& cfg);
nlohmann::json cut_report_json(const CutReport& r);
nlohmann::json sample_json(const SampleReport& s);

/// {"schema", "tool", "source", "config", "warnings", "outputs": [...]}.
/// Every output carries abs_error_bound, converged, function_range,
/// op_count, analysis_seconds, abstraction_rounds and optimizer_stats.
nlohmann::json report_json(const AnalysisRun& run, const AnalysisConfig& cfg,
                           const std::string& source);

/// Same report with every wall-clock field dropped, for comparing runs.
nlohmann::json without_timing(nlohmann::json report);

/// Short human-readable summary of a report_json value.
std::string report_text(const nlohmann::json& report);

/// sqrt(er^2 + ei^2), rounded upward.
double combine_complex(double er, double ei);

/// Relative L2 error constant of a radix-2 FFT, in units of u.
inline constexpr double kFftRelConst = 30.99;

/// B * N * sqrt(2) * norm_inf with B = 30.99 u (binary64), rounded upward.
double fft_envelope(int points, double norm_inf);

}  // namespace fperr

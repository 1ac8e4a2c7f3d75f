// SPDX-License-Identifier: Apache-2.0
#include "fperr/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace fperr {

using nlohmann::json;

namespace {

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

json opt_json(const OptResult& o) {
  return {{"lower", o.lower},
          {"upper", o.upper},
          {"boxes", o.boxes_processed},
          {"converged", o.converged}};
}

}  // namespace

AnalysisRun analyze(const ExprDag& dag, const AnalysisConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  AnalysisRun r;
  r.result = run_incremental(dag, cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json config_json(const AnalysisConfig& cfg) {
  json j = {{"abstraction_enabled", cfg.abstraction_enabled},
            {"min_depth", cfg.min_depth},
            {"max_depth", cfg.max_depth},
            {"force_depth", nullptr},
            {"max_opcount", cfg.max_opcount},
            {"optimizer_tol", cfg.optimizer_tol},
            {"optimizer_abs_tol", cfg.optimizer_abs_tol},
            {"optimizer_budget", cfg.optimizer_budget},
            {"rng_seed", cfg.rng_seed},
            {"input_rounding", cfg.input_rounding},
            {"abs_around_product", cfg.abs_around_product},
            {"deterministic", cfg.deterministic},
            {"transcendental_factor", cfg.rounding.of(OpKind::sin)}};
  if (cfg.force_depth) j["force_depth"] = *cfg.force_depth;
  // threads is left out on purpose: reports must not depend on it
  return j;
}

json cut_report_json(const CutReport& r) {
  json cuts = json::array();
  for (const CutNode& c : r.cuts) {
    json jc = {{"node", c.node},
               {"label", c.label},
               {"skipped", c.skipped}};
    if (c.skipped) {
      jc["reason"] = c.reason;
    } else {
      jc["variable"] = c.variable;
      jc["range"] = interval_json(c.range);
      jc["error"] = c.error;
      jc["boxes"] = c.boxes;
      jc["converged"] = c.converged;
    }
    cuts.push_back(std::move(jc));
  }
  return {{"round", r.round},
          {"depth", r.depth},
          {"dag_depth_before", r.dag_depth_before},
          {"dag_depth_after", r.dag_depth_after},
          {"cuts", std::move(cuts)}};
}

json sample_json(const SampleReport& s) {
  json j = {{"output", s.output},
            {"n_samples", s.n_samples},
            {"excluded", s.excluded},
            {"seed", s.seed},
            {"max_abs_error", s.max_abs_error},
            {"argmax_point", s.argmax_point}};
  if (s.bound > 0.0) {
    j["bound"] = s.bound;
    j["q_min"] = s.q_min;
    j["q_median"] = s.q_median;
    j["q_max"] = s.q_max;
    j["bits_lost_max"] = s.bits_lost_max;
  }
  return j;
}

json report_json(const AnalysisRun& run, const AnalysisConfig& cfg, const std::string& source) {
  json rounds = json::array();
  for (const CutReport& r : run.result.rounds) rounds.push_back(cut_report_json(r));
  json outs = json::array();
  for (const OutputBound& o : run.result.outputs) {
    const BoundResult& b = o.result;
    outs.push_back({{"name", o.name},
                    {"abs_error_bound", b.bound},
                    {"converged", b.converged},
                    {"function_range", interval_json(b.range)},
                    {"op_count", o.op_count},
                    {"analysis_seconds", run.seconds},
                    {"abstraction_rounds", rounds},
                    {"optimizer_stats",
                     {{"error", opt_json(b.error_opt)},
                      {"range_max", opt_json(b.max_opt)},
                      {"range_min", opt_json(b.min_opt)},
                      {"objective_terms", b.objective_terms},
                      {"adjoint_accumulations", b.adjoint_accumulations}}}});
  }
  return {{"schema", kReportSchema},
          {"tool", std::string("fperr ") + kToolVersion},
          {"source", source},
          {"config", config_json(cfg)},
          {"warnings", run.result.warnings},
          {"outputs", std::move(outs)}};
}

json without_timing(json report) {
  if (report.contains("outputs")) {
    for (json& o : report["outputs"]) o.erase("analysis_seconds");
  }
  if (report.contains("analysis")) report["analysis"] = without_timing(report["analysis"]);
  return report;
}

std::string report_text(const json& report) {
  std::ostringstream os;
  os.precision(6);
  os << report.value("source", std::string{}) << '\n';
  for (const json& o : report.at("outputs")) {
    const auto& r = o.at("function_range");
    os << "  " << o.at("name").get<std::string>() << ": bound "
       << o.at("abs_error_bound").get<double>()
       << (o.at("converged").get<bool>() ? "" : " (not converged)") << ", range ["
       << r[0].get<double>() << ", " << r[1].get<double>()
       << "], ops " << o.at("op_count").get<int>() << ", rounds "
       << o.at("abstraction_rounds").size() << '\n';
  }
  for (const json& w : report.at("warnings")) os << "  warning: " << w.get<std::string>() << '\n';
  return os.str();
}

double combine_complex(double er, double ei) {
  if (!(er >= 0.0) || !(ei >= 0.0)) throw std::invalid_argument("error bounds must be >= 0");
  if (ei == 0.0) return er;
  if (er == 0.0) return ei;
  const Interval a{er}, b{ei};
  return sqrt(a * a + b * b).hi;
}

double fft_envelope(int points, double norm_inf) {
  if (points < 1 || !(norm_inf >= 0.0)) throw std::invalid_argument("bad FFT envelope input");
  const Interval b = Interval{kFftRelConst} * Interval{unit_roundoff(Precision::fl64)};
  return (b * Interval{static_cast<double>(points)} * sqrt(Interval{2.0}) * Interval{norm_inf})
      .hi;
}

}  // namespace fperr

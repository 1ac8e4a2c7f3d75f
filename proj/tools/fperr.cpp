// SPDX-License-Identifier: Apache-2.0
// fperr: analyze, validate, gen, combine.
//
// Exit codes: 0 ok, 1 usage, 2 parse, 3 analysis, 4 soundness violation.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fperr/benchgen.hpp"
#include "fperr/report.hpp"

namespace {

using nlohmann::json;
using namespace fperr;

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kAnalysis = 3, kViolation = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnalysisFlags {
  bool no_abstraction = false;
  std::optional<int> min_depth, max_depth, force_depth;
  std::uint64_t max_opcount = 8000;
  double tol = 1e-3;
  std::int64_t budget = 50000;
  bool input_rounding = false;
  bool unopt = false;
  std::uint64_t seed = 0;
  bool text = false;
  int threads = 1;
  bool deterministic = true;
  double transcendental = 2.0;
};

void add_analysis_flags(CLI::App* app, AnalysisFlags& f) {
  auto* noabs = app->add_flag("--no-abstraction", f.no_abstraction, "solve directly");
  auto* lo = app->add_option("--mindepth", f.min_depth, "abstraction window, lower end");
  auto* hi = app->add_option("--maxdepth", f.max_depth, "abstraction window, upper end");
  auto* force = app->add_option("--force-depth", f.force_depth, "always cut at this depth");
  noabs->excludes(lo)->excludes(hi)->excludes(force);
  force->excludes(lo)->excludes(hi);
  app->add_option("--max-opcount", f.max_opcount, "canonicalization gate");
  app->add_option("--tol", f.tol, "optimizer relative tolerance")->check(CLI::PositiveNumber);
  app->add_option("--budget", f.budget, "optimizer box budget")->check(CLI::PositiveNumber);
  app->add_flag("--input-rounding", f.input_rounding, "inputs carry u|x| rounding error");
  app->add_flag("--unopt", f.unopt, "assemble |adjoint| * |value| instead of |adjoint * value|");
  app->add_option("--seed", f.seed, "rng seed");
  app->add_option("--transcendental-factor", f.transcendental,
                  "rounding factor of exp/log/sin/cos");
  auto* js = app->add_flag("--json", "JSON output (default)");
  auto* tx = app->add_flag("--text", f.text, "plain text output");
  js->excludes(tx);
  app->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1, 1024));
  app->add_flag("--deterministic,!--no-deterministic", f.deterministic,
                "single-worker optimizer (default on)");
}

AnalysisConfig make_config(const AnalysisFlags& f) {
  AnalysisConfig c;
  c.abstraction_enabled = !f.no_abstraction;
  if (f.min_depth) c.min_depth = *f.min_depth;
  if (f.max_depth) c.max_depth = *f.max_depth;
  if (c.min_depth < 1 || c.max_depth < c.min_depth) {
    throw UsageError("need 1 <= --mindepth <= --maxdepth");
  }
  c.force_depth = f.force_depth;
  if (c.force_depth && *c.force_depth < 1) throw UsageError("--force-depth must be >= 1");
  c.max_opcount = f.max_opcount;
  c.optimizer_tol = f.tol;
  c.optimizer_budget = f.budget;
  c.input_rounding = f.input_rounding;
  c.abs_around_product = !f.unopt;
  c.rng_seed = f.seed;
  c.threads = f.threads;
  c.deterministic = f.deterministic;
  try {
    c.rounding = RoundingFactors(f.transcendental);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

int cmd_analyze(const std::string& file, const AnalysisFlags& f) {
  const AnalysisConfig cfg = make_config(f);
  const ExprDag dag = parse_program(read_file(file));
  const json rep = report_json(analyze(dag, cfg), cfg, file);
  std::cout << (f.text ? report_text(rep) : rep.dump(2) + "\n");
  return kOk;
}

struct ValidateFlags {
  std::string bound = "auto";
  std::int64_t n = 10000;
  std::uint64_t sample_seed = 1;
  std::string csv;
};

int cmd_validate(const std::string& file, const AnalysisFlags& f, const ValidateFlags& v) {
  const AnalysisConfig cfg = make_config(f);
  const ExprDag dag = parse_program(read_file(file));
  if (v.n < 1) throw UsageError("-n must be >= 1");

  std::vector<double> bounds;
  json out = {{"schema", kReportSchema},
              {"tool", std::string("fperr ") + kToolVersion},
              {"source", file}};
  if (v.bound == "auto") {
    const json rep = report_json(analyze(dag, cfg), cfg, file);
    for (const json& o : rep["outputs"]) bounds.push_back(o["abs_error_bound"].get<double>());
    out["analysis"] = rep;
  } else {
    double b = 0.0;
    try {
      std::size_t used = 0;
      b = std::stod(v.bound, &used);
      if (used != v.bound.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw UsageError("--bound takes a number or 'auto'");
    }
    if (!(b >= 0.0)) throw UsageError("--bound must be >= 0");
    bounds.assign(dag.outputs().size(), b);
  }

  SampleConfig sc;
  sc.n = v.n;
  sc.seed = v.sample_seed;
  sc.threads = f.threads;
  const auto samples = sample_max_error(dag, sc);
  std::ofstream csv;
  if (!v.csv.empty()) {
    csv.open(v.csv, std::ios::binary);
    if (!csv) throw UsageError("cannot write " + v.csv);
  }
  bool sound = true;
  json outs = json::array();
  for (std::size_t i = 0; i < dag.outputs().size(); ++i) {
    SampleReport prof = relative_profile(dag, dag.outputs()[i].node, bounds[i], sc,
                                         csv.is_open() ? &csv : nullptr);
    json j = sample_json(prof);
    j["bound"] = bounds[i];
    j["max_abs_error"] = samples[i].max_abs_error;
    j["argmax_point"] = samples[i].argmax_point;
    const bool ok = samples[i].max_abs_error <= bounds[i];
    j["sound"] = ok;
    sound = sound && ok;
    outs.push_back(std::move(j));
  }
  out["outputs"] = std::move(outs);
  out["sound"] = sound;
  if (f.text) {
    for (const json& o : out["outputs"]) {
      std::cout << o["output"].get<std::string>() << ": max error "
                << o["max_abs_error"].get<double>() << " vs bound " << o["bound"].get<double>()
                << (o["sound"].get<bool>() ? " ok" : " VIOLATION") << '\n';
    }
  } else {
    std::cout << out.dump(2) << '\n';
  }
  if (!sound) {
    std::cerr << "fperr: soundness violation: sampled error exceeds the bound\n";
    return kViolation;
  }
  return kOk;
}

struct CombineFlags {
  std::string real, imag;
  std::optional<double> er, ei;
  std::optional<int> points;
  double norm = 1.0;
};

int cmd_combine(const CombineFlags& c) {
  json out = json::array();
  std::vector<std::pair<double, double>> pairs;
  std::vector<std::string> names;
  if (c.er || c.ei) {
    if (!c.er || !c.ei || !c.real.empty() || !c.imag.empty()) {
      throw UsageError("give either two reports or both --er and --ei");
    }
    pairs.emplace_back(*c.er, *c.ei);
    names.emplace_back("value");
  } else {
    if (c.real.empty() || c.imag.empty()) throw UsageError("combine needs two reports");
    const json r = read_json(c.real), i = read_json(c.imag);
    const json& ro = r.at("outputs");
    const json& io = i.at("outputs");
    if (ro.size() != io.size() || ro.empty()) {
      std::cerr << "fperr: reports have different outputs\n";
      return kAnalysis;
    }
    for (std::size_t k = 0; k < ro.size(); ++k) {
      pairs.emplace_back(ro[k].at("abs_error_bound").get<double>(),
                         io[k].at("abs_error_bound").get<double>());
      names.push_back(ro[k].at("name").get<std::string>() + "+" +
                      io[k].at("name").get<std::string>());
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    json j = {{"output", names[k]},
              {"real", pairs[k].first},
              {"imag", pairs[k].second},
              {"total", combine_complex(pairs[k].first, pairs[k].second)}};
    if (c.points) {
      const double env = fft_envelope(*c.points, c.norm);
      j["analytical_envelope"] = env;
      j["within_envelope"] = j["total"].get<double>() <= env;
    }
    out.push_back(std::move(j));
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigorous first-order round-off error bounds for straight-line code"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("fperr ") + kToolVersion);

  AnalysisFlags af;
  std::string file;
  auto* analyze_cmd = app.add_subcommand("analyze", "bound the round-off error of a program");
  analyze_cmd->add_option("file", file, "program")->required();
  add_analysis_flags(analyze_cmd, af);

  ValidateFlags vf;
  auto* validate_cmd =
      app.add_subcommand("validate", "compare a bound against sampled binary128 shadow values");
  validate_cmd->add_option("file", file, "program")->required();
  validate_cmd->add_option("--bound", vf.bound, "absolute bound, or 'auto' to analyze first");
  validate_cmd->add_option("-n,--samples", vf.n, "random samples");
  validate_cmd->add_option("--sample-seed", vf.sample_seed, "sampling seed");
  validate_cmd->add_option("--csv", vf.csv, "write the relative-error profile here");
  add_analysis_flags(validate_cmd, af);

  auto* gen_cmd = app.add_subcommand("gen", "write a benchmark program");
  gen_cmd->require_subcommand(1);
  std::string out_path;
  gen_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  bench::LorenzParams lz;
  auto* g_lorenz = gen_cmd->add_subcommand("lorenz", "explicit Euler Lorenz system");
  g_lorenz->add_option("--steps", lz.steps);
  g_lorenz->add_option("--r", lz.r);
  g_lorenz->add_option("--dt", lz.dt);
  bench::Heat1dParams h1;
  auto* g_heat1d = gen_cmd->add_subcommand("heat1d", "1D heat stencil");
  g_heat1d->add_option("--steps", h1.steps);
  g_heat1d->add_option("--grid", h1.grid);
  g_heat1d->add_option("--alpha", h1.alpha);
  bench::Heat2dParams h2;
  auto* g_heat2d = gen_cmd->add_subcommand("heat2d", "2D heat stencil");
  g_heat2d->add_option("--steps", h2.steps);
  g_heat2d->add_option("--grid", h2.grid);
  g_heat2d->add_option("--alpha", h2.alpha);
  bench::Fdtd1dParams fd;
  auto* g_fdtd = gen_cmd->add_subcommand("fdtd1d", "1D FDTD leapfrog");
  g_fdtd->add_option("--steps", fd.steps);
  g_fdtd->add_option("--grid", fd.grid);
  bench::FftParams ff;
  std::string part = "re";
  auto* g_fft = gen_cmd->add_subcommand("fft", "radix-2 FFT, one datapath");
  g_fft->add_option("--points", ff.points);
  g_fft->add_option("--part", part)->check(CLI::IsMember({"re", "im"}));
  g_fft->add_flag("--real-inputs", ff.real_inputs);
  bench::ScanParams sp;
  auto* g_scan = gen_cmd->add_subcommand("scan", "Blelloch prefix sum");
  g_scan->add_option("--points", sp.points);
  std::string fixed_name;
  auto* g_fixed = gen_cmd->add_subcommand("fixed", "program from the embedded suite");
  g_fixed->add_option("name", fixed_name)->required();
  auto* g_list = gen_cmd->add_subcommand("list", "names in the embedded suite");
  for (auto* g : gen_cmd->get_subcommands({})) g->fallthrough();

  CombineFlags cf;
  auto* combine_cmd =
      app.add_subcommand("combine", "total bound of a complex output, sqrt(E_R^2 + E_I^2)");
  combine_cmd->add_option("real", cf.real, "report of the real datapath");
  combine_cmd->add_option("imag", cf.imag, "report of the imaginary datapath");
  combine_cmd->add_option("--er", cf.er, "real bound, instead of a report");
  combine_cmd->add_option("--ei", cf.ei, "imaginary bound, instead of a report");
  combine_cmd->add_option("--points", cf.points, "FFT size, adds the analytical envelope");
  combine_cmd->add_option("--norm", cf.norm, "max |z| of the FFT input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(file, af);
    if (*validate_cmd) return cmd_validate(file, af, vf);
    if (*combine_cmd) return cmd_combine(cf);
    if (*gen_cmd) {
      std::string text;
      if (*g_lorenz) text = bench::gen_lorenz(lz);
      if (*g_heat1d) text = bench::gen_heat1d(h1);
      if (*g_heat2d) text = bench::gen_heat2d(h2);
      if (*g_fdtd) text = bench::gen_fdtd1d(fd);
      if (*g_fft) {
        const auto p = bench::gen_fft(ff);
        text = part == "re" ? p.real : p.imag;
      }
      if (*g_scan) text = bench::gen_scan(sp);
      if (*g_fixed) text = bench::fixed_suite(fixed_name);
      if (*g_list) {
        for (const auto& n : bench::fixed_names()) text += n + "\n";
      }
      write_out(out_path, text);
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "fperr: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fperr: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "fperr: parse error: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "fperr: analysis failed: " << e.what() << '\n';
    return kAnalysis;
  }
  return kUsage;
}

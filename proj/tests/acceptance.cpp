// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Criteria 1-11 are run once with one thread, then again with four; the two
// result records (wall-clock times left out) must match exactly (criterion 12).
//
//   acceptance [--fft1024] [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "fperr/benchgen.hpp"
#include "fperr/report.hpp"
#include "support.hpp"

using namespace fperr;
using nlohmann::json;
namespace ft = fperr::testing;

namespace {

constexpr double kU = 0x1p-53;

struct Ctx {
  int threads = 1;
  bool fft1024 = false;
};

struct Outcome {
  bool pass = true;
  std::string detail;
  json record;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string secs(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", v);
  return buf;
}

AnalysisConfig base_config(const Ctx& c) {
  AnalysisConfig cfg;
  cfg.threads = c.threads;
  cfg.deterministic = true;
  return cfg;
}

SampleConfig samples(const Ctx& c, std::int64_t n, std::uint64_t seed) {
  SampleConfig sc;
  sc.n = n;
  sc.seed = seed;
  sc.threads = c.threads;
  return sc;
}

double bound_of(const IncrementalResult& r, const std::string& name) {
  for (const OutputBound& o : r.outputs) {
    if (o.name == name) return o.result.bound;
  }
  throw std::runtime_error("no output " + name);
}

// 1. Rigorous bound >= sampled error on the embedded suite and 500 fuzzed
// programs.
Outcome soundness(const Ctx& c) {
  Outcome out;
  Stopwatch sw;
  int programs = 0, violations = 0, failed = 0;
  json rec = json::array();
  auto check = [&](const std::string& name, const std::string& text, std::uint64_t seed) {
    const ExprDag d = parse_program(text);
    ++programs;
    IncrementalResult r;
    try {
      r = run_incremental(d, base_config(c));
    } catch (const AnalysisError&) {
      ++failed;  // no finite bound; nothing to violate
      rec.push_back({name, "no bound"});
      return;
    }
    const auto s = sample_max_error(d, samples(c, 10000, seed));
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double b = r.outputs[k].result.bound;
      if (s[k].max_abs_error > b) {
        ++violations;
        std::cerr << "  violation in " << name << "/" << s[k].output << ": bound " << b
                  << " observed " << s[k].max_abs_error << "\n";
      }
      rec.push_back({name, s[k].output, b, s[k].max_abs_error});
    }
  };
  for (const std::string& n : bench::fixed_names()) check(n, bench::fixed_suite(n), 11);
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 500; ++i) {
    check("fuzz" + std::to_string(i), ft::random_program(rng, 6, 3), 5000 + i);
  }
  const double t = sw.seconds();
  out.pass = violations == 0 && t < 600.0 && bench::fixed_names().size() >= 20;
  out.detail = "soundness: " + std::to_string(programs) + " programs (" +
               std::to_string(bench::fixed_names().size()) + " fixed), " +
               std::to_string(violations) + " violations, " + std::to_string(failed) +
               " without a finite bound, " + secs(t);
  out.record = rec;
  return out;
}

// 2. dqmom: bound between the sampled error and 10x the published bound, tight
// canonical range, under 5 s.
Outcome dqmom(const Ctx& c) {
  Outcome out;
  const ExprDag d = parse_program(bench::fixed_suite("dqmom"));
  Stopwatch sw;
  const IncrementalResult r = run_incremental(d, base_config(c));
  const double t = sw.seconds();
  const BoundResult& b = r.outputs.at(0).result;
  const Interval naive = eval_intervals(d)[r.outputs[0].node];
  const double emp = sample_max_error(d, samples(c, 10000, 2))[0].max_abs_error;
  const double ratio = naive.width() / b.range.width();
  out.pass = b.bound >= 3.27e-13 && b.bound <= 9.66e-9 && b.bound >= emp &&
             b.range.lo >= -9.09e5 && b.range.hi <= 9.09e5 && ratio >= 1e4 && t < 5.0;
  out.detail = "dqmom: bound " + sci(b.bound) + " (empirical " + sci(emp) + "), range [" +
               sci(b.range.lo) + ", " + sci(b.range.hi) + "], op-by-op range " +
               sci(ratio) + "x wider, " + secs(t);
  out.record = {b.bound, b.range.lo, b.range.hi, emp, naive.lo, naive.hi};
  return out;
}

// 3. x*x*x on [-1, 5] encloses to [-1, 125], up to one ulp outward.
Outcome power_collection(const Ctx&) {
  Outcome out;
  SymContext ctx;
  const ExprDag d =
      parse_program("INPUTS { x fl64 : (-1, 5); } OUTPUTS { c; } EXPRS { c = x*x*x; }");
  const SymExpr e = sym_build(ctx, d, d.output("c"));
  const Interval v = sym_eval_interval(e, {{ctx.var("x"), Interval{-1, 5}}});
  out.pass = v.lo <= -1.0 && v.lo >= std::nextafter(-1.0, -INFINITY) && v.hi >= 125.0 &&
             v.hi <= std::nextafter(125.0, INFINITY);
  out.detail = "power collection: x*x*x on [-1,5] -> [" + format_double(v.lo) + ", " +
               format_double(v.hi) + "]";
  out.record = {v.lo, v.hi};
  return out;
}

// Three significant digits, compared as text.
std::string digits3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// 4. heat1d(10): same bound with and without abstraction.
Outcome heat1d(const Ctx& c) {
  Outcome out;
  const ExprDag d = parse_program(bench::gen_heat1d({}));
  Stopwatch sw;
  AnalysisConfig direct = base_config(c);
  direct.abstraction_enabled = false;
  AnalysisConfig windowed = base_config(c);
  windowed.min_depth = 5;
  windowed.max_depth = 10;
  const IncrementalResult a = run_incremental(d, direct);
  const IncrementalResult b = run_incremental(d, windowed);
  const double t = sw.seconds();
  const double ba = bound_of(a, "u"), bb = bound_of(b, "u");
  const double emp = sample_max_error(d, samples(c, 10000, 4))[0].max_abs_error;
  out.pass = ba >= 5.45e-16 && ba <= 6.1e-14 && bb >= 5.45e-16 && bb <= 6.1e-14 &&
             digits3(ba) == digits3(bb) && !b.rounds.empty() && emp <= std::min(ba, bb) &&
             t < 60.0;
  out.detail = "heat1d(10): direct " + sci(ba) + ", window (5,10) " + sci(bb) + " after " +
               std::to_string(b.rounds.size()) + " rounds, empirical " + sci(emp) + ", " +
               secs(t);
  out.record = {ba, bb, emp, b.rounds.size()};
  return out;
}

// 5. scan(1024): bound near 1.88e-12 and the same under three windows.
Outcome scan(const Ctx& c) {
  Outcome out;
  const ExprDag d = parse_program(bench::gen_scan({}));
  Stopwatch sw;
  const std::pair<int, int> windows[] = {{4, 8}, {5, 10}, {8, 16}};
  std::vector<double> bounds;
  std::size_t rounds = 0;
  for (const auto& [lo, hi] : windows) {
    AnalysisConfig cfg = base_config(c);
    cfg.min_depth = lo;
    cfg.max_depth = hi;
    const IncrementalResult r = run_incremental(d, cfg);
    bounds.push_back(bound_of(r, "y"));
    rounds += r.rounds.size();
  }
  const double t = sw.seconds();
  const double emp = sample_max_error(d, samples(c, 10000, 5))[0].max_abs_error;
  bool same = true, inside = true;
  for (double b : bounds) {
    same = same && digits3(b) == digits3(bounds[0]);
    inside = inside && b >= 1e-13 && b <= 2e-11 && b >= emp;
  }
  out.pass = same && inside && rounds >= 3 && t < 120.0;
  out.detail = "scan(1024): bounds " + sci(bounds[0]) + ", " + sci(bounds[1]) + ", " +
               sci(bounds[2]) + " (" + std::to_string(rounds) + " rounds in total), empirical " +
               sci(emp) + ", " + secs(t);
  out.record = {bounds, emp, rounds};
  return out;
}

// 6. Lorenz-20, window (15, 25): y bound within 10x of 2.53e-14.
Outcome lorenz(const Ctx& c) {
  Outcome out;
  const ExprDag d = parse_program(bench::gen_lorenz({}));
  AnalysisConfig cfg = base_config(c);
  cfg.min_depth = 15;
  cfg.max_depth = 25;
  Stopwatch sw;
  const IncrementalResult r = run_incremental(d, cfg);
  const double t = sw.seconds();
  const double by = bound_of(r, "y");
  const auto s = sample_max_error(d, samples(c, 10000, 6));
  double emp_y = 0.0;
  bool sound = true;
  for (std::size_t k = 0; k < s.size(); ++k) {
    sound = sound && s[k].max_abs_error <= r.outputs[k].result.bound;
    if (s[k].output == "y") emp_y = s[k].max_abs_error;
  }
  out.pass = by >= 2.53e-15 && by <= 2.53e-13 && sound && t < 600.0;
  out.detail = "lorenz-20 (15,25): y bound " + sci(by) + ", empirical " + sci(emp_y) + ", " +
               std::to_string(r.rounds.size()) + " rounds, " + secs(t);
  out.record = {bound_of(r, "x"), by, bound_of(r, "z"), emp_y, r.rounds.size()};
  return out;
}

struct FftRun {
  double er = 0, ei = 0, et = 0, emp = 0, envelope = 0;
  double seconds = 0;
};

FftRun fft_run(const Ctx& c, int n) {
  bench::FftParams p;
  p.points = n;
  const bench::FftPrograms prog = bench::gen_fft(p);
  const ExprDag re = parse_program(prog.real), im = parse_program(prog.imag);
  FftRun f;
  Stopwatch sw;
  f.er = run_incremental(re, base_config(c)).outputs.at(0).result.bound;
  f.ei = run_incremental(im, base_config(c)).outputs.at(0).result.bound;
  f.seconds = sw.seconds();
  f.et = combine_complex(f.er, f.ei);
  // Both datapaths read the same inputs, so the same seed visits the same points.
  const double sr = sample_max_error(re, samples(c, 10000, 7))[0].max_abs_error;
  const double si = sample_max_error(im, samples(c, 10000, 7))[0].max_abs_error;
  f.emp = std::hypot(sr, si);
  f.envelope = fft_envelope(n, 1.0);
  return f;
}

// 7. FFT: E_T between the sampled error and the analytical envelope.
Outcome fft(const Ctx& c) {
  Outcome out;
  const FftRun a = fft_run(c, 64);
  out.pass = a.et >= a.emp && a.et <= a.envelope;
  out.detail = "fft-64: E_T " + sci(a.et) + " (E_R " + sci(a.er) + ", E_I " + sci(a.ei) +
               "), empirical " + sci(a.emp) + ", envelope " + sci(a.envelope) + ", " +
               secs(a.seconds);
  out.record = {a.er, a.ei, a.emp};
  if (c.fft1024) {
    const FftRun b = fft_run(c, 1024);
    const bool ok = b.et >= b.emp && b.et <= 4.98e-12;
    out.pass = out.pass && ok;
    out.detail += "; fft-1024: E_T " + sci(b.et) + ", empirical " + sci(b.emp) + ", " +
                  secs(b.seconds);
    out.record.push_back({b.er, b.ei, b.emp});
  } else {
    out.detail += "; fft-1024 skipped (--fft1024)";
  }
  return out;
}

// 8. Symbolic input adjoints against central differences.
Outcome adjoints(const Ctx&) {
  Outcome out;
  std::mt19937_64 rng(8080);
  int checked = 0, bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ExprDag d = parse_program(ft::random_program(rng, 5, 3));
    SymContext ctx;
    const NodeId root = d.outputs()[0].node;
    const NodeId roots[] = {root};
    const SymbolicDag sd = symbolic_values(ctx, d, roots);
    const auto adj = reverse_adjoints(ctx, d, root, sd);
    for (int s = 0; s < 20; ++s) {
      const auto p = sample_point(d, 800 + i, s);
      std::unordered_map<const Atom*, ft::Big> env;
      for (std::size_t k = 0; k < p.size(); ++k) env.emplace(sd.input_atoms[k], ft::Big(p[k]));
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double w = d.inputs()[k].range.width();
        if (w == 0.0) continue;  // a degenerate input has no interior
        const double a = ft::big_eval_sym(adj[d.input_node(static_cast<int>(k))], env).to_double();
        const double fd = ft::central_difference(d, root, p, static_cast<int>(k), 1e-6 * w);
        const double scale = std::max(std::fabs(a), std::fabs(fd));
        // Below 1e-40 both sides are 200-bit noise around a derivative that
        // vanishes identically (e.g. -4x r + 4x r with r opaque).
        const double rel = scale <= 1e-40 ? 0.0 : std::fabs(a - fd) / scale;
        worst = std::max(worst, rel);
        ++checked;
        if (rel > 1e-6) {
          ++bad;
          std::cerr << "  program " << i << " input " << k << ": adjoint " << a << " fd " << fd << "\n";
        }
      }
    }
  }
  out.pass = bad == 0;
  out.detail = "adjoints: " + std::to_string(checked) + " derivative checks, " +
               std::to_string(bad) + " above 1e-6, worst " + sci(worst);
  out.record = {checked, bad, worst};
  return out;
}

// 9. Reconvergent ladder of depth 30: O(edges) adjoint work, under 5 s.
Outcome ladder(const Ctx& c) {
  Outcome out;
  const int depth = 30;
  std::string src = "INPUTS { a0 fl64 : (1, 2); b0 fl64 : (1, 2); } OUTPUTS { f; } EXPRS {\n";
  for (int k = 1; k <= depth; ++k) {
    const std::string p = std::to_string(k - 1), q = std::to_string(k);
    src += "  a" + q + " = a" + p + " + b" + p + ";\n";
    src += "  b" + q + " = a" + p + " - b" + p + ";\n";
  }
  src += "  f = a" + std::to_string(depth) + " * 0.5;\n}\n";
  const ExprDag d = parse_program(src);
  Stopwatch sw;
  const IncrementalResult r = run_incremental(d, base_config(c));
  const double t = sw.seconds();
  std::uint64_t edges = 0;
  for (const Node& n : d.nodes()) edges += n.nchildren;
  const std::uint64_t acc = r.outputs.at(0).result.adjoint_accumulations;
  out.pass = acc > 0 && acc <= edges && t < 5.0 && std::isfinite(r.outputs[0].result.bound);
  out.detail = "ladder(30): " + std::to_string(acc) + " adjoint accumulations for " +
               std::to_string(edges) + " edges, bound " + sci(r.outputs[0].result.bound) + ", " +
               secs(t);
  out.record = {acc, edges, r.outputs[0].result.bound};
  return out;
}

// Random polynomial in up to three variables with small integer powers.
struct Poly {
  std::vector<std::pair<double, std::array<int, 3>>> terms;
  int vars = 1;

  double at(const std::array<double, 3>& x) const {
    double s = 0.0;
    for (const auto& [c, e] : terms) {
      double m = c;
      for (int i = 0; i < vars; ++i) m *= std::pow(x[i], e[i]);
      s += m;
    }
    return s;
  }
  std::string text() const {
    static const char* names[] = {"a", "b", "c"};
    std::string s;
    for (const auto& [c, e] : terms) {
      s += (s.empty() ? "" : " + ") + std::string("(") + format_double(c) + ")";
      for (int i = 0; i < vars; ++i) {
        for (int k = 0; k < e[i]; ++k) s += std::string(" * ") + names[i];
      }
    }
    return s;
  }
};

// 10. Optimizer upper bounds dominate 1e5 samples; x^2 on [-1,1] reaches 1.
Outcome optimizer(const Ctx&) {
  Outcome out;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> coef(-4.0, 4.0), lo(-3.0, 2.0), wid(0.1, 3.0),
      unit(0.0, 1.0);
  int violations = 0;
  json rec = json::array();
  for (int k = 0; k < 200; ++k) {
    Poly p;
    p.vars = 1 + k % 3;
    const int nt = 2 + static_cast<int>(rng() % 5);
    for (int t = 0; t < nt; ++t) {
      std::array<int, 3> e{};
      for (int i = 0; i < p.vars; ++i) e[i] = static_cast<int>(rng() % 4);
      p.terms.emplace_back(std::round(coef(rng) * 8) / 8, e);
    }
    // Build through the parser so the expression goes through the normal
    // canonicalization.
    static const char* names[] = {"a", "b", "c"};
    std::array<Interval, 3> box{};
    std::string src = "INPUTS {";
    for (int i = 0; i < p.vars; ++i) {
      const double l = std::round(lo(rng) * 16) / 16;
      box[i] = Interval{l, l + std::round(wid(rng) * 16) / 16};
      src += std::string(" ") + names[i] + " fl64 : (" + format_double(box[i].lo) + ", " +
             format_double(box[i].hi) + ");";
    }
    src += " } OUTPUTS { f; } EXPRS { f = " + p.text() + " + 0 * a; }";
    const ExprDag d = parse_program(src);
    SymContext ctx;
    const SymExpr e = sym_build(ctx, d, d.output("f"));
    SearchBox sb;
    for (const Atom* a : free_atoms(std::span<const SymExpr>(&e, 1))) {
      for (int i = 0; i < p.vars; ++i) {
        if (a == ctx.var(names[i])) {
          sb.atoms.push_back(a);
          sb.ranges.push_back(box[i]);
        }
      }
    }
    OptConfig cfg;
    cfg.max_boxes = 5000;
    const OptResult r = sb.atoms.empty() ? OptResult{} : maximize(e, sb, cfg);
    double best = -INFINITY;
    std::array<double, 3> x{};
    for (int s = 0; s < 100000; ++s) {
      for (int i = 0; i < p.vars; ++i) x[i] = box[i].lo + unit(rng) * box[i].width();
      best = std::max(best, p.at(x));
    }
    if (sb.atoms.empty()) continue;  // constant after collection
    // The sampled value is itself computed in binary64.
    const double slack = 64 * 0x1p-52 * (1.0 + std::fabs(best));
    if (r.upper + slack < best) ++violations;
    rec.push_back({r.lower, r.upper});
  }
  SymContext ctx;
  const SymExpr x = SymExpr::atom(ctx.var("x"));
  const OptResult sq = maximize(ctx.mul(x, x), SearchBox{{ctx.var("x")}, {Interval{-1, 1}}},
                                OptConfig{});
  const bool sq_ok = sq.converged && sq.upper >= 1.0 && sq.upper <= 1.0 + 1e-3;
  out.pass = violations == 0 && sq_ok;
  out.detail = "optimizer: 200 random polynomials, " + std::to_string(violations) +
               " violations; x^2 on [-1,1] -> [" + format_double(sq.lower) + ", " +
               format_double(sq.upper) + "]";
  rec.push_back({sq.lower, sq.upper});
  out.record = rec;
  return out;
}

// 11. fdtd(10): the relative-error profile never crosses zero.
Outcome fdtd_profile(const Ctx& c) {
  Outcome out;
  const ExprDag d = parse_program(bench::gen_fdtd1d({}));
  Stopwatch sw;
  AnalysisConfig cfg = base_config(c);
  cfg.abstraction_enabled = false;
  const IncrementalResult r = run_incremental(d, cfg);
  const double bound = r.outputs.at(0).result.bound;
  const SampleReport p = relative_profile(d, d.outputs()[0].node, bound, samples(c, 10000, 11));
  const double t = sw.seconds();
  out.pass = p.n_samples > 0 && p.q_min > 0.0 && t < 300.0;
  out.detail = "fdtd(10) profile: bound " + sci(bound) + ", " + std::to_string(p.n_samples) +
               " valid samples (" + std::to_string(p.excluded) + " excluded), Q in [" +
               sci(p.q_min) + ", " + sci(p.q_max) + "], bits lost <= " +
               format_double(p.bits_lost_max) + ", " + secs(t);
  out.record = {bound, p.n_samples, p.excluded, p.q_min, p.q_median, p.q_max, p.bits_lost_max};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Ctx ctx;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--fft1024")) {
      ctx.fft1024 = true;
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--fft1024] [--only N]\n";
      return 2;
    }
  }
  const std::vector<std::function<Outcome(const Ctx&)>> criteria = {
      soundness, dqmom, power_collection, heat1d, scan, lorenz,
      fft,       adjoints, ladder,        optimizer, fdtd_profile};

  bool all = true;
  std::vector<json> first(criteria.size());
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && only != static_cast<int>(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i](ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    first[i] = o.record;
    all = all && o.pass;
    std::printf("criterion %2zu %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }

  if (!only || only == 12) {
    Ctx again = ctx;
    again.threads = 4;
    auto record = [&](std::size_t i, const Ctx& c) {
      try {
        return criteria[i](c).record;
      } catch (const std::exception& e) {
        return json(std::string("threw: ") + e.what());
      }
    };
    int differ = 0;
    std::string which;
    Stopwatch sw;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      if (only == 12) first[i] = record(i, ctx);
      if (record(i, again).dump() != first[i].dump()) {
        ++differ;
        which += " " + std::to_string(i + 1);
      }
    }
    const bool ok = differ == 0;
    all = all && ok;
    std::printf("criterion 12 %s  determinism: criteria 1-11 rerun with 4 threads, %d differ%s, %s\n",
                ok ? "PASS" : "FAIL", differ, which.c_str(), secs(sw.seconds()).c_str());
  }
  return all ? 0 : 1;
}

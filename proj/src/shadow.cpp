// SPDX-License-Identifier: Apache-2.0
#include "fperr/shadow.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

namespace fperr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Round x into precision p, stepping back inside [lo, hi] if rounding left it.
double representable_inside(double x, Precision p, double lo, double hi) {
  if (p == Precision::fl64) return x;
  float f = static_cast<float>(x);
  if (f < lo) f = std::nextafter(f, INFINITY);
  if (f > hi) f = std::nextafter(f, -INFINITY);
  return f;
}

std::vector<int> varying_dims(const ExprDag& dag) {
  std::vector<int> d;
  for (std::size_t i = 0; i < dag.inputs().size(); ++i) {
    if (dag.inputs()[i].range.width() > 0) d.push_back(static_cast<int>(i));
  }
  return d;
}

std::vector<double> corner_point(const ExprDag& dag, const std::vector<int>& dims,
                                 std::uint64_t mask) {
  std::vector<double> p;
  for (const InputVar& in : dag.inputs()) p.push_back(in.range.lo);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (mask >> k & 1U) p[dims[k]] = dag.inputs()[dims[k]].range.hi;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const InputVar& in = dag.inputs()[i];
    p[i] = representable_inside(p[i], in.precision, in.range.lo, in.range.hi);
  }
  return p;
}

Precision output_precision(const ExprDag& dag, NodeId out) {
  const Node& n = dag.node(out);
  if (n.op == OpKind::input) return dag.inputs()[n.input].precision;
  return n.prec;
}

// Run body(i) for i in [0, count) on `threads` workers. Each worker gets a
// contiguous block, so merging blocks in order reproduces the serial order.
template <class Chunk, class Body, class Merge>
void parallel_chunks(std::int64_t count, int threads, Body body, Merge merge) {
  const int t = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, count)));
  std::vector<Chunk> parts(t);
  auto run = [&](int w) {
    const std::int64_t lo = count * w / t, hi = count * (w + 1) / t;
    for (std::int64_t i = lo; i < hi; ++i) body(parts[w], i);
  };
  if (t == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < t; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (auto& p : parts) merge(p);
}

}  // namespace

HPValue hp_apply(OpKind op, HPValue a, HPValue b) {
  switch (op) {
    case OpKind::add: return a + b;
    case OpKind::sub: return a - b;
    case OpKind::mul: return a * b;
    case OpKind::div: return a / b;
    case OpKind::neg: return -a;
    case OpKind::sqrt: return sqrtq(a);
    case OpKind::exp: return expq(a);
    case OpKind::log: return logq(a);
    case OpKind::sin: return sinq(a);
    case OpKind::cos: return cosq(a);
    case OpKind::cnst:
    case OpKind::input: return a;
  }
  return a;
}

std::vector<HPValue> eval_hp(const ExprDag& dag, std::span<const double> point) {
  std::vector<HPValue> v(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const Node& n = dag.nodes()[i];
    switch (n.op) {
      case OpKind::cnst: v[i] = n.literal; break;
      case OpKind::input: v[i] = point[n.input]; break;
      default: v[i] = hp_apply(n.op, v[n.ch[0]], n.nchildren == 2 ? v[n.ch[1]] : HPValue{0});
    }
  }
  return v;
}

std::string hp_to_string(HPValue v) {
  char buf[64];
  quadmath_snprintf(buf, sizeof buf, "%.36Qg", v);
  return buf;
}

EvalPair eval_pair(const ExprDag& dag, std::span<const double> point) {
  const auto fp = eval_fp(dag, point);
  const auto hp = eval_hp(dag, point);
  EvalPair r;
  for (const Output& o : dag.outputs()) {
    r.fp.push_back(fp[o.node]);
    r.hp.push_back(hp[o.node]);
    r.finite = r.finite && std::isfinite(fp[o.node]) && finiteq(hp[o.node]);
  }
  return r;
}

std::vector<double> sample_point(const ExprDag& dag, std::uint64_t seed, std::int64_t index) {
  std::uint64_t s = seed * 0xD1B54A32D192ED03ULL + static_cast<std::uint64_t>(index);
  splitmix64(s);
  std::vector<double> p;
  p.reserve(dag.inputs().size());
  for (const InputVar& in : dag.inputs()) {
    const double t = static_cast<double>(splitmix64(s) >> 11) * 0x1p-53;
    double x = in.range.lo + t * (in.range.hi - in.range.lo);
    x = std::clamp(x, in.range.lo, in.range.hi);
    p.push_back(representable_inside(x, in.precision, in.range.lo, in.range.hi));
  }
  return p;
}

namespace {

struct SampleSource {
  const ExprDag& dag;
  const SampleConfig& cfg;
  std::vector<int> dims = varying_dims(dag);
  std::int64_t corners = 0;

  SampleSource(const ExprDag& d, const SampleConfig& c) : dag(d), cfg(c) {
    if (cfg.corners && dims.size() <= 12) corners = std::int64_t{1} << dims.size();
    if (dims.empty()) corners = 0;
  }
  [[nodiscard]] std::int64_t count() const { return cfg.n + corners; }
  [[nodiscard]] std::vector<double> point(std::int64_t i) const {
    if (i < cfg.n) return sample_point(dag, cfg.seed, i);
    return corner_point(dag, dims, static_cast<std::uint64_t>(i - cfg.n));
  }
};

}  // namespace

std::vector<SampleReport> sample_max_error(const ExprDag& dag, const SampleConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("sample count must be at least 1");
  const SampleSource src(dag, cfg);
  const std::size_t nout = dag.outputs().size();
  struct Chunk {
    std::vector<SampleReport> rep;
  };
  std::vector<SampleReport> total(nout);
  for (std::size_t k = 0; k < nout; ++k) {
    total[k].output = dag.outputs()[k].name;
    total[k].seed = cfg.seed;
  }
  parallel_chunks<Chunk>(
      src.count(), cfg.threads,
      [&](Chunk& c, std::int64_t i) {
        if (c.rep.empty()) c.rep.resize(nout);
        const auto p = src.point(i);
        const EvalPair ev = eval_pair(dag, p);
        for (std::size_t k = 0; k < nout; ++k) {
          SampleReport& r = c.rep[k];
          if (!std::isfinite(ev.fp[k]) || !finiteq(ev.hp[k])) {
            ++r.excluded;
            continue;
          }
          ++r.n_samples;
          const double err = static_cast<double>(fabsq(ev.hp[k] - ev.fp[k]));
          if (err > r.max_abs_error || r.argmax_point.empty()) {
            r.max_abs_error = std::max(r.max_abs_error, err);
            if (err >= r.max_abs_error) r.argmax_point = p;
          }
        }
      },
      [&](Chunk& c) {
        for (std::size_t k = 0; k < c.rep.size(); ++k) {
          SampleReport& t = total[k];
          const SampleReport& r = c.rep[k];
          t.n_samples += r.n_samples;
          t.excluded += r.excluded;
          if (!r.argmax_point.empty() && (t.argmax_point.empty() || r.max_abs_error > t.max_abs_error)) {
            t.max_abs_error = r.max_abs_error;
            t.argmax_point = r.argmax_point;
          }
        }
      });
  return total;
}

double bits_lost(double relative_error, Precision p) {
  const double bits = mantissa_bits(p);
  const double lost = bits - std::log2(relative_error / unit_roundoff(p));
  if (std::isnan(lost)) return bits;
  return std::clamp(lost, 0.0, bits);
}

SampleReport relative_profile(const ExprDag& dag, NodeId output, double bound,
                              const SampleConfig& cfg, std::ostream* csv) {
  if (cfg.n < 1) throw std::invalid_argument("sample count must be at least 1");
  constexpr double kFloor = 1e-300;
  const SampleSource src(dag, cfg);
  const Precision prec = output_precision(dag, output);
  struct Row {
    std::int64_t index;
    double fp, hp, abs_err, q, bits;
    std::vector<double> point;
  };
  struct Chunk {
    std::vector<Row> rows;
    std::int64_t excluded = 0;
  };
  std::vector<Row> rows;
  std::int64_t excluded = 0;
  parallel_chunks<Chunk>(
      src.count(), cfg.threads,
      [&](Chunk& c, std::int64_t i) {
        const auto p = src.point(i);
        const double fp = eval_fp(dag, p)[output];
        const HPValue hp = eval_hp(dag, p)[output];
        if (!std::isfinite(fp) || !finiteq(hp) || std::fabs(fp) < kFloor ||
            fabsq(hp) < kFloor) {
          ++c.excluded;
          return;
        }
        const HPValue diff = fabsq(hp - fp);
        const double qshadow = static_cast<double>(diff / fabsq(hp));
        const double qsat = bound / std::fabs(fp);
        c.rows.push_back(Row{i, fp, static_cast<double>(hp), static_cast<double>(diff),
                             qsat - qshadow, bits_lost(qshadow, prec), p});
      },
      [&](Chunk& c) {
        excluded += c.excluded;
        for (auto& r : c.rows) rows.push_back(std::move(r));
      });

  SampleReport rep;
  rep.output = dag.label(output);
  for (const Output& o : dag.outputs()) {
    if (o.node == output) rep.output = o.name;
  }
  rep.seed = cfg.seed;
  rep.bound = bound;
  rep.excluded = excluded;
  rep.n_samples = static_cast<std::int64_t>(rows.size());
  if (csv) *csv << "sample,fp,hp,abs_err,Q,bits_lost\n";
  std::vector<double> qs;
  qs.reserve(rows.size());
  for (const Row& r : rows) {
    qs.push_back(r.q);
    if (r.abs_err > rep.max_abs_error || rep.argmax_point.empty()) {
      rep.max_abs_error = std::max(rep.max_abs_error, r.abs_err);
      if (r.abs_err >= rep.max_abs_error) rep.argmax_point = r.point;
    }
    rep.bits_lost_max = std::max(rep.bits_lost_max, r.bits);
    if (csv) {
      char line[160];
      std::snprintf(line, sizeof line, "%lld,%.17g,%.17g,%.17g,%.17g,%.6g\n",
                    static_cast<long long>(r.index), r.fp, r.hp, r.abs_err, r.q, r.bits);
      *csv << line;
    }
  }
  if (!qs.empty()) {
    std::sort(qs.begin(), qs.end());
    rep.q_min = qs.front();
    rep.q_max = qs.back();
    rep.q_median = qs[qs.size() / 2];
  }
  return rep;
}

}  // namespace fperr

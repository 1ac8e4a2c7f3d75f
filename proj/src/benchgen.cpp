// SPDX-License-Identifier: Apache-2.0
#include "fperr/benchgen.hpp"

#include <quadmath.h>

#include <cmath>
#include <initializer_list>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fperr/expr_ir.hpp"

namespace fperr::bench {

namespace {

std::string lit(double v) {
  const std::string s = format_double(v);
  return v < 0 ? "(" + s + ")" : s;
}

// A value of the program being written. It carries a sign so that exact
// negations fold into the neighbouring add/sub instead of costing an op.
struct Val {
  int id = -1;       // temp index, -1 for inputs and literals
  std::string text;  // magnitude
  int sign = 0;      // 0: exactly zero
};

Val negate(Val v) {
  v.sign = -v.sign;
  return v;
}

class Writer {
 public:
  Val input(const std::string& name, Interval r) {
    inputs_ << "  " << name << " fl64 : (" << format_double(r.lo) << ", "
            << format_double(r.hi) << ");\n";
    return {-1, name, 1};
  }
  static Val literal(double v) {
    if (v == 0.0) return {};
    return {-1, lit(v), 1};
  }

  Val add(const Val& a, const Val& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.sign == b.sign) return emit(a.text + " + " + b.text, {a, b}, a.sign);
    if (a.sign > 0) return emit(a.text + " - " + b.text, {a, b}, 1);
    return emit(b.text + " - " + a.text, {a, b}, 1);
  }
  Val sub(const Val& a, const Val& b) { return add(a, negate(b)); }
  Val mul(double c, const Val& a) {
    if (c == 0.0 || a.sign == 0) return {};
    return emit(lit(std::fabs(c)) + " * " + a.text, {a}, (c < 0 ? -1 : 1) * a.sign);
  }
  Val mul(const Val& a, const Val& b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return emit(a.text + " * " + b.text, {a, b}, a.sign * b.sign);
  }
  /// Plain statement with explicit text, for generators that follow a
  /// formula literally.
  Val let(const std::string& rhs, std::initializer_list<Val> from) { return emit(rhs, from, 1); }

  void output(const std::string& name, const Val& v) {
    const std::string rhs = v.sign == 0 ? "0" : (v.sign < 0 ? "-" + v.text : v.text);
    tail_ << "  " << name << " = " << rhs << ";\n";
    outputs_.push_back(name);
  }
  void clear_outputs() {
    outputs_.clear();
    tail_.str("");
  }

  /// Operation count of the union of the cones of `vals`.
  int cone_ops(std::initializer_list<Val> vals) {
    ++stamp_;
    seen_.resize(deps_.size(), 0);
    std::vector<int> stack;
    for (const Val& v : vals) {
      if (v.id >= 0) stack.push_back(v.id);
    }
    int n = 0;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      if (seen_[t] == stamp_) continue;
      seen_[t] = stamp_;
      ++n;
      for (int c : deps_[t]) stack.push_back(c);
    }
    return n;
  }

  [[nodiscard]] std::string text(const std::string& comment) const {
    std::ostringstream os;
    os << "# " << comment << "\nINPUTS {\n" << inputs_.str() << "}\nOUTPUTS {";
    for (const auto& o : outputs_) os << ' ' << o << ';';
    os << " }\nEXPRS {\n" << exprs_.str() << tail_.str() << "}\n";
    return os.str();
  }

 private:
  Val emit(const std::string& rhs, std::initializer_list<Val> from, int sign) {
    const int id = static_cast<int>(deps_.size());
    std::vector<int> d;
    for (const Val& v : from) {
      if (v.id >= 0) d.push_back(v.id);
    }
    deps_.push_back(std::move(d));
    std::string name = "t" + std::to_string(id);
    exprs_ << "  " << name << " = " << rhs << ";\n";
    return {id, std::move(name), sign};
  }

  std::ostringstream inputs_, exprs_, tail_;
  std::vector<std::string> outputs_;
  std::vector<std::vector<int>> deps_;
  std::vector<int> seen_;
  int stamp_ = 0;
};

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double midpoint(Interval r) { return r.lo + (r.hi - r.lo) / 2; }

}  // namespace

std::string gen_lorenz(const LorenzParams& p) {
  require(p.steps >= 1, "lorenz needs at least one step");
  Writer w;
  Val x = w.input("x0", p.x), y = w.input("y0", p.y), z = w.input("z0", p.z);
  const std::string a = lit(p.a), b = lit(p.b), r = lit(p.r), dt = lit(p.dt);
  for (int k = 0; k < p.steps; ++k) {
    // x' = x + a(x - y)dt; y' = y + (r x - x z - y)dt; z' = z + (x y - b z)dt
    const Val xd = w.let(x.text + " - " + y.text, {x, y});
    const Val xa = w.let(a + " * " + xd.text, {xd});
    const Val xt = w.let(xa.text + " * " + dt, {xa});
    const Val xn = w.let(x.text + " + " + xt.text, {x, xt});

    const Val rx = w.let(r + " * " + x.text, {x});
    const Val xz = w.let(x.text + " * " + z.text, {x, z});
    const Val y1 = w.let(rx.text + " - " + xz.text, {rx, xz});
    const Val y2 = w.let(y1.text + " - " + y.text, {y1, y});
    const Val yt = w.let(y2.text + " * " + dt, {y2});
    const Val yn = w.let(y.text + " + " + yt.text, {y, yt});

    const Val xy = w.let(x.text + " * " + y.text, {x, y});
    const Val bz = w.let(b + " * " + z.text, {z});
    const Val z1 = w.let(xy.text + " - " + bz.text, {xy, bz});
    const Val zt = w.let(z1.text + " * " + dt, {z1});
    const Val zn = w.let(z.text + " + " + zt.text, {z, zt});
    x = xn;
    y = yn;
    z = zn;
  }
  w.output("x", x);
  w.output("y", y);
  w.output("z", z);
  return w.text("lorenz, " + std::to_string(p.steps) + " explicit Euler steps, r = " +
                format_double(p.r) + ", dt = " + format_double(p.dt));
}

std::string gen_heat1d(const Heat1dParams& p) {
  require(p.grid >= 3, "heat1d grid must have at least 3 points");
  require(p.steps >= 1, "heat1d needs at least one step");
  Writer w;
  const int n = p.grid;
  std::vector<Val> u(n);
  u[0] = u[n - 1] = Writer::literal(midpoint(p.init));
  for (int i = 1; i < n - 1; ++i) u[i] = w.input("u" + std::to_string(i), p.init);
  for (int t = 0; t < p.steps; ++t) {
    // (1 - 2 alpha) u_i + alpha (u_{i-1} + u_{i+1})
    std::vector<Val> next = u;
    for (int i = 1; i < n - 1; ++i) {
      next[i] = w.add(w.mul(1.0 - 2.0 * p.alpha, u[i]), w.mul(p.alpha, w.add(u[i - 1], u[i + 1])));
    }
    u = std::move(next);
  }
  w.output("u", u[n / 2]);
  return w.text("heat1d, grid " + std::to_string(n) + ", " + std::to_string(p.steps) +
                " steps, alpha = " + format_double(p.alpha));
}

std::string gen_heat2d(const Heat2dParams& p) {
  require(p.grid >= 3, "heat2d grid must have at least 3 points per side");
  require(p.steps >= 1, "heat2d needs at least one step");
  Writer w;
  const int n = p.grid;
  std::vector<std::vector<Val>> u(n, std::vector<Val>(n, Writer::literal(midpoint(p.init))));
  for (int i = 1; i < n - 1; ++i) {
    for (int j = 1; j < n - 1; ++j) {
      u[i][j] = w.input("u" + std::to_string(i) + "_" + std::to_string(j), p.init);
    }
  }
  for (int t = 0; t < p.steps; ++t) {
    auto next = u;
    for (int i = 1; i < n - 1; ++i) {
      for (int j = 1; j < n - 1; ++j) {
        const Val nb = w.add(w.add(u[i - 1][j], u[i + 1][j]), w.add(u[i][j - 1], u[i][j + 1]));
        next[i][j] = w.add(w.mul(1.0 - 4.0 * p.alpha, u[i][j]), w.mul(p.alpha, nb));
      }
    }
    u = std::move(next);
  }
  w.output("u", u[n / 2][n / 2]);
  return w.text("heat2d, grid " + std::to_string(n) + "x" + std::to_string(n) + ", " +
                std::to_string(p.steps) + " steps, alpha = " + format_double(p.alpha));
}

std::string gen_fdtd1d(const Fdtd1dParams& p) {
  require(p.steps >= 1, "fdtd1d needs at least one step");
  require(p.grid >= 2, "fdtd1d grid must have at least 2 points");
  Writer w;
  const int n = p.grid;
  std::vector<Val> e(n), h(n);
  for (int i = 0; i < n; ++i) e[i] = w.input("e" + std::to_string(i), p.init);
  for (int i = 0; i < n; ++i) h[i] = w.input("h" + std::to_string(i), p.init);
  for (int t = 0; t < p.steps; ++t) {
    for (int i = 1; i < n; ++i) e[i] = w.add(e[i], w.mul(p.c1, w.sub(h[i], h[i - 1])));
    for (int i = 0; i + 1 < n; ++i) h[i] = w.add(h[i], w.mul(p.c2, w.sub(e[i + 1], e[i])));
  }
  w.output("e", e[n / 2]);
  return w.text("fdtd1d, grid " + std::to_string(n) + ", " + std::to_string(p.steps) +
                " leapfrog steps");
}

FftPrograms gen_fft(const FftParams& p) {
  const int n = p.points;
  require(n >= 2 && (n & (n - 1)) == 0, "fft size must be a power of two >= 2");
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  Writer w;
  std::vector<Val> re(n), im(n);
  for (int i = 0; i < n; ++i) re[i] = w.input("xr" + std::to_string(i), p.range);
  for (int i = 0; i < n; ++i) {
    im[i] = p.real_inputs ? Val{} : w.input("xi" + std::to_string(i), p.range);
  }
  // Bit-reversed load, then log2(n) in-place butterfly stages.
  std::vector<Val> ar(n), ai(n);
  for (int i = 0; i < n; ++i) {
    int rev = 0;
    for (int b = 0; b < bits; ++b) rev |= ((i >> b) & 1) << (bits - 1 - b);
    ar[rev] = re[i];
    ai[rev] = im[i];
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    for (int k = 0; k < half; ++k) {
      // w = exp(-2 pi i k / len), rounded once from quad.
      double wr, wi;
      if (k == 0) {
        wr = 1.0;
        wi = 0.0;
      } else if (4 * k == len) {
        wr = 0.0;
        wi = -1.0;
      } else {
        const __float128 ang = 2 * M_PIq * k / len;
        wr = static_cast<double>(cosq(ang));
        wi = static_cast<double>(-sinq(ang));
      }
      for (int s = 0; s < n; s += len) {
        const Val br = ar[s + k + half], bi = ai[s + k + half];
        Val tr, ti;
        if (wi == 0.0 && wr == 1.0) {
          tr = br;
          ti = bi;
        } else if (wr == 0.0 && wi == -1.0) {
          tr = bi;
          ti = negate(br);
        } else {
          tr = w.sub(w.mul(wr, br), w.mul(wi, bi));
          ti = w.add(w.mul(wr, bi), w.mul(wi, br));
        }
        const Val xr = ar[s + k], xi = ai[s + k];
        ar[s + k] = w.add(xr, tr);
        ai[s + k] = w.add(xi, ti);
        ar[s + k + half] = w.sub(xr, tr);
        ai[s + k + half] = w.sub(xi, ti);
      }
    }
  }
  FftPrograms out;
  int best = -1;
  for (int k = 0; k < n; ++k) {
    const int ops = w.cone_ops({ar[k], ai[k]});
    if (ops > best) {
      best = ops;
      out.bin = k;
    }
  }
  const std::string what = "fft, " + std::to_string(n) + " points, bin " + std::to_string(out.bin);
  w.output("re", ar[out.bin]);
  out.real = w.text(what + ", real part");
  w.clear_outputs();
  w.output("im", ai[out.bin]);
  out.imag = w.text(what + ", imaginary part");
  return out;
}

std::string gen_scan(const ScanParams& p) {
  const int n = p.points;
  require(n >= 2 && (n & (n - 1)) == 0, "scan size must be a power of two >= 2");
  Writer w;
  std::vector<Val> x(n);
  for (int i = 0; i < n; ++i) x[i] = w.input("x" + std::to_string(i), p.range);
  std::vector<Val> a = x;
  for (int d = 1; d < n; d <<= 1) {
    for (int k = 0; k < n; k += 2 * d) a[k + 2 * d - 1] = w.add(a[k + d - 1], a[k + 2 * d - 1]);
  }
  a[n - 1] = Val{};
  for (int d = n / 2; d >= 1; d >>= 1) {
    for (int k = 0; k < n; k += 2 * d) {
      const Val t = a[k + d - 1];
      a[k + d - 1] = a[k + 2 * d - 1];
      a[k + 2 * d - 1] = w.add(t, a[k + 2 * d - 1]);
    }
  }
  // Exclusive to inclusive.
  Val last;
  for (int i = 0; i < n; ++i) last = w.add(a[i], x[i]);
  w.output("y", last);
  return w.text("scan, " + std::to_string(n) + " points, last inclusive prefix");
}

namespace {

struct Fixed {
  const char* name;
  const char* text;
};

// Input boxes and bodies follow the FPTaylor/FPBench versions of these
// programs. sum3 and the sums4 pair are binary32 there.
const Fixed kFixed[] = {
    {"dqmom", R"(INPUTS {
  m0 fl64 : (-1, 1); m1 fl64 : (-1, 1); m2 fl64 : (-1, 1);
  w0 fl64 : (0.00001, 1); w1 fl64 : (0.00001, 1); w2 fl64 : (0.00001, 1);
  a0 fl64 : (0.00001, 1); a1 fl64 : (0.00001, 1); a2 fl64 : (0.00001, 1);
}
OUTPUTS { r; }
EXPRS {
  r = (0.0 + ((((w2 * (0.0 - m2)) * (-3.0 * ((1.0 * (a2 / w2)) * (a2 / w2)))) * 1.0)
      + ((((w1 * (0.0 - m1)) * (-3.0 * ((1.0 * (a1 / w1)) * (a1 / w1)))) * 1.0)
      + ((((w0 * (0.0 - m0)) * (-3.0 * ((1.0 * (a0 / w0)) * (a0 / w0)))) * 1.0) + 0.0))));
}
)"},
    {"kepler0", R"(INPUTS {
  x1 fl64 : (4, 6.36); x2 fl64 : (4, 6.36); x3 fl64 : (4, 6.36);
  x4 fl64 : (4, 6.36); x5 fl64 : (4, 6.36); x6 fl64 : (4, 6.36);
}
OUTPUTS { r; }
EXPRS {
  r = x2 * x5 + x3 * x6 - x2 * x3 - x5 * x6 + x1 * (-x1 + x2 + x3 - x4 + x5 + x6);
}
)"},
    {"kepler1", R"(INPUTS {
  x1 fl64 : (4, 6.36); x2 fl64 : (4, 6.36); x3 fl64 : (4, 6.36); x4 fl64 : (4, 6.36);
}
OUTPUTS { r; }
EXPRS {
  r = x1 * x4 * (-x1 + x2 + x3 - x4) + x2 * (x1 - x2 + x3 + x4) + x3 * (x1 + x2 - x3 + x4)
      - x2 * x3 * x4 - x1 * x3 - x1 * x2 - x4;
}
)"},
    {"kepler2", R"(INPUTS {
  x1 fl64 : (4, 6.36); x2 fl64 : (4, 6.36); x3 fl64 : (4, 6.36);
  x4 fl64 : (4, 6.36); x5 fl64 : (4, 6.36); x6 fl64 : (4, 6.36);
}
OUTPUTS { r; }
EXPRS {
  r = x1 * x4 * (-x1 + x2 + x3 - x4 + x5 + x6) + x2 * x5 * (x1 - x2 + x3 + x4 - x5 + x6)
      + x3 * x6 * (x1 + x2 - x3 + x4 + x5 - x6) - x2 * x3 * x4 - x1 * x3 * x5
      - x1 * x2 * x6 - x4 * x5 * x6;
}
)"},
    {"jetEngine", R"(INPUTS { x1 fl64 : (-5, 5); x2 fl64 : (-20, 5); }
OUTPUTS { r; }
EXPRS {
  t = 3 * x1 * x1 + 2 * x2 - x1;
  ts = 3 * x1 * x1 - 2 * x2 - x1;
  d = x1 * x1 + 1;
  s = t / d;
  ss = ts / d;
  r = x1 + ((2 * x1 * s * (s - 3) + x1 * x1 * (4 * s - 6)) * d + 3 * x1 * x1 * s
      + x1 * x1 * x1 + x1 + 3 * ss);
}
)"},
    {"turbine1", R"(INPUTS { v fl64 : (-4.5, -0.3); w fl64 : (0.4, 0.9); r fl64 : (3.8, 7.8); }
OUTPUTS { f; }
EXPRS { f = 3 + 2 / (r * r) - 0.125 * (3 - 2 * v) * (w * w * r * r) / (1 - v) - 4.5; }
)"},
    {"turbine2", R"(INPUTS { v fl64 : (-4.5, -0.3); w fl64 : (0.4, 0.9); r fl64 : (3.8, 7.8); }
OUTPUTS { f; }
EXPRS { f = 6 * v - 0.5 * v * (w * w * r * r) / (1 - v) - 2.5; }
)"},
    {"turbine3", R"(INPUTS { v fl64 : (-4.5, -0.3); w fl64 : (0.4, 0.9); r fl64 : (3.8, 7.8); }
OUTPUTS { f; }
EXPRS { f = 3 - 2 / (r * r) - 0.125 * (1 + 2 * v) * (w * w * r * r) / (1 - v) - 0.5; }
)"},
    {"sum", R"(INPUTS { x0 fl64 : (1, 2); x1 fl64 : (1, 2); x2 fl64 : (1, 2); }
OUTPUTS { s; }
EXPRS {
  p0 = x0 + x1 - x2;
  p1 = x1 + x2 - x0;
  p2 = x2 + x0 - x1;
  s = p0 + p1 + p2;
}
)"},
    {"sum3", R"(INPUTS { x0 fl32 : (1, 2); x1 fl32 : (1, 2); x2 fl32 : (1, 2); }
OUTPUTS { s; }
EXPRS {
  p0 = x0 + x1 - x2;
  p1 = x1 + x2 - x0;
  p2 = x2 + x0 - x1;
  s = p0 + p1 + p2;
}
)"},
    {"sum8", R"(INPUTS {
  x0 fl64 : (1, 2); x1 fl64 : (1, 2); x2 fl64 : (1, 2); x3 fl64 : (1, 2);
  x4 fl64 : (1, 2); x5 fl64 : (1, 2); x6 fl64 : (1, 2); x7 fl64 : (1, 2);
}
OUTPUTS { s; }
EXPRS { s = x0 + x1 + x2 + x3 + x4 + x5 + x6 + x7; }
)"},
    {"sums4_sum1", R"(INPUTS { x0 fl32 : (-1e-5, 1.00001); x1 fl32 : (0, 1); x2 fl32 : (0, 1); x3 fl32 : (0, 1); }
OUTPUTS { s; }
EXPRS { s = ((x0 + x1) + x2) + x3; }
)"},
    {"sums4_sum2", R"(INPUTS { x0 fl32 : (-1e-5, 1.00001); x1 fl32 : (0, 1); x2 fl32 : (0, 1); x3 fl32 : (0, 1); }
OUTPUTS { s; }
EXPRS { s = (x0 + x1) + (x2 + x3); }
)"},
    {"sqroot", R"(INPUTS { x fl64 : (0, 1); }
OUTPUTS { r; }
EXPRS { r = 1 + 0.5 * x - 0.125 * x * x + 0.0625 * x * x * x - 0.0390625 * x * x * x * x; }
)"},
    {"sqrt_add", R"(INPUTS { x fl64 : (1, 1000); }
OUTPUTS { r; }
EXPRS { r = 1 / (sqrt(x + 1) + sqrt(x)); }
)"},
    {"verhulst", R"(INPUTS { x fl64 : (0.1, 0.3); }
OUTPUTS { r; }
EXPRS { r = (4 * x) / (1 + x / 1.11); }
)"},
    {"predatorPrey", R"(INPUTS { x fl64 : (0.1, 0.3); }
OUTPUTS { r; }
EXPRS { r = (4 * x * x) / (1 + (x / 1.11) * (x / 1.11)); }
)"},
    {"rigidBody1", R"(INPUTS { x1 fl64 : (-15, 15); x2 fl64 : (-15, 15); x3 fl64 : (-15, 15); }
OUTPUTS { r; }
EXPRS { r = -(x1 * x2) - 2 * x2 * x3 - x1 - x3; }
)"},
    {"rigidBody2", R"(INPUTS { x1 fl64 : (-15, 15); x2 fl64 : (-15, 15); x3 fl64 : (-15, 15); }
OUTPUTS { r; }
EXPRS { r = 2 * (x1 * x2 * x3) + 3 * x3 * x3 - x2 * (x1 * x2 * x3) + 3 * x3 * x3 - x2; }
)"},
    {"doppler1", R"(INPUTS { u fl64 : (-100, 100); v fl64 : (20, 20000); T fl64 : (-30, 50); }
OUTPUTS { r; }
EXPRS {
  t1 = 331.4 + 0.6 * T;
  r = (-t1 * v) / ((t1 + u) * (t1 + u));
}
)"},
    {"carbonGas", R"(INPUTS { v fl64 : (0.1, 0.5); }
OUTPUTS { r; }
EXPRS {
  r = (35000000 + 0.401 * (1000 / v) * (1000 / v)) * (v - 1000 * 0.0000427)
      - 1.3806503e-23 * 1000 * 300;
}
)"},
    {"himmilbeau", R"(INPUTS { x1 fl64 : (-5, 5); x2 fl64 : (-5, 5); }
OUTPUTS { r; }
EXPRS {
  a = x1 * x1 + x2 - 11;
  b = x1 + x2 * x2 - 7;
  r = a * a + b * b;
}
)"},
    {"bspline3", R"(INPUTS { u fl64 : (0, 1); }
OUTPUTS { r; }
EXPRS { r = -(u * u * u) / 6; }
)"},
    {"hypot", R"(INPUTS { x1 fl64 : (1, 100); x2 fl64 : (1, 100); }
OUTPUTS { r; }
EXPRS { r = sqrt(x1 * x1 + x2 * x2); }
)"},
    {"sine", R"(INPUTS { x fl64 : (-1.57079632679, 1.57079632679); }
OUTPUTS { r; }
EXPRS { r = x - (x * x * x) / 6 + (x * x * x * x * x) / 120 - (x * x * x * x * x * x * x) / 5040; }
)"},
    {"sineOrder3", R"(INPUTS { x fl64 : (-2, 2); }
OUTPUTS { r; }
EXPRS { r = 0.954929658551372 * x - 0.12900613773279798 * (x * x * x); }
)"},
    {"sphere", R"(INPUTS {
  x fl64 : (-10, 10); r fl64 : (0, 10);
  lat fl64 : (-1.570796, 1.570796); lon fl64 : (-3.14159265, 3.14159265);
}
OUTPUTS { s; }
EXPRS { s = x + r * sin(lat) * cos(lon); }
)"},
    {"exp1x", R"(INPUTS { x fl64 : (0.01, 0.5); }
OUTPUTS { r; }
EXPRS { r = (exp(x) - 1) / x; }
)"},
    {"logexp", R"(INPUTS { x fl64 : (-8, 8); }
OUTPUTS { r; }
EXPRS { r = log(1 + exp(x)); }
)"},
    {"nonlin1", R"(INPUTS { z fl64 : (0, 999); }
OUTPUTS { r; }
EXPRS { r = z / (z + 1); }
)"},
    {"nonlin1_test2", R"(INPUTS { x fl64 : (1.00001, 2); }
OUTPUTS { r; }
EXPRS { r = 1 / (x + 1); }
)"},
};

}  // namespace

const std::vector<std::string>& fixed_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Fixed& f : kFixed) v.emplace_back(f.name);
    return v;
  }();
  return names;
}

std::string fixed_suite(const std::string& name) {
  for (const Fixed& f : kFixed) {
    if (name == f.name) return f.text;
  }
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

}  // namespace fperr::bench

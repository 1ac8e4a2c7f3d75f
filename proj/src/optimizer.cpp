// SPDX-License-Identifier: Apache-2.0
#include "fperr/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <queue>
#include <thread>

namespace fperr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Entry {
  double ub;
  std::uint64_t seq;
  std::vector<Interval> box;
};

struct EntryLess {
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.ub != b.ub) return a.ub < b.ub;
    return a.seq > b.seq;  // older first
  }
};

class Search {
 public:
  Search(const Objective& f, std::span<const Interval> root, const OptConfig& cfg,
         const OptTrace& trace)
      : f_(f), cfg_(cfg), trace_(trace), root_(root.begin(), root.end()) {}

  OptResult run() {
    if (root_.size() != f_.dims()) throw std::invalid_argument("box dimension mismatch");
    for (const Interval& iv : root_) {
      if (!(iv.lo <= iv.hi)) throw std::invalid_argument("empty search box");
    }
    probe(midpoint(root_));
    if (!root_.empty()) {
      std::vector<double> lo(root_.size()), hi(root_.size());
      for (std::size_t i = 0; i < root_.size(); ++i) {
        lo[i] = root_[i].lo;
        hi[i] = root_[i].hi;
      }
      probe(lo);
      probe(hi);
    }
    heap_.push(Entry{bound(root_, kInf), seq_++, root_});

    const int workers = cfg_.deterministic ? 1 : std::max(1, cfg_.threads);
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < workers; ++i) pool.emplace_back([this] { work(); });
      for (auto& t : pool) t.join();
    }

    OptResult r;
    r.lower = lower_;
    r.upper = current_upper();
    r.boxes_processed = processed_;
    r.converged = std::isfinite(r.upper) && (heap_.empty() || gap_closed(r.upper));
    r.argmax = argmax_;
    return r;
  }

 private:
  double tol(double v) const { return std::max(cfg_.abs_tol, cfg_.rel_tol * std::fabs(v)); }

  bool gap_closed(double up) const { return std::isfinite(up) && up - lower_ <= tol(up); }

  double current_upper() const {
    double u = finalized_;
    if (!heap_.empty()) u = std::max(u, heap_.top().ub);
    return u;
  }

  static std::vector<double> midpoint(const std::vector<Interval>& box) {
    std::vector<double> m(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) m[i] = box[i].mid();
    return m;
  }

  // Upper bound of the objective over the box, never above the parent's.
  // Probes the objective's own hint, if it offers one.
  double bound(const std::vector<Interval>& box, double parent) {
    double ub = kInf;
    std::vector<double> hint;
    try {
      ub = f_.eval(box, hint).hi;
    } catch (const DomainError&) {
      ub = kInf;
      hint.clear();
    }
    if (std::isnan(ub)) ub = kInf;
    if (hint.size() == box.size() && !hint.empty()) probe(hint);
    return std::min(ub, parent);
  }

  // Value certified at a point: the enclosure's lower end. Caller holds no lock.
  void probe(const std::vector<double>& point) {
    std::vector<Interval> box(point.begin(), point.end());
    double v = -kInf;
    try {
      v = f_.eval(box).lo;
    } catch (const DomainError&) {
      return;
    }
    if (std::isnan(v)) return;
    std::lock_guard lk(mu_);
    if (v > lower_ || argmax_.empty()) {
      lower_ = std::max(lower_, v);
      argmax_ = point;
    }
  }

  // Index of the widest dimension relative to the root box, or -1.
  int split_dim(const std::vector<Interval>& box) const {
    int best = -1;
    double best_w = 0.0;
    for (std::size_t i = 0; i < box.size(); ++i) {
      const double rw = root_[i].width();
      if (!(rw > 0.0)) continue;
      const double w = box[i].width() / rw;
      if (w <= cfg_.min_box_width) continue;
      const double m = box[i].mid();
      if (!(m > box[i].lo && m < box[i].hi)) continue;
      if (w > best_w) {
        best_w = w;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  void work() {
    std::unique_lock lk(mu_);
    for (;;) {
      cv_.wait(lk, [this] { return stop_ || !heap_.empty() || active_ == 0; });
      if (stop_ || heap_.empty()) break;
      const double up = current_upper();
      if (gap_closed(up) || processed_ >= cfg_.max_boxes) {
        stop_ = true;
        break;
      }
      Entry e = heap_.top();
      heap_.pop();
      ++processed_;
      ++active_;
      lk.unlock();

      const int d = split_dim(e.box);
      std::vector<Entry> kids;
      if (d >= 0) {
        const double m = e.box[d].mid();
        const bool faces = f_.vertex_dim(static_cast<std::size_t>(d));
        for (int side = 0; side < 2; ++side) {
          std::vector<Interval> b = e.box;
          if (faces) {
            b[d] = Interval{side == 0 ? e.box[d].lo : e.box[d].hi};
          } else {
            b[d] = side == 0 ? Interval{e.box[d].lo, m} : Interval{m, e.box[d].hi};
          }
          const double ub = bound(b, e.ub);
          if (!faces) probe(midpoint(b));
          kids.push_back(Entry{ub, 0, std::move(b)});
        }
      }

      lk.lock();
      --active_;
      if (d < 0) {
        finalized_ = std::max(finalized_, e.ub);
      } else {
        for (Entry& k : kids) {
          if (k.ub <= lower_ + tol(k.ub)) {
            finalized_ = std::max(finalized_, k.ub);  // pruned, but still counted
          } else {
            k.seq = seq_++;
            heap_.push(std::move(k));
          }
        }
      }
      if (trace_) trace_(lower_, current_upper(), processed_);
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  const Objective& f_;
  const OptConfig& cfg_;
  const OptTrace& trace_;
  std::vector<Interval> root_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::priority_queue<Entry, std::vector<Entry>, EntryLess> heap_;
  double lower_ = -kInf;
  double finalized_ = -kInf;
  std::vector<double> argmax_;
  std::uint64_t seq_ = 0;
  std::int64_t processed_ = 0;
  int active_ = 0;
  bool stop_ = false;
};

}  // namespace

ExprObjective::ExprObjective(const SymExpr& e, std::vector<const Atom*> dims, bool negate)
    : code_(std::span<const SymExpr>(&e, 1), std::move(dims)), negate_(negate) {}

Interval ExprObjective::eval(std::span<const Interval> box) const {
  const Interval v = code_.eval_one(0, box);
  return negate_ ? -v : v;
}

SearchBox SearchBox::from_env(const std::unordered_map<const Atom*, Interval>& env) {
  SearchBox b;
  for (const auto& [a, iv] : env) b.atoms.push_back(a);
  std::sort(b.atoms.begin(), b.atoms.end(), atom_less);
  for (const Atom* a : b.atoms) b.ranges.push_back(env.at(a));
  return b;
}

OptResult maximize(const Objective& f, std::span<const Interval> box, const OptConfig& cfg,
                   const OptTrace& trace) {
  if (!(cfg.abs_tol >= 0.0) || !(cfg.rel_tol >= 0.0) || cfg.abs_tol + cfg.rel_tol <= 0.0) {
    throw std::invalid_argument("optimizer tolerances must be positive");
  }
  Search s(f, box, cfg, trace);
  return s.run();
}

OptResult maximize(const SymExpr& e, const SearchBox& box, const OptConfig& cfg,
                   const OptTrace& trace) {
  const ExprObjective f(e, box.atoms);
  return maximize(f, box.ranges, cfg, trace);
}

OptResult minimize(const SymExpr& e, const SearchBox& box, const OptConfig& cfg,
                   const OptTrace& trace) {
  const ExprObjective f(e, box.atoms, true);
  OptTrace flipped;
  if (trace) flipped = [&](double lo, double up, std::int64_t n) { trace(-up, -lo, n); };
  OptResult r = maximize(f, box.ranges, cfg, flipped);
  const double lo = -r.upper;
  r.upper = -r.lower;
  r.lower = lo;
  return r;
}

}  // namespace fperr

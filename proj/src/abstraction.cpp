// SPDX-License-Identifier: Apache-2.0
#include "fperr/abstraction.hpp"

#include <cmath>
#include <map>
#include <unordered_set>

#include "parallel.hpp"

namespace fperr {

namespace {

std::vector<bool> on_output_paths(const ExprDag& dag) {
  std::vector<bool> m(dag.size(), false);
  for (const Output& o : dag.outputs()) m[o.node] = true;
  for (NodeId i = static_cast<NodeId>(dag.size()) - 1; i >= 0; --i) {
    if (!m[i]) continue;
    for (NodeId c : dag.nodes()[i].children()) m[c] = true;
  }
  return m;
}

std::vector<bool> output_nodes(const ExprDag& dag) {
  std::vector<bool> m(dag.size(), false);
  for (const Output& o : dag.outputs()) m[o.node] = true;
  return m;
}

double cost_with_depth(const ExprDag& dag, NodeId node, int D) {
  const int d = dag.depth(node);
  if (d <= 0 || D <= 0) return 0.0;
  const double r = static_cast<double>(d) / D;
  const double info = r >= 1.0 ? 0.0 : -r * std::log2(r);
  return info * op_count(dag, node) * dag.fanout(node);
}

std::string fresh_name(std::unordered_set<std::string>& taken, int& counter) {
  for (;;) {
    std::string n = "FV" + std::to_string(++counter);
    if (taken.insert(n).second) return n;
  }
}

}  // namespace

int dag_depth(const ExprDag& dag) {
  int d = 0;
  for (const Output& o : dag.outputs()) d = std::max(d, dag.depth(o.node));
  return d;
}

double cost_info(const ExprDag& dag, NodeId node) {
  return cost_with_depth(dag, node, dag_depth(dag));
}

CutChoice select_cut_set(const ExprDag& dag, const AnalysisConfig& cfg) {
  CutChoice c;
  const int D = dag_depth(dag);
  const auto path = on_output_paths(dag);
  const auto outs = output_nodes(dag);
  std::map<int, std::vector<NodeId>> levels;
  int lo = cfg.min_depth, hi = cfg.max_depth;
  if (cfg.force_depth) lo = hi = *cfg.force_depth;
  hi = std::min(hi, D - 1);
  for (NodeId i = 0; i < static_cast<NodeId>(dag.size()); ++i) {
    const int d = dag.depth(i);
    if (d < lo || d > hi || d < 1) continue;
    if (!path[i] || outs[i] || dag.node(i).is_leaf()) continue;
    levels[d].push_back(i);
  }
  if (cfg.force_depth) {
    if (auto it = levels.find(*cfg.force_depth); it != levels.end()) {
      c.depth = it->first;
      c.nodes = it->second;
    }
    return c;
  }
  double best = -1.0;
  for (const auto& [d, nodes] : levels) {
    double sum = 0.0;
    for (NodeId n : nodes) sum += cost_with_depth(dag, n, D);
    const double mean = sum / static_cast<double>(nodes.size());
    c.mean_cost.push_back(mean);
    if (mean > best) {  // strict: ties keep the smaller depth
      best = mean;
      c.depth = d;
      c.nodes = nodes;
    }
  }
  return c;
}

AbstractionResult abstract_round(const ExprDag& dag, const std::vector<NodeId>& cuts,
                                 const AnalysisConfig& cfg, int round) {
  for (NodeId v : cuts) {
    const Node& n = dag.node(v);
    if (n.is_leaf()) throw std::invalid_argument("cannot abstract a leaf");
    for (const Output& o : dag.outputs()) {
      if (o.node == v) throw std::invalid_argument("cannot abstract an output");
    }
  }
  AbstractionResult res;
  CutReport& rep = res.report;
  rep.round = round;
  rep.dag_depth_before = dag_depth(dag);
  rep.depth = cuts.empty() ? 0 : dag.depth(cuts.front());
  rep.cuts.resize(cuts.size());

  SymContext ctx(cfg.max_opcount);
  const SymbolicDag sd = symbolic_values(ctx, dag, cuts);
  const auto errors = node_errors(dag, sd, cfg);
  std::vector<PreparedBound> prep(cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    CutNode& c = rep.cuts[i];
    c.node = cuts[i];
    c.label = dag.label(cuts[i]);
    try {
      prep[i] = prepare_bound(ctx, dag, cuts[i], sd, errors, cfg);
    } catch (const std::exception& e) {
      c.skipped = true;
      c.reason = e.what();
    }
  }
  AnalysisConfig inner = cfg;
  inner.threads = cuts.size() > 1 ? 1 : cfg.threads;
  detail::parallel_for(cuts.size(), cfg.threads, [&](std::size_t i) {
    CutNode& c = rep.cuts[i];
    if (c.skipped) return;
    try {
      const BoundResult b = solve_bound(prep[i], dag, inner);
      if (!std::isfinite(b.range.lo) || !std::isfinite(b.range.hi)) {
        c.skipped = true;
        c.reason = "unbounded value range";
        return;
      }
      c.range = b.range;
      c.error = b.bound;
      c.converged = b.converged;
      c.boxes = b.error_opt.boxes_processed + b.max_opt.boxes_processed +
                b.min_opt.boxes_processed;
    } catch (const std::exception& e) {
      c.skipped = true;
      c.reason = e.what();
    }
  });

  // Rebuild everything above the cuts.
  std::unordered_set<std::string> taken;
  int fv_counter = 0;
  for (const InputVar& in : dag.inputs()) {
    taken.insert(in.name);
    if (in.abstracted) ++fv_counter;
  }
  for (NodeId i = 0; i < static_cast<NodeId>(dag.size()); ++i) taken.insert(dag.label(i));

  std::vector<int> cut_index(dag.size(), -1);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!rep.cuts[i].skipped) cut_index[cuts[i]] = static_cast<int>(i);
  }
  std::vector<bool> need(dag.size(), false);
  for (const Output& o : dag.outputs()) need[o.node] = true;
  for (NodeId i = static_cast<NodeId>(dag.size()) - 1; i >= 0; --i) {
    if (!need[i] || cut_index[i] >= 0) continue;
    for (NodeId c : dag.nodes()[i].children()) need[c] = true;
  }

  DagBuilder b;
  std::vector<NodeId> map(dag.size(), -1);
  for (std::size_t k = 0; k < dag.inputs().size(); ++k) {
    map[dag.input_node(static_cast<int>(k))] = b.input(dag.inputs()[k]);
  }
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    CutNode& c = rep.cuts[i];
    if (c.skipped) continue;
    c.variable = fresh_name(taken, fv_counter);
    InputVar fv;
    fv.name = c.variable;
    fv.range = c.range;
    fv.precision = dag.node(cuts[i]).prec;
    fv.incoming_error = Interval{-c.error, c.error};
    fv.abstracted = true;
    map[cuts[i]] = b.input(std::move(fv));
  }
  for (NodeId i = 0; i < static_cast<NodeId>(dag.size()); ++i) {
    if (!need[i] || map[i] >= 0) continue;
    const Node& n = dag.nodes()[i];
    if (n.op == OpKind::cnst) {
      map[i] = b.constant(n.literal);
    } else {
      map[i] = b.op(n.op, n.prec, map[n.ch[0]], n.nchildren == 2 ? map[n.ch[1]] : -1);
    }
    if (!dag.label(i).empty()) b.label(map[i], dag.label(i));
  }
  for (const Output& o : dag.outputs()) b.output(o.name, map[o.node]);
  b.set_source_op_count(dag.source_op_count());
  res.dag = std::move(b).build();
  rep.dag_depth_after = dag_depth(res.dag);
  return res;
}

IncrementalResult run_incremental(const ExprDag& dag, const AnalysisConfig& cfg) {
  IncrementalResult r;
  ExprDag cur = dag;
  const int limit = cfg.force_depth ? *cfg.force_depth : cfg.max_depth;
  int round = 0;
  while (cfg.abstraction_enabled) {
    const int D = dag_depth(cur);
    if (D <= limit) break;
    const CutChoice choice = select_cut_set(cur, cfg);
    if (choice.nodes.empty()) {
      r.warnings.push_back("no internal nodes inside the abstraction window at depth " +
                           std::to_string(D) + "; solving directly");
      break;
    }
    AbstractionResult ar = abstract_round(cur, choice.nodes, cfg, ++round);
    bool any = false;
    for (const CutNode& c : ar.report.cuts) any = any || !c.skipped;
    r.rounds.push_back(ar.report);
    if (!any) {
      r.warnings.push_back("every cut of round " + std::to_string(round) +
                           " failed; solving directly");
      break;
    }
    cur = std::move(ar.dag);
    if (dag_depth(cur) >= D) {
      r.warnings.push_back("abstraction made no progress; solving directly");
      break;
    }
  }

  SymContext ctx(cfg.max_opcount);
  std::vector<NodeId> roots;
  for (const Output& o : cur.outputs()) roots.push_back(o.node);
  const SymbolicDag sd = symbolic_values(ctx, cur, roots);
  const auto errors = node_errors(cur, sd, cfg);
  std::vector<PreparedBound> prep;
  for (NodeId o : roots) prep.push_back(prepare_bound(ctx, cur, o, sd, errors, cfg));
  r.outputs.resize(roots.size());
  AnalysisConfig inner = cfg;
  inner.threads = roots.size() > 1 ? 1 : cfg.threads;
  detail::parallel_for(roots.size(), cfg.threads, [&](std::size_t i) {
    OutputBound& ob = r.outputs[i];
    ob.name = cur.outputs()[i].name;
    ob.node = roots[i];
    ob.op_count = op_count(dag, dag.outputs()[i].node);
    ob.result = solve_bound(prep[i], cur, inner);
  });
  r.final_dag = std::move(cur);
  return r;
}

}  // namespace fperr

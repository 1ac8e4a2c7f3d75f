// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fperr/error_analysis.hpp"
#include "fperr/expr_ir.hpp"

namespace fperr {

/// -(d/D) log2(d/D) * opCount * fanout, with D the depth of the whole DAG.
double cost_info(const ExprDag& dag, NodeId node);

struct CutChoice {
  int depth = 0;               // 0 when nothing qualifies
  std::vector<NodeId> nodes;   // ascending ids
  std::vector<double> mean_cost;  // per candidate depth (window order), for reports
};

/// Level to abstract next: the on-path internal nodes at the depth of
/// maximal mean cost inside [min_depth, max_depth] (or at force_depth).
CutChoice select_cut_set(const ExprDag& dag, const AnalysisConfig& cfg);

struct CutNode {
  NodeId node = -1;  // id in the DAG the round started from
  std::string label;
  std::string variable;  // name of the free variable that replaced it
  Interval range;
  double error = 0.0;
  bool skipped = false;  // its queries failed; the node stays in place
  std::string reason;
  std::int64_t boxes = 0;
  bool converged = true;
};

struct CutReport {
  int round = 0;
  int depth = 0;
  int dag_depth_before = 0;
  int dag_depth_after = 0;
  std::vector<CutNode> cuts;
};

struct AbstractionResult {
  ExprDag dag;
  CutReport report;
};

AbstractionResult abstract_round(const ExprDag& dag, const std::vector<NodeId>& cuts,
                                 const AnalysisConfig& cfg, int round = 1);

struct OutputBound {
  std::string name;
  NodeId node = -1;  // in the final DAG
  BoundResult result;
  int op_count = 0;  // in the original program
};

struct IncrementalResult {
  std::vector<OutputBound> outputs;
  std::vector<CutReport> rounds;
  std::vector<std::string> warnings;
  ExprDag final_dag;
};

/// Abstract level by level until the DAG is no deeper than max_depth, then
/// solve the residual program directly.
IncrementalResult run_incremental(const ExprDag& dag, const AnalysisConfig& cfg);

/// Deepest output.
int dag_depth(const ExprDag& dag);

}  // namespace fperr

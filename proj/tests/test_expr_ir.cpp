// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "fperr/expr_ir.hpp"
#include "support.hpp"

using namespace fperr;

namespace {

const char* kExample = R"(
# S = (x*(x+y)+z)*3.5
INPUTS {
  x fl64 : (0, 1);
  y fl64 : (0, 1);
  z fl64 : (-1, 1);
}
OUTPUTS { S; }
EXPRS {
  v1 = x + y;
  v2 = v1 * x;
  v3 = v2 + z;
  S = v3 * 3.5;
}
)";

NodeId by_label(const ExprDag& d, const std::string& name) {
  for (NodeId i = 0; i < static_cast<NodeId>(d.size()); ++i) {
    if (d.label(i) == name) return i;
  }
  return -1;
}

}  // namespace

TEST(ExprIr, IllustrativeExampleStructure) {
  const ExprDag d = parse_program(kExample);
  EXPECT_EQ(d.inputs().size(), 3U);
  EXPECT_EQ(op_count(d, d.output("S")), 4);
  EXPECT_EQ(d.depth(by_label(d, "v1")), 1);
  EXPECT_EQ(d.depth(by_label(d, "v2")), 2);
  EXPECT_EQ(d.depth(by_label(d, "v3")), 3);
  EXPECT_EQ(d.depth(d.output("S")), 4);
  EXPECT_EQ(d.fanout(d.input_node(0)), 2);  // x feeds v1 and v2
  EXPECT_EQ(d.node(by_label(d, "v2")).op, OpKind::mul);
}

TEST(ExprIr, PassthroughHasNoOps) {
  const ExprDag d = parse_program("INPUTS { x fl64 : (0, 1); } OUTPUTS { s; } EXPRS { s = x; }");
  EXPECT_EQ(d.inputs().size(), 1U);
  EXPECT_EQ(d.output("s"), d.input_node(0));
  EXPECT_EQ(op_count(d, d.output("s")), 0);
}

TEST(ExprIr, HashConsingSharesSubtrees) {
  const ExprDag d = parse_program(
      "INPUTS { x fl64 : (0, 1); y fl64 : (0, 1); } OUTPUTS { s; } "
      "EXPRS { s = (x+y)+(x+y); }");
  EXPECT_EQ(op_count(d, d.output("s")), 2);
  EXPECT_EQ(d.source_op_count(), 3);
  const Node& root = d.node(d.output("s"));
  EXPECT_EQ(root.ch[0], root.ch[1]);
  EXPECT_EQ(d.fanout(root.ch[0]), 2);
}

TEST(ExprIr, ChainDepthsAndFanouts) {
  const ExprDag d = parse_program(
      "INPUTS { x fl64 : (0, 1); } OUTPUTS { a5; } EXPRS { a1 = x + 1; a2 = a1 + 2; "
      "a3 = a2 + 3; a4 = a3 + 4; a5 = a4 + 5; }");
  for (int k = 1; k <= 5; ++k) {
    const NodeId n = by_label(d, "a" + std::to_string(k));
    EXPECT_EQ(d.depth(n), k);
    EXPECT_EQ(d.fanout(n), k == 5 ? 0 : 1);
  }
}

TEST(ExprIr, OpCountOfInvalidNodeThrows) {
  const ExprDag d = parse_program(kExample);
  EXPECT_THROW(op_count(d, 1000), std::out_of_range);
}

TEST(ExprIr, PrecedenceAndUnaryMinus) {
  const ExprDag d = parse_program(
      "INPUTS { x fl64 : (1, 2); y fl64 : (1, 2); } OUTPUTS { f; } "
      "EXPRS { f = -x * y + -3.0 * x - y / 2; }");
  // ((-x)*y + (-3)*x) - y/2: neg, mul, mul, add, div, sub
  EXPECT_EQ(op_count(d, d.output("f")), 6);
  const Node& root = d.node(d.output("f"));
  EXPECT_EQ(root.op, OpKind::sub);
  bool saw_neg_literal = false;
  for (const Node& n : d.nodes()) saw_neg_literal |= (n.op == OpKind::cnst && n.literal == -3.0);
  EXPECT_TRUE(saw_neg_literal);
}

TEST(ExprIr, DefaultPrecisionIsWidestOperand) {
  const ExprDag d = parse_program(
      "INPUTS { a fl32 : (0, 1); b fl32 : (0, 1); c fl64 : (0, 1); } OUTPUTS { p; q; r; k; } "
      "EXPRS { p = a + b; q = p * c; r rnd32 = c * c; k = 1.5 * 2; }");
  EXPECT_EQ(d.node(d.output("p")).prec, Precision::fl32);
  EXPECT_EQ(d.node(d.output("q")).prec, Precision::fl64);
  EXPECT_EQ(d.node(d.output("r")).prec, Precision::fl32);
  EXPECT_EQ(d.node(d.output("k")).prec, Precision::fl64);
  EXPECT_EQ(unit_roundoff(Precision::fl32), std::ldexp(1.0, -24));
  EXPECT_EQ(unit_roundoff(Precision::fl64), std::ldexp(1.0, -53));
  EXPECT_EQ(unit_roundoff(Precision::fl64), std::ldexp(1.0, 1 - mantissa_bits(Precision::fl64)) / 2);
}

TEST(ExprIr, IncomingErrorAndFunctions) {
  const ExprDag d = parse_program(
      "INPUTS { x fl64 : (1e-3, 2.5) +- 1e-10; } OUTPUTS { f; } "
      "EXPRS { f = sqrt(x) + exp(x) - log(x) * sin(x) / cos(x); }");
  EXPECT_EQ(d.inputs()[0].incoming_error, (Interval{-1e-10, 1e-10}));
  EXPECT_EQ(op_count(d, d.output("f")), 9);
}

TEST(ExprIr, RoundingFactors) {
  RoundingFactors rf;
  EXPECT_EQ(rf.of(OpKind::add), 1.0);
  EXPECT_EQ(rf.of(OpKind::sqrt), 1.0);
  EXPECT_EQ(rf.of(OpKind::neg), 0.0);
  EXPECT_EQ(rf.of(OpKind::cnst), 0.0);
  EXPECT_EQ(rf.of(OpKind::input), 0.0);
  EXPECT_EQ(rf.of(OpKind::sin), 2.0);
  rf.set(OpKind::sin, 1.5);
  EXPECT_EQ(rf.of(OpKind::sin), 1.5);
  EXPECT_THROW(rf.set(OpKind::add, 3.0), std::invalid_argument);
  EXPECT_THROW(rf.set(OpKind::exp, 0.5), std::invalid_argument);
}

struct BadProgram {
  const char* text;
  const char* fragment;
  int line;
};

class ParseErrors : public ::testing::TestWithParam<BadProgram> {};

TEST_P(ParseErrors, Reported) {
  const BadProgram& p = GetParam();
  try {
    parse_program(p.text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(p.fragment), std::string::npos) << e.what();
    EXPECT_EQ(e.line, p.line);
    EXPECT_GT(e.col, 0);
  }
}

INSTANTIATE_TEST_SUITE_P(
    ExprIr, ParseErrors,
    ::testing::Values(
        BadProgram{"INPUTS { x fl64 : (0, 1); }\nOUTPUTS { f; }\nEXPRS { f = x + ; }", "unexpected", 3},
        BadProgram{"INPUTS { x fl64 : (0, 1); }\nOUTPUTS { f; }\nEXPRS { f = x + w; }", "undefined identifier w", 3},
        BadProgram{"INPUTS { x fl64 : (0, 1); }\nOUTPUTS { f; }\nEXPRS { f = x; f = x + 1; }", "duplicate definition", 3},
        BadProgram{"INPUTS { x fl64 : (0, 1);\n x fl32 : (0, 1); }", "duplicate definition", 2},
        BadProgram{"INPUTS {\n x fl64 : (2, 1); }", "reversed", 2},
        BadProgram{"INPUTS { x fl64 : (0, 1); }\nOUTPUTS { f; }\nEXPRS { f = x / 0.0; }", "literal 0", 3},
        BadProgram{"INPUTS { x fl64 : (0, 1); }\nOUTPUTS { g; }\nEXPRS { f = x; }", "undefined output g", 2},
        BadProgram{"INPUTS { x fl16 : (0, 1); }", "fl32 or fl64", 1},
        BadProgram{"INPUTS { x fl64 : (0, 1) $ }", "unexpected character", 1}));

TEST(ExprIr, RoundTripIsStable) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const std::string src = fperr::testing::random_program(rng, 6, 3);
    const ExprDag a = parse_program(src);
    const ExprDag b = parse_program(unparse(a));
    ASSERT_TRUE(structurally_equal(a, b)) << src << "\n---\n" << unparse(a);
    EXPECT_EQ(op_count(a), op_count(b));
    const ExprDag c = parse_program(unparse(b));
    EXPECT_EQ(unparse(b), unparse(c));
  }
}

TEST(ExprIr, RoundTripHandlesMixedPrecisionAndNegativeLiterals) {
  const ExprDag a = parse_program(
      "INPUTS { a fl32 : (-1, 1) +- 0.5; b fl64 : (0.1, 0.3); } OUTPUTS { o; a; } "
      "EXPRS { t rnd32 = -a * -0.0 + -2.5; o = sqrt(b) * t - (-(b)); }");
  const ExprDag b = parse_program(unparse(a));
  EXPECT_TRUE(structurally_equal(a, b)) << unparse(a);
}

TEST(ExprIr, OpCountInvariantUnderRenaming) {
  const std::string src = kExample;
  const std::string renamed =
      std::regex_replace(std::regex_replace(src, std::regex("\\bv(\\d)"), "tmp_$1"), std::regex("\\bS\\b"), "Out");
  const ExprDag a = parse_program(src);
  const ExprDag b = parse_program(renamed);
  EXPECT_EQ(op_count(a, a.outputs()[0].node), op_count(b, b.outputs()[0].node));
}

TEST(ExprIr, OpByOpIntervalEvaluation) {
  const ExprDag d = parse_program(
      "INPUTS { x fl64 : (-1, 5); } OUTPUTS { c; } EXPRS { c = x * x * x; }");
  const auto v = eval_intervals(d);
  const Interval c = v[d.output("c")];
  EXPECT_LE(c.lo, -25.0);  // dependency problem of plain evaluation
  EXPECT_GE(c.hi, 125.0);
}

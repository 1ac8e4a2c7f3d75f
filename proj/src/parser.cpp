// SPDX-License-Identifier: Apache-2.0
// DSL front end: INPUTS / OUTPUTS / EXPRS sections.
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fperr/expr_ir.hpp"

namespace fperr {
namespace {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double value = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t b = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        t.kind = Tok::ident;
        t.text = std::string(src_.substr(b, pos_ - b));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number(t);
      } else if (std::string_view("(){};:,=+-*/").find(c) != std::string_view::npos) {
        advance();
        t.kind = Tok::punct;
        t.text = std::string(1, c);
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void lex_number(Token& t) {
    const std::size_t b = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '.')) {
      advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        while (pos_ < q) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          advance();
        }
      }
    }
    t.kind = Tok::number;
    t.text = std::string(src_.substr(b, pos_ - b));
    char* end = nullptr;
    t.value = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size()) {
      throw ParseError("malformed number '" + t.text + "'", t.line, t.col);
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct Ast {
  enum Kind { lit, ident, unary, binary, call } kind = lit;
  OpKind op = OpKind::cnst;
  double value = 0.0;
  std::string name;
  std::unique_ptr<Ast> a, b;
  int line = 0, col = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  ExprDag run() {
    std::set<std::string> seen;
    while (peek().kind != Tok::end) {
      const Token& t = expect_ident();
      if (!seen.insert(t.text).second) {
        throw ParseError("section " + t.text + " appears twice", t.line, t.col);
      }
      expect_punct("{");
      if (t.text == "INPUTS") {
        parse_inputs();
      } else if (t.text == "OUTPUTS") {
        parse_outputs();
      } else if (t.text == "EXPRS") {
        parse_exprs();
      } else {
        throw ParseError("unknown section " + t.text, t.line, t.col);
      }
      expect_punct("}");
    }
    for (const auto& [name, tok] : pending_outputs_) {
      auto it = names_.find(name);
      if (it == names_.end()) {
        throw ParseError("undefined output " + name, tok.line, tok.col);
      }
      b_.output(name, it->second.node);
    }
    b_.set_source_op_count(source_ops_);
    return std::move(b_).build();
  }

 private:
  struct Binding {
    NodeId node;
    Precision prec;
  };

  const Token& peek(int k = 0) const {
    const std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_punct(const char* p, int k = 0) const {
    return peek(k).kind == Tok::punct && peek(k).text == p;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.col);
  }
  void expect_punct(const char* p) {
    if (!is_punct(p)) {
      fail(std::string("expected '") + p + "' but found '" + describe(peek()) + "'", peek());
    }
    next();
  }
  const Token& expect_ident() {
    if (peek().kind != Tok::ident) fail("expected identifier, found '" + describe(peek()) + "'", peek());
    return next();
  }
  static std::string describe(const Token& t) {
    return t.kind == Tok::end ? std::string("end of input") : t.text;
  }

  double signed_number() {
    bool negate = false;
    if (is_punct("-")) {
      next();
      negate = true;
    } else if (is_punct("+")) {
      next();
    }
    if (peek().kind != Tok::number) fail("expected number", peek());
    const double v = next().value;
    return negate ? -v : v;
  }

  void declare(const Token& t, Binding b) {
    if (!names_.emplace(t.text, b).second) fail("duplicate definition of " + t.text, t);
  }

  void parse_inputs() {
    while (!is_punct("}")) {
      const Token name = expect_ident();
      const Token ty = expect_ident();
      InputVar v;
      v.name = name.text;
      if (ty.text == "fl32") {
        v.precision = Precision::fl32;
      } else if (ty.text == "fl64") {
        v.precision = Precision::fl64;
      } else {
        fail("expected fl32 or fl64, found " + ty.text, ty);
      }
      expect_punct(":");
      const Token open = peek();
      expect_punct("(");
      const double lo = signed_number();
      expect_punct(",");
      const double hi = signed_number();
      expect_punct(")");
      if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        fail("empty or reversed interval for " + name.text, open);
      }
      v.range = {lo, hi};
      if (is_punct("+") && is_punct("-", 1)) {
        next();
        next();
        const Token et = peek();
        const double e = signed_number();
        if (!(e >= 0.0) || !std::isfinite(e)) fail("incoming error must be >= 0", et);
        v.incoming_error = {-e, e};
      }
      expect_punct(";");
      if (names_.contains(v.name)) fail("duplicate definition of " + v.name, name);
      const Precision p = v.precision;
      const NodeId id = b_.input(std::move(v));
      declare(name, {id, p});
    }
  }

  void parse_outputs() {
    while (!is_punct("}")) {
      const Token name = expect_ident();
      expect_punct(";");
      for (const auto& [n, _] : pending_outputs_) {
        if (n == name.text) fail("duplicate output " + name.text, name);
      }
      pending_outputs_.emplace_back(name.text, name);
    }
  }

  void parse_exprs() {
    while (!is_punct("}")) {
      const Token name = expect_ident();
      std::optional<Precision> prec;
      if (peek().kind == Tok::ident && (peek().text == "rnd32" || peek().text == "rnd64")) {
        prec = next().text == "rnd32" ? Precision::fl32 : Precision::fl64;
      }
      expect_punct("=");
      auto ast = parse_expr();
      expect_punct(";");
      if (names_.contains(name.text)) fail("duplicate definition of " + name.text, name);
      const Precision p = prec ? *prec : widest(*ast).value_or(Precision::fl64);
      const NodeId id = emit(*ast, p);
      b_.label(id, name.text);
      declare(name, {id, p});
    }
  }

  std::optional<Precision> widest(const Ast& e) const {
    if (e.kind == Ast::ident) return names_.at(e.name).prec;
    std::optional<Precision> r;
    for (const Ast* c : {e.a.get(), e.b.get()}) {
      if (c == nullptr) continue;
      const auto p = widest(*c);
      if (p) r = r ? wider(*r, *p) : *p;
    }
    return r;
  }

  NodeId emit(const Ast& e, Precision p) {
    switch (e.kind) {
      case Ast::lit: return b_.constant(e.value);
      case Ast::ident: return names_.at(e.name).node;
      case Ast::unary:
      case Ast::call: {
        const NodeId a = emit(*e.a, p);
        ++source_ops_;
        return b_.op(e.op, p, a);
      }
      case Ast::binary: {
        const NodeId a = emit(*e.a, p);
        const NodeId c = emit(*e.b, p);
        if (e.op == OpKind::div && b_.node(c).op == OpKind::cnst && b_.node(c).literal == 0.0) {
          throw ParseError("division by the literal 0", e.line, e.col);
        }
        ++source_ops_;
        return b_.op(e.op, p, a, c);
      }
    }
    return -1;
  }

  std::unique_ptr<Ast> make(Ast::Kind k, const Token& at) {
    auto n = std::make_unique<Ast>();
    n->kind = k;
    n->line = at.line;
    n->col = at.col;
    return n;
  }

  std::unique_ptr<Ast> parse_expr() {
    auto lhs = parse_term();
    while (is_punct("+") || is_punct("-")) {
      const Token op = next();
      auto n = make(Ast::binary, op);
      n->op = op.text == "+" ? OpKind::add : OpKind::sub;
      n->a = std::move(lhs);
      n->b = parse_term();
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<Ast> parse_term() {
    auto lhs = parse_unary();
    while (is_punct("*") || is_punct("/")) {
      const Token op = next();
      auto n = make(Ast::binary, op);
      n->op = op.text == "*" ? OpKind::mul : OpKind::div;
      n->a = std::move(lhs);
      n->b = parse_unary();
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<Ast> parse_unary() {
    if (is_punct("-")) {
      const Token m = next();
      if (peek().kind == Tok::number) {
        auto n = make(Ast::lit, m);
        n->value = -next().value;
        return n;
      }
      auto n = make(Ast::unary, m);
      n->op = OpKind::neg;
      n->a = parse_unary();
      return n;
    }
    return parse_primary();
  }

  std::unique_ptr<Ast> parse_primary() {
    const Token t = peek();
    if (t.kind == Tok::number) {
      next();
      auto n = make(Ast::lit, t);
      n->value = t.value;
      return n;
    }
    if (is_punct("(")) {
      next();
      auto e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (t.kind == Tok::ident) {
      next();
      static const std::map<std::string, OpKind, std::less<>> fns = {
          {"sqrt", OpKind::sqrt}, {"exp", OpKind::exp}, {"log", OpKind::log},
          {"sin", OpKind::sin},   {"cos", OpKind::cos}};
      auto fn = fns.find(t.text);
      if (fn != fns.end() && is_punct("(")) {
        next();
        auto n = make(Ast::call, t);
        n->op = fn->second;
        n->a = parse_expr();
        expect_punct(")");
        return n;
      }
      if (!names_.contains(t.text)) fail("undefined identifier " + t.text, t);
      auto n = make(Ast::ident, t);
      n->name = t.text;
      return n;
    }
    fail("unexpected '" + describe(t) + "' in expression", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  DagBuilder b_;
  std::unordered_map<std::string, Binding> names_;
  std::vector<std::pair<std::string, Token>> pending_outputs_;
  int source_ops_ = 0;
};

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExprDag parse_program(std::string_view text) { return Parser(text).run(); }

std::string unparse(const ExprDag& dag) {
  std::set<std::string> taken;
  for (const auto& in : dag.inputs()) taken.insert(in.name);
  for (const auto& o : dag.outputs()) taken.insert(o.name);
  std::string prefix = "t_";
  auto clashes = [&] {
    for (const auto& n : taken) {
      if (n.rfind(prefix, 0) == 0) return true;
    }
    return false;
  };
  while (clashes()) prefix = "_" + prefix;

  const auto& nodes = dag.nodes();
  auto ref = [&](NodeId id) -> std::string {
    const Node& n = nodes[id];
    if (n.op == OpKind::input) return dag.inputs()[n.input].name;
    if (n.op == OpKind::cnst) {
      const std::string s = format_double(n.literal);
      return std::signbit(n.literal) ? "(" + s + ")" : s;
    }
    return prefix + std::to_string(id);
  };

  std::ostringstream os;
  os << "INPUTS {\n";
  for (const auto& in : dag.inputs()) {
    os << "  " << in.name << ' ' << precision_name(in.precision) << " : ("
       << format_double(in.range.lo) << ", " << format_double(in.range.hi) << ")";
    if (in.incoming_error.hi != 0.0) os << " +- " << format_double(in.incoming_error.hi);
    os << ";\n";
  }
  os << "}\nOUTPUTS {\n";
  for (const auto& o : dag.outputs()) os << "  " << o.name << ";\n";
  os << "}\nEXPRS {\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.is_leaf()) continue;
    os << "  " << prefix << i << (n.prec == Precision::fl32 ? " rnd32" : " rnd64") << " = ";
    switch (n.op) {
      case OpKind::add: os << ref(n.ch[0]) << " + " << ref(n.ch[1]); break;
      case OpKind::sub: os << ref(n.ch[0]) << " - " << ref(n.ch[1]); break;
      case OpKind::mul: os << ref(n.ch[0]) << " * " << ref(n.ch[1]); break;
      case OpKind::div: os << ref(n.ch[0]) << " / " << ref(n.ch[1]); break;
      case OpKind::neg: os << "-(" << ref(n.ch[0]) << ")"; break;
      default: os << op_name(n.op) << '(' << ref(n.ch[0]) << ')';
    }
    os << ";\n";
  }
  for (const auto& o : dag.outputs()) {
    const Node& n = nodes[o.node];
    if (n.op == OpKind::input && dag.inputs()[n.input].name == o.name) continue;
    os << "  " << o.name << " = " << ref(o.node) << ";\n";
  }
  os << "}\n";
  return os.str();
}

bool structurally_equal(const ExprDag& a, const ExprDag& b) {
  if (a.inputs().size() != b.inputs().size() || a.outputs().size() != b.outputs().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.inputs().size(); ++i) {
    const auto& x = a.inputs()[i];
    const auto& y = b.inputs()[i];
    if (x.name != y.name || !(x.range == y.range) || x.precision != y.precision ||
        !(x.incoming_error == y.incoming_error)) {
      return false;
    }
  }
  std::unordered_map<NodeId, NodeId> fwd, bwd;
  std::vector<std::pair<NodeId, NodeId>> stack;
  for (std::size_t i = 0; i < a.outputs().size(); ++i) {
    if (a.outputs()[i].name != b.outputs()[i].name) return false;
    stack.emplace_back(a.outputs()[i].node, b.outputs()[i].node);
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    auto fx = fwd.find(x);
    auto by = bwd.find(y);
    if (fx != fwd.end() || by != bwd.end()) {
      if (fx == fwd.end() || by == bwd.end() || fx->second != y || by->second != x) return false;
      continue;
    }
    fwd.emplace(x, y);
    bwd.emplace(y, x);
    const Node& nx = a.node(x);
    const Node& ny = b.node(y);
    if (nx.op != ny.op || nx.nchildren != ny.nchildren) return false;
    if (nx.op == OpKind::cnst) {
      if (std::memcmp(&nx.literal, &ny.literal, sizeof(double)) != 0) return false;
      continue;
    }
    if (nx.op == OpKind::input) {
      if (nx.input != ny.input) return false;
      continue;
    }
    if (nx.prec != ny.prec) return false;
    for (int k = 0; k < nx.nchildren; ++k) stack.emplace_back(nx.ch[k], ny.ch[k]);
  }
  return op_count(a) == op_count(b);
}

}  // namespace fperr

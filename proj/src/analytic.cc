#include "fme/analytic.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "fme/error.h"

namespace fme {

struct Expression::Node {
  enum class Op { kNumber, kVariable, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall };
  Op op = Op::kNumber;
  double number = 0.0;
  std::size_t variable = 0;
  std::string function;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

constexpr std::string_view kFunctions[] = {"sin", "cos", "exp", "log", "abs"};

class Parser {
 public:
  Parser(std::string_view text, std::vector<std::string>& variables)
      : text_(text), variables_(variables) {}

  NodePtr ParseAll() {
    NodePtr e = ParseExpr();
    SkipSpace();
    if (pos_ != text_.size()) Fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw ValidationError("expression parse error at position " +
                          std::to_string(pos_) + ": " + what);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool Accept(char c) {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr Binary(Node::Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr ParseExpr() {
    NodePtr lhs = ParseTerm();
    for (;;) {
      if (Accept('+')) {
        lhs = Binary(Node::Op::kAdd, lhs, ParseTerm());
      } else if (Accept('-')) {
        lhs = Binary(Node::Op::kSub, lhs, ParseTerm());
      } else {
        return lhs;
      }
    }
  }

  NodePtr ParseTerm() {
    NodePtr lhs = ParseUnary();
    for (;;) {
      if (Accept('*')) {
        lhs = Binary(Node::Op::kMul, lhs, ParseUnary());
      } else if (Accept('/')) {
        lhs = Binary(Node::Op::kDiv, lhs, ParseUnary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr ParseUnary() {
    if (Accept('-')) {
      auto n = std::make_shared<Node>();
      n->op = Node::Op::kNeg;
      n->lhs = ParseUnary();
      return n;
    }
    return ParsePower();
  }

  NodePtr ParsePower() {
    NodePtr base = ParsePrimary();
    if (Accept('^')) return Binary(Node::Op::kPow, base, ParseUnary());
    return base;
  }

  NodePtr ParsePrimary() {
    SkipSpace();
    if (pos_ >= text_.size()) Fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = ParseExpr();
      if (!Accept(')')) Fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0;
      const char* begin = text_.data() + pos_;
      const auto [ptr, ec] =
          std::from_chars(begin, text_.data() + text_.size(), value);
      if (ec != std::errc()) Fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      auto n = std::make_shared<Node>();
      n->op = Node::Op::kNumber;
      n->number = value;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_' || text_[pos_] == '.')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      SkipSpace();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        bool known = false;
        for (auto f : kFunctions) known = known || f == name;
        if (!known) Fail("unknown function '" + name + "'");
        ++pos_;
        auto n = std::make_shared<Node>();
        n->op = Node::Op::kCall;
        n->function = name;
        n->lhs = ParseExpr();
        if (!Accept(')')) Fail("expected ')'");
        return n;
      }
      auto n = std::make_shared<Node>();
      n->op = Node::Op::kVariable;
      std::size_t index = variables_.size();
      for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i] == name) index = i;
      }
      if (index == variables_.size()) variables_.push_back(name);
      n->variable = index;
      return n;
    }
    Fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::vector<std::string>& variables_;
  std::size_t pos_ = 0;
};

double Eval(const Node& n, std::span<const double> values) {
  switch (n.op) {
    case Node::Op::kNumber:
      return n.number;
    case Node::Op::kVariable:
      return values[n.variable];
    case Node::Op::kNeg:
      return -Eval(*n.lhs, values);
    case Node::Op::kAdd:
      return Eval(*n.lhs, values) + Eval(*n.rhs, values);
    case Node::Op::kSub:
      return Eval(*n.lhs, values) - Eval(*n.rhs, values);
    case Node::Op::kMul:
      return Eval(*n.lhs, values) * Eval(*n.rhs, values);
    case Node::Op::kDiv:
      return Eval(*n.lhs, values) / Eval(*n.rhs, values);
    case Node::Op::kPow:
      return std::pow(Eval(*n.lhs, values), Eval(*n.rhs, values));
    case Node::Op::kCall: {
      const double x = Eval(*n.lhs, values);
      if (n.function == "sin") return std::sin(x);
      if (n.function == "cos") return std::cos(x);
      if (n.function == "exp") return std::exp(x);
      if (n.function == "log") return std::log(x);
      return std::fabs(x);
    }
  }
  return 0.0;
}

void Print(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    Print(*n.lhs, vars, out);
    out += op;
    Print(*n.rhs, vars, out);
    out += ')';
  };
  switch (n.op) {
    case Node::Op::kNumber: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", n.number);
      out += buf;
      break;
    }
    case Node::Op::kVariable:
      out += vars[n.variable];
      break;
    case Node::Op::kNeg:
      out += "(-";
      Print(*n.lhs, vars, out);
      out += ')';
      break;
    case Node::Op::kAdd:
      binary(" + ");
      break;
    case Node::Op::kSub:
      binary(" - ");
      break;
    case Node::Op::kMul:
      binary(" * ");
      break;
    case Node::Op::kDiv:
      binary(" / ");
      break;
    case Node::Op::kPow:
      binary(" ^ ");
      break;
    case Node::Op::kCall:
      out += n.function;
      out += '(';
      Print(*n.lhs, vars, out);
      out += ')';
      break;
  }
}

}  // namespace

Expression Expression::Parse(std::string_view text) {
  Expression e;
  Parser parser(text, e.variables_);
  e.root_ = parser.ParseAll();
  return e;
}

double Expression::Evaluate(std::span<const double> values) const {
  return Eval(*root_, values);
}

std::string Expression::ToString() const {
  std::string out;
  Print(*root_, variables_, out);
  return out;
}

namespace {

std::vector<FeatureSpec> NumericSchema(const std::vector<std::string>& vars) {
  std::vector<FeatureSpec> schema;
  for (const auto& v : vars) schema.push_back({v, ColumnKind::kNumeric, {}});
  return schema;
}

}  // namespace

AnalyticPredictor::AnalyticPredictor(std::string_view expression, std::string target)
    : AnalyticPredictor(Expression::Parse(expression), std::string(expression),
                        std::move(target)) {}

AnalyticPredictor::AnalyticPredictor(Expression expression, std::string source,
                                     std::string target)
    : Predictor(NumericSchema(expression.variables()), std::move(target)),
      expression_(std::move(expression)),
      source_(std::move(source)) {}

void AnalyticPredictor::PredictBound(const BoundRows& rows, std::span<double> out) const {
  std::vector<double> values(schema().size());
  for (std::size_t r = 0; r < rows.n_rows(); ++r) {
    for (std::size_t f = 0; f < values.size(); ++f) values[f] = rows.numeric(f, r);
    out[r] = expression_.Evaluate(values);
  }
}

}  // namespace fme

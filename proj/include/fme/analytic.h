#ifndef FME_ANALYTIC_H_
#define FME_ANALYTIC_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fme/predictor.h"

namespace fme {

// Closed-form prediction function over named numeric features, e.g.
// "3*temp^2 - sin(humidity) + 1".
//
// Grammar (usual precedence, ^ binds tighter than unary minus and is right
// associative, so -x^2 = -(x^2)):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | abs
class Expression {
 public:
  struct Node;

  static Expression Parse(std::string_view text);

  // Variables in order of first appearance.
  const std::vector<std::string>& variables() const { return variables_; }
  // `values` is indexed like variables().
  double Evaluate(std::span<const double> values) const;
  // Fully parenthesized canonical form; Parse(ToString()) prints identically.
  std::string ToString() const;

 private:
  std::shared_ptr<const Node> root_;
  std::vector<std::string> variables_;
};

class AnalyticPredictor : public Predictor {
 public:
  explicit AnalyticPredictor(std::string_view expression, std::string target = "");

  std::string_view kind() const override { return "analytic"; }
  const Expression& expression() const { return expression_; }
  // Source text as given.
  const std::string& source() const { return source_; }

 protected:
  void PredictBound(const BoundRows& rows, std::span<double> out) const override;

 private:
  AnalyticPredictor(Expression expression, std::string source, std::string target);

  Expression expression_;
  std::string source_;
};

}  // namespace fme

#endif  // FME_ANALYTIC_H_

#pragma once

// Slot-based numeric evaluator. Flattens a canonical Expr once so the
// integrator's inner loop avoids map lookups and rational conversions.

#include "ocsym/expr.hpp"

#include <vector>

namespace ocsym {

class CompiledExpr {
 public:
  // Throws EvalError if e references a symbol not listed in slots.
  CompiledExpr(const Expr& e, const std::vector<Symbol>& slots);

  // values must hold one entry per slot, in slot order.
  double eval(const double* values) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<int, std::int64_t>> powers;  // (slot, exponent)
    int exp_index = -1;  // index into subs_ when the monomial has an exp factor
  };

  std::vector<Term> compile_poly(const Poly& p, const std::vector<Symbol>& slots);
  double eval_terms(const std::vector<Term>& terms, const double* values) const;

  std::vector<Term> num_;
  std::vector<Term> den_;  // empty means the denominator is 1
  std::vector<CompiledExpr> subs_;
};

}  // namespace ocsym

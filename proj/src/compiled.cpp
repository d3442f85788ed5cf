#include "ocsym/compiled.hpp"

#include <algorithm>
#include <cmath>

namespace ocsym {

namespace {

double ipow(double base, std::int64_t e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace

std::vector<CompiledExpr::Term> CompiledExpr::compile_poly(const Poly& p,
                                                           const std::vector<Symbol>& slots) {
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p) {
    Term t;
    t.coeff = rat_to_double(c);
    for (const auto& [sym, e] : m.symbols) {
      auto it = std::find(slots.begin(), slots.end(), sym);
      if (it == slots.end()) throw EvalError("unbound symbol " + symbol_name(sym));
      t.powers.emplace_back(static_cast<int>(it - slots.begin()), e);
    }
    if (m.exp_arg) {
      t.exp_index = static_cast<int>(subs_.size());
      subs_.emplace_back(*m.exp_arg, slots);
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<Symbol>& slots) {
  num_ = compile_poly(e.num(), slots);
  const bool unit_den = e.den().size() == 1 && e.den().begin()->first.is_unit();
  if (!unit_den) den_ = compile_poly(e.den(), slots);
}

double CompiledExpr::eval_terms(const std::vector<Term>& terms, const double* values) const {
  double sum = 0.0;
  for (const Term& t : terms) {
    double v = t.coeff;
    for (const auto& [slot, e] : t.powers) v *= ipow(values[slot], e);
    if (t.exp_index >= 0) v *= std::exp(subs_[t.exp_index].eval(values));
    sum += v;
  }
  return sum;
}

double CompiledExpr::eval(const double* values) const {
  const double n = eval_terms(num_, values);
  if (den_.empty()) return n;
  const double d = eval_terms(den_, values);
  if (d == 0.0) throw EvalError("division by zero");
  return n / d;
}

}  // namespace ocsym

#include "ocsym/homogeneity.hpp"

#include "ocsym/linalg.hpp"

namespace ocsym {

namespace {

// One row per monomial: columns (alpha, beta_1..beta_n, gamma_1..gamma_m).
// rhs_state is 0 for L-monomials and i for phi_i-monomials.
void append_rows(RatMat& rows, const Problem& p, const Expr& e, int rhs_state) {
  if (!e.is_polynomial()) throw Error("homogeneity detection requires a polynomial problem");
  const int cols = 1 + p.n + p.m;
  for (const auto& [mono, coeff] : e.num()) {
    RatVec row(cols, Rat(0));
    row[0] = 1;  // alpha*(a+1): the -alpha from the right-hand side folded in
    for (const auto& [sym, exp] : mono.symbols) {
      const Rat e_rat(static_cast<long>(exp));
      switch (sym.kind) {
        case SymKind::Time: row[0] += e_rat; break;
        case SymKind::State: row[sym.index] += e_rat; break;
        case SymKind::Control: row[p.n + sym.index] += e_rat; break;
        default: throw Error("unexpected symbol " + symbol_name(sym));
      }
    }
    if (rhs_state > 0) row[rhs_state] -= 1;
    rows.push_back(std::move(row));
  }
}

RatMat degree_system(const Problem& p) {
  RatMat rows;
  append_rows(rows, p, p.lagrangian, 0);
  for (int i = 1; i <= p.n; ++i) append_rows(rows, p, p.dynamics[i - 1], i);
  return rows;
}

Weights from_vector(const Problem& p, const RatVec& v) {
  Weights w;
  w.alpha = v[0];
  w.beta.assign(v.begin() + 1, v.begin() + 1 + p.n);
  w.gamma.assign(v.begin() + 1 + p.n, v.end());
  return w;
}

RatVec to_vector(const Weights& w) {
  RatVec v;
  v.push_back(w.alpha);
  v.insert(v.end(), w.beta.begin(), w.beta.end());
  v.insert(v.end(), w.gamma.begin(), w.gamma.end());
  return v;
}

}  // namespace

std::vector<Weights> detect_weights(const Problem& p) {
  p.validate();
  const RatMat system = degree_system(p);
  const RatMat basis = nullspace(system, 1 + p.n + p.m);
  std::vector<Weights> out;
  out.reserve(basis.size());
  for (const RatVec& v : basis) out.push_back(from_vector(p, v));
  return out;
}

bool weights_satisfy(const Problem& p, const Weights& w) {
  if (static_cast<int>(w.beta.size()) != p.n || static_cast<int>(w.gamma.size()) != p.m)
    return false;
  const RatVec v = to_vector(w);
  for (const RatVec& row : degree_system(p)) {
    Rat dot = 0;
    for (std::size_t i = 0; i < row.size(); ++i) dot += row[i] * v[i];
    if (dot != 0) return false;
  }
  return true;
}

FirstIntegral scaling_integral(const Problem& p, const Weights& w) {
  if (w.all_zero()) throw Error("scaling weights must not all be zero");
  if (!weights_satisfy(p, w)) throw Error("weights do not satisfy the degree system");
  Expr value;
  for (int i = 1; i <= p.n; ++i)
    value += Expr::rational(w.beta[i - 1]) * Expr::symbol(Symbol::costate(i)) *
             Expr::symbol(Symbol::state(i));
  value -= Expr::rational(w.alpha) * hamiltonian(p) * Expr::symbol(Symbol::time());
  return FirstIntegral{std::move(value), IntegralSource::Homogeneity, 1};
}

}  // namespace ocsym

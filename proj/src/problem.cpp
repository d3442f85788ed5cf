#include "ocsym/problem.hpp"

namespace ocsym {

namespace {

void check_symbols(const Problem& p, const Expr& e, const std::string& where) {
  for (const Symbol& s : e.symbols()) {
    switch (s.kind) {
      case SymKind::Time:
        break;
      case SymKind::State:
        if (s.index > p.n)
          throw Error(where + " references " + symbol_name(s) + " but n = " +
                      std::to_string(p.n));
        break;
      case SymKind::Control:
        if (s.index > p.m)
          throw Error(where + " references " + symbol_name(s) + " but m = " +
                      std::to_string(p.m));
        break;
      default:
        throw Error(where + " references " + symbol_name(s) +
                    "; only t, states and controls are allowed");
    }
  }
}

}  // namespace

void Problem::validate() const {
  if (n < 1) throw Error("state dimension n must be >= 1");
  if (m < 1) throw Error("control dimension m must be >= 1");
  if (!(horizon_a < horizon_b)) throw Error("horizon must satisfy a < b");
  if (static_cast<int>(dynamics.size()) != n)
    throw Error("expected " + std::to_string(n) + " dynamics components, got " +
                std::to_string(dynamics.size()));
  check_symbols(*this, lagrangian, "lagrangian");
  for (int i = 0; i < n; ++i)
    check_symbols(*this, dynamics[i], "dynamics[" + std::to_string(i + 1) + "]");
}

bool Problem::is_autonomous() const {
  if (lagrangian.contains(Symbol::time())) return false;
  for (const Expr& phi : dynamics)
    if (phi.contains(Symbol::time())) return false;
  return true;
}

bool Problem::is_polynomial() const {
  if (!lagrangian.is_polynomial()) return false;
  for (const Expr& phi : dynamics)
    if (!phi.is_polynomial()) return false;
  return true;
}

Expr hamiltonian(const Problem& p) {
  Expr h = Expr::symbol(Symbol::costate0()) * p.lagrangian;
  for (int i = 1; i <= p.n; ++i)
    h += Expr::symbol(Symbol::costate(i)) * p.dynamics[i - 1];
  return h;
}

std::vector<Expr> adjoint_rhs(const Problem& p) {
  const Expr h = hamiltonian(p);
  std::vector<Expr> rhs;
  rhs.reserve(p.n);
  for (int i = 1; i <= p.n; ++i) rhs.push_back(-diff(h, Symbol::state(i)));
  return rhs;
}

std::vector<Expr> stationarity(const Problem& p) {
  const Expr h = hamiltonian(p);
  std::vector<Expr> st;
  st.reserve(p.m);
  for (int j = 1; j <= p.m; ++j) st.push_back(diff(h, Symbol::control(j)));
  return st;
}

std::optional<std::vector<Expr>> solve_control(const Problem& p) {
  const Expr two_psi0 = Expr::integer(2) * Expr::symbol(Symbol::costate0());
  const std::vector<Expr> st = stationarity(p);

  // The u-Hessian of H must be exactly 2*psi0*I.
  for (int j = 1; j <= p.m; ++j)
    for (int k = 1; k <= p.m; ++k) {
      const Expr hjk = diff(st[j - 1], Symbol::control(k));
      if (j == k ? hjk != two_psi0 : !hjk.is_zero()) return std::nullopt;
    }

  std::vector<Expr> control;
  control.reserve(p.m);
  for (int j = 1; j <= p.m; ++j) {
    // dH/du_j = 2*psi0*u_j + g_j with g_j independent of u.
    const Expr g = st[j - 1] - two_psi0 * Expr::symbol(Symbol::control(j));
    for (int k = 1; k <= p.m; ++k)
      if (g.contains(Symbol::control(k))) return std::nullopt;
    control.push_back(-g / two_psi0);
  }
  return control;
}

Expr total_derivative(const Problem& p, const Expr& g) {
  Expr d = diff(g, Symbol::time());
  for (int i = 1; i <= p.n; ++i) d += diff(g, Symbol::state(i)) * p.dynamics[i - 1];
  for (int j = 1; j <= p.m; ++j)
    d += diff(g, Symbol::control(j)) * Expr::symbol(Symbol::control_dot(j));
  return d;
}

}  // namespace ocsym

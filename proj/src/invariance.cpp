#include "ocsym/invariance.hpp"

namespace ocsym {

namespace {

bool contains_udot(const Expr& e, int m) {
  for (int j = 1; j <= m; ++j)
    if (e.contains(Symbol::control_dot(j))) return true;
  return false;
}

void note_residual(InvarianceReport& rep, const Expr& residual, int m) {
  if (!residual.is_zero()) {
    rep.passed = false;
    if (contains_udot(residual, m)) rep.udot_dependence = true;
  }
}

}  // namespace

GeneratorResiduals generator_residuals(const Problem& p, const GeneratorComponent& g) {
  const Expr dtau = total_derivative(p, g.tau);

  auto directional = [&](const Expr& target) {
    // dTarget/dt*tau + dTarget/dx.xi + dTarget/du.upsilon + Target*D_t tau
    Expr v = diff(target, Symbol::time()) * g.tau;
    for (int i = 1; i <= p.n; ++i) v += diff(target, Symbol::state(i)) * g.xi[i - 1];
    for (int j = 1; j <= p.m; ++j) v += diff(target, Symbol::control(j)) * g.upsilon[j - 1];
    return v + target * dtau;
  };

  GeneratorResiduals res;
  res.lagrangian = total_derivative(p, g.f) - directional(p.lagrangian);
  res.dynamics.reserve(p.n);
  for (int i = 0; i < p.n; ++i)
    res.dynamics.push_back(total_derivative(p, g.xi[i]) - directional(p.dynamics[i]));
  return res;
}

InvarianceReport check_generator(const Problem& p, const Generator& g) {
  g.validate(p);
  InvarianceReport rep;
  rep.passed = true;
  for (const GeneratorComponent& comp : g.components) {
    GeneratorResiduals res = generator_residuals(p, comp);
    note_residual(rep, res.lagrangian, p.m);
    for (const Expr& r : res.dynamics) note_residual(rep, r, p.m);
    rep.lagrangian_residuals.push_back(std::move(res.lagrangian));
    rep.dynamics_residuals.push_back(std::move(res.dynamics));
  }
  return rep;
}

InvarianceReport check_family(const Problem& p, const Family& fam) {
  fam.validate(p);

  // Compose through the family: replace (t, x, u) by (T, X, U).
  std::map<Symbol, Expr> through;
  through.emplace(Symbol::time(), fam.T);
  for (int i = 1; i <= p.n; ++i) through.emplace(Symbol::state(i), fam.X[i - 1]);
  for (int j = 1; j <= p.m; ++j) through.emplace(Symbol::control(j), fam.U[j - 1]);

  const Expr dT = total_derivative(p, fam.T);

  // E_L(s) = L o h^s * D_t T - L - D_t F; E_phi_i(s) = phi_i o h^s * D_t T - D_t X_i.
  std::vector<Expr> residual_fns;
  residual_fns.push_back(substitute(p.lagrangian, through) * dT - p.lagrangian -
                         total_derivative(p, fam.F));
  for (int i = 0; i < p.n; ++i)
    residual_fns.push_back(substitute(p.dynamics[i], through) * dT -
                           total_derivative(p, fam.X[i]));

  std::map<Symbol, Expr> at_zero;
  for (int k = 1; k <= fam.r; ++k) at_zero.emplace(Symbol::param(k), Expr());

  InvarianceReport rep;
  rep.passed = true;
  rep.dynamics_residuals.assign(fam.r, {});

  std::vector<Expr> remainders;
  for (std::size_t idx = 0; idx < residual_fns.size(); ++idx) {
    const Expr& residual_fn = residual_fns[idx];

    const Expr order0 = substitute(residual_fn, at_zero);
    note_residual(rep, order0, p.m);
    rep.order0_residuals.push_back(order0);

    Expr remainder = residual_fn - order0;
    for (int k = 1; k <= fam.r; ++k) {
      const Expr order1 = substitute(diff(residual_fn, Symbol::param(k)), at_zero);
      note_residual(rep, order1, p.m);
      remainder -= order1 * Expr::symbol(Symbol::param(k));
      if (idx == 0)
        rep.lagrangian_residuals.push_back(order1);
      else
        rep.dynamics_residuals[k - 1].push_back(order1);
    }
    remainders.push_back(std::move(remainder));
  }

  rep.lagrangian_remainder = std::move(remainders.front());
  rep.dynamics_remainders.assign(remainders.begin() + 1, remainders.end());
  return rep;
}

}  // namespace ocsym

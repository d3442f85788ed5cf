#include "ocsym/noether.hpp"

#include "ocsym/invariance.hpp"

namespace ocsym {

FirstIntegral first_integral(const Problem& p, const Generator& g, int k,
                             bool enforce_conditions) {
  g.validate(p);
  if (k < 1 || k > g.r()) throw Error("generator has no parameter " + std::to_string(k));
  if (enforce_conditions && !check_generator(p, g).passed)
    throw Error("generator fails the invariance necessary conditions");

  const GeneratorComponent& comp = g.components[k - 1];
  Expr value = Expr::symbol(Symbol::costate0()) * comp.f;
  for (int i = 1; i <= p.n; ++i)
    value += Expr::symbol(Symbol::costate(i)) * comp.xi[i - 1];
  value -= hamiltonian(p) * comp.tau;
  return FirstIntegral{std::move(value), IntegralSource::FromGenerator, k};
}

Expr verify_symbolic(const Problem& p, const FirstIntegral& c, const Generator& g) {
  g.validate(p);
  if (c.param_index < 1 || c.param_index > g.r())
    throw Error("integral refers to parameter " + std::to_string(c.param_index) +
                " but the generator has " + std::to_string(g.r()));
  const GeneratorComponent& comp = g.components[c.param_index - 1];
  const std::vector<Expr> psi_dot = adjoint_rhs(p);
  const Expr h = hamiltonian(p);

  // dC/dt with xdot -> phi, psidot -> -dH/dx and formal udot symbols.
  Expr dc = total_derivative(p, c.value);
  for (int i = 1; i <= p.n; ++i)
    dc += diff(c.value, Symbol::costate(i)) * psi_dot[i - 1];

  // Along extremals dH/du = 0 kills both the upsilon term and the formal
  // udot terms; subtracting the explicit multiple makes the identity exact.
  Expr stationarity_multiple;
  for (int j = 1; j <= p.m; ++j)
    stationarity_multiple +=
        diff(h, Symbol::control(j)) *
        (comp.upsilon[j - 1] - comp.tau * Expr::symbol(Symbol::control_dot(j)));

  return dc - stationarity_multiple;
}

FirstIntegral gauge_adjust(const FirstIntegral& c, const Expr& delta_f) {
  for (const Symbol& s : delta_f.symbols())
    if (s.kind != SymKind::Time && s.kind != SymKind::State && s.kind != SymKind::Control)
      throw Error("gauge adjustment must live in (t, x, u); found " + symbol_name(s));
  FirstIntegral adjusted = c;
  adjusted.value = c.value + Expr::symbol(Symbol::costate0()) * delta_f;
  return adjusted;
}

}  // namespace ocsym

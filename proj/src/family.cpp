#include "ocsym/family.hpp"

namespace ocsym {

namespace {

std::map<Symbol, Expr> origin_bindings(int r) {
  std::map<Symbol, Expr> at_zero;
  for (int k = 1; k <= r; ++k) at_zero.emplace(Symbol::param(k), Expr());
  return at_zero;
}

void check_family_symbols(const Problem& p, int r, const Expr& e, const std::string& where) {
  for (const Symbol& s : e.symbols()) {
    bool ok = s.kind == SymKind::Time ||
              (s.kind == SymKind::State && s.index <= p.n) ||
              (s.kind == SymKind::Control && s.index <= p.m) ||
              (s.kind == SymKind::Param && s.index <= r);
    if (!ok)
      throw Error(where + " references " + symbol_name(s) +
                  "; allowed symbols are t, x, u and the family parameters");
  }
}

void check_generator_symbols(const Problem& p, const Expr& e, const std::string& where) {
  for (const Symbol& s : e.symbols()) {
    bool ok = s.kind == SymKind::Time ||
              (s.kind == SymKind::State && s.index <= p.n) ||
              (s.kind == SymKind::Control && s.index <= p.m);
    if (!ok)
      throw Error(where + " references " + symbol_name(s) +
                  "; generator components live in (t, x, u)");
  }
}

}  // namespace

void Family::validate(const Problem& p) const {
  if (r < 1) throw Error("family must have r >= 1 parameters");
  if (static_cast<int>(X.size()) != p.n)
    throw Error("family X has " + std::to_string(X.size()) + " components, expected " +
                std::to_string(p.n));
  if (static_cast<int>(U.size()) != p.m)
    throw Error("family U has " + std::to_string(U.size()) + " components, expected " +
                std::to_string(p.m));

  check_family_symbols(p, r, T, "T");
  for (int i = 0; i < p.n; ++i) check_family_symbols(p, r, X[i], "X" + std::to_string(i + 1));
  for (int j = 0; j < p.m; ++j) check_family_symbols(p, r, U[j], "U" + std::to_string(j + 1));
  check_family_symbols(p, r, F, "F");

  const auto at_zero = origin_bindings(r);
  if (substitute(T, at_zero) != Expr::symbol(Symbol::time()))
    throw Error("family is not the identity at s = 0: T");
  for (int i = 0; i < p.n; ++i)
    if (substitute(X[i], at_zero) != Expr::symbol(Symbol::state(i + 1)))
      throw Error("family is not the identity at s = 0: X" + std::to_string(i + 1));
  for (int j = 0; j < p.m; ++j)
    if (substitute(U[j], at_zero) != Expr::symbol(Symbol::control(j + 1)))
      throw Error("family is not the identity at s = 0: U" + std::to_string(j + 1));
  if (!substitute(F, at_zero).is_rational())
    throw Error("gauge term F must be constant in (t, x, u) at s = 0");
}

void Generator::validate(const Problem& p) const {
  if (components.empty()) throw Error("generator must have at least one component");
  for (const GeneratorComponent& g : components) {
    if (static_cast<int>(g.xi.size()) != p.n)
      throw Error("generator xi has " + std::to_string(g.xi.size()) +
                  " components, expected " + std::to_string(p.n));
    if (static_cast<int>(g.upsilon.size()) != p.m)
      throw Error("generator upsilon has " + std::to_string(g.upsilon.size()) +
                  " components, expected " + std::to_string(p.m));
    check_generator_symbols(p, g.tau, "tau");
    for (int i = 0; i < p.n; ++i)
      check_generator_symbols(p, g.xi[i], "xi" + std::to_string(i + 1));
    for (int j = 0; j < p.m; ++j)
      check_generator_symbols(p, g.upsilon[j], "upsilon" + std::to_string(j + 1));
    check_generator_symbols(p, g.f, "f");
  }
}

bool operator==(const GeneratorComponent& a, const GeneratorComponent& b) {
  return a.tau == b.tau && a.xi == b.xi && a.upsilon == b.upsilon && a.f == b.f;
}

bool operator==(const Generator& a, const Generator& b) {
  return a.components == b.components;
}

Generator generator_of(const Problem& p, const Family& fam) {
  fam.validate(p);
  const auto at_zero = origin_bindings(fam.r);
  auto d_at_zero = [&](const Expr& e, int k) {
    return substitute(diff(e, Symbol::param(k)), at_zero);
  };

  Generator gen;
  for (int k = 1; k <= fam.r; ++k) {
    GeneratorComponent g;
    g.tau = d_at_zero(fam.T, k);
    for (const Expr& x : fam.X) g.xi.push_back(d_at_zero(x, k));
    for (const Expr& u : fam.U) g.upsilon.push_back(d_at_zero(u, k));
    g.f = d_at_zero(fam.F, k);
    gen.components.push_back(std::move(g));
  }
  return gen;
}

bool Weights::all_zero() const {
  if (alpha != 0) return false;
  for (const Rat& b : beta)
    if (b != 0) return false;
  for (const Rat& g : gamma)
    if (g != 0) return false;
  return true;
}

namespace {

Expr scale_map(const Rat& weight, const Expr& var, ScalingForm form) {
  const Expr s = Expr::symbol(Symbol::param(1));
  switch (form) {
    case ScalingForm::Exponential:
      return exp(Expr::rational(weight) * s) * var;
    case ScalingForm::Power: {
      if (!rat_is_integer(weight))
        throw Error("power-form scaling family requires integer weights, got " +
                    rat_str(weight));
      return pow(Expr::integer(1) + s, rat_to_int(weight)) * var;
    }
    case ScalingForm::Linear:
      return (Expr::integer(1) + Expr::rational(weight) * s) * var;
  }
  throw Error("unknown scaling form");
}

}  // namespace

Family scaling_family(const Weights& w, ScalingForm form) {
  if (w.all_zero()) throw Error("scaling weights must not all be zero");
  Family fam;
  fam.r = 1;
  fam.T = scale_map(w.alpha, Expr::symbol(Symbol::time()), form);
  for (std::size_t i = 0; i < w.beta.size(); ++i)
    fam.X.push_back(scale_map(w.beta[i], Expr::symbol(Symbol::state(static_cast<int>(i) + 1)), form));
  for (std::size_t k = 0; k < w.gamma.size(); ++k)
    fam.U.push_back(scale_map(w.gamma[k], Expr::symbol(Symbol::control(static_cast<int>(k) + 1)), form));
  fam.F = Expr();
  return fam;
}

Generator scaling_generator(const Weights& w) {
  if (w.all_zero()) throw Error("scaling weights must not all be zero");
  GeneratorComponent g;
  g.tau = Expr::rational(w.alpha) * Expr::symbol(Symbol::time());
  for (std::size_t i = 0; i < w.beta.size(); ++i)
    g.xi.push_back(Expr::rational(w.beta[i]) * Expr::symbol(Symbol::state(static_cast<int>(i) + 1)));
  for (std::size_t k = 0; k < w.gamma.size(); ++k)
    g.upsilon.push_back(Expr::rational(w.gamma[k]) *
                        Expr::symbol(Symbol::control(static_cast<int>(k) + 1)));
  g.f = Expr();
  return Generator{{std::move(g)}};
}

}  // namespace ocsym

#include "ocsym/search.hpp"

#include "ocsym/invariance.hpp"
#include "ocsym/linalg.hpp"

#include <functional>
#include <map>
#include <utility>

namespace ocsym {

namespace {

// All monomials in the given symbols with total degree <= max_degree,
// ordered by degree, then lexicographically by exponent vector.
std::vector<Expr> ansatz_monomials(const std::vector<Symbol>& syms, int max_degree) {
  std::vector<Expr> out;
  std::vector<int> exps(syms.size(), 0);
  for (int deg = 0; deg <= max_degree; ++deg) {
    // enumerate exponent vectors summing to deg
    std::vector<Expr> level;
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
      if (i + 1 == exps.size()) {
        exps[i] = remaining;
        Expr m = Expr::integer(1);
        for (std::size_t k = 0; k < syms.size(); ++k)
          if (exps[k] > 0) m = m * pow(Expr::symbol(syms[k]), exps[k]);
        level.push_back(std::move(m));
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        exps[i] = e;
        rec(i + 1, remaining - e);
      }
    };
    if (exps.empty()) {
      if (deg == 0) level.push_back(Expr::integer(1));
    } else {
      rec(0, deg);
    }
    for (Expr& m : level) out.push_back(std::move(m));
  }
  return out;
}

enum class Slot { Tau, Xi, Upsilon, Gauge };

struct Unknown {
  Slot slot;
  int component;  // 1-based for Xi/Upsilon
  Expr monomial;
};

GeneratorComponent unit_component(const Problem& p, const Unknown& u) {
  GeneratorComponent g;
  g.xi.assign(p.n, Expr());
  g.upsilon.assign(p.m, Expr());
  switch (u.slot) {
    case Slot::Tau: g.tau = u.monomial; break;
    case Slot::Xi: g.xi[u.component - 1] = u.monomial; break;
    case Slot::Upsilon: g.upsilon[u.component - 1] = u.monomial; break;
    case Slot::Gauge: g.f = u.monomial; break;
  }
  return g;
}

struct RowKey {
  int residual;
  Monomial mono;
};

struct RowKeyLess {
  bool operator()(const RowKey& a, const RowKey& b) const {
    if (a.residual != b.residual) return a.residual < b.residual;
    return compare(a.mono, b.mono) < 0;
  }
};

}  // namespace

std::vector<Generator> search_generators(const Problem& p, const Ansatz& a,
                                         SearchStats* stats) {
  p.validate();
  if (!p.is_polynomial())
    throw Error("generator search requires a polynomial problem");
  if (a.degree < 0) throw Error("ansatz degree must be >= 0");

  std::vector<Symbol> tx{Symbol::time()};
  for (int i = 1; i <= p.n; ++i) tx.push_back(Symbol::state(i));
  std::vector<Symbol> txu = tx;
  for (int j = 1; j <= p.m; ++j) txu.push_back(Symbol::control(j));

  const std::vector<Expr> tx_monos = ansatz_monomials(tx, a.degree);
  const std::vector<Expr> txu_monos = ansatz_monomials(txu, a.degree);

  std::vector<Unknown> unknowns;
  if (a.include_time_change)
    for (const Expr& m : tx_monos) unknowns.push_back({Slot::Tau, 0, m});
  for (int i = 1; i <= p.n; ++i)
    for (const Expr& m : tx_monos) unknowns.push_back({Slot::Xi, i, m});
  for (int j = 1; j <= p.m; ++j)
    for (const Expr& m : txu_monos) unknowns.push_back({Slot::Upsilon, j, m});
  if (a.include_gauge)
    for (const Expr& m : tx_monos) unknowns.push_back({Slot::Gauge, 0, m});
  if (unknowns.empty()) throw Error("ansatz produces zero unknowns");

  // The necessary conditions are linear in the generator, so the residuals
  // of the ansatz are the matching linear combination of unit-generator
  // residuals; match every monomial coefficient (udot included) to zero.
  std::map<RowKey, RatVec, RowKeyLess> rows;
  for (std::size_t col = 0; col < unknowns.size(); ++col) {
    const GeneratorComponent unit = unit_component(p, unknowns[col]);
    const GeneratorResiduals res = generator_residuals(p, unit);
    std::vector<const Expr*> exprs{&res.lagrangian};
    for (const Expr& e : res.dynamics) exprs.push_back(&e);
    for (std::size_t idx = 0; idx < exprs.size(); ++idx) {
      if (!exprs[idx]->is_polynomial())
        throw Error("internal: non-polynomial residual in search");
      for (const auto& [mono, coeff] : exprs[idx]->num()) {
        auto [it, inserted] =
            rows.try_emplace(RowKey{static_cast<int>(idx), mono},
                             RatVec(unknowns.size(), Rat(0)));
        it->second[col] = coeff;
      }
    }
  }

  RatMat matrix;
  matrix.reserve(rows.size());
  for (auto& [key, row] : rows) matrix.push_back(std::move(row));

  const RatMat basis = nullspace(matrix, static_cast<int>(unknowns.size()));

  if (stats) {
    stats->unknowns = static_cast<int>(unknowns.size());
    stats->equations = static_cast<int>(matrix.size());
    stats->rank = static_cast<int>(unknowns.size() - basis.size());
  }

  std::vector<Generator> generators;
  generators.reserve(basis.size());
  for (const RatVec& v : basis) {
    GeneratorComponent g;
    g.xi.assign(p.n, Expr());
    g.upsilon.assign(p.m, Expr());
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
      if (v[col] == 0) continue;
      const Expr term = Expr::rational(v[col]) * unknowns[col].monomial;
      switch (unknowns[col].slot) {
        case Slot::Tau: g.tau += term; break;
        case Slot::Xi: g.xi[unknowns[col].component - 1] += term; break;
        case Slot::Upsilon: g.upsilon[unknowns[col].component - 1] += term; break;
        case Slot::Gauge: g.f += term; break;
      }
    }
    generators.push_back(Generator{{std::move(g)}});
  }
  return generators;
}

SearchReport search_report(const Problem& p, const Ansatz& a) {
  SearchReport report;
  report.ansatz = a;
  const std::vector<Generator> basis = search_generators(p, a, &report.stats);
  for (const Generator& g : basis) {
    SearchEntry entry;
    entry.generator = g;
    entry.integral = first_integral(p, g, 1);
    entry.residual = verify_symbolic(p, entry.integral, g);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace ocsym

#pragma once

// Quasi-invariance checks: the generator-level necessary conditions and
// the full first-order check of a finite family.

#include "ocsym/expr.hpp"
#include "ocsym/family.hpp"
#include "ocsym/problem.hpp"

#include <vector>

namespace ocsym {

struct InvarianceReport {
  bool passed = false;

  // One Lagrangian residual and one n-vector of dynamics residuals per
  // parameter. Exact zeros everywhere iff passed.
  std::vector<Expr> lagrangian_residuals;
  std::vector<std::vector<Expr>> dynamics_residuals;

  // Family checks only: the zeroth-order (s = 0) parts, which must also
  // vanish, and the o(s) terms actually discarded (expressions in
  // (t,x,u,s); all zero for exactly invariant families).
  std::vector<Expr> order0_residuals;  // Lagrangian first, then dynamics
  Expr lagrangian_remainder;
  std::vector<Expr> dynamics_remainders;

  // Set when some residual involves a formal control derivative.
  bool udot_dependence = false;
};

// Residuals of the generator-level necessary conditions for one parameter
// direction: R_L = D_t f - [dL/dt*tau + dL/dx.xi + dL/du.upsilon + L*D_t tau]
// and R_phi_i likewise for each dynamics component.
struct GeneratorResiduals {
  Expr lagrangian;
  std::vector<Expr> dynamics;
};
GeneratorResiduals generator_residuals(const Problem& p, const GeneratorComponent& g);

// Determining equations for the generator: necessary conditions for
// quasi-invariance; passed iff every residual (including every udot
// coefficient) is identically zero.
InvarianceReport check_generator(const Problem& p, const Generator& g);

// Full quasi-invariance of a finite family: the order-0 and order-1
// coefficients in each parameter must vanish identically; everything of
// higher order is reported as the remainder.
InvarianceReport check_family(const Problem& p, const Family& fam);

}  // namespace ocsym

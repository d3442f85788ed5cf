#pragma once

// First integrals C = psi0*f + psi.xi - H*tau from symmetry generators,
// and the symbolic certificate that dC/dt vanishes along extremals.

#include "ocsym/expr.hpp"
#include "ocsym/family.hpp"
#include "ocsym/problem.hpp"

namespace ocsym {

enum class IntegralSource { FromGenerator, Homogeneity, User };

struct FirstIntegral {
  Expr value;  // H fully expanded; lives in (t, x, u, psi0, psi)
  IntegralSource source = IntegralSource::User;
  int param_index = 1;  // which generator parameter produced it
};

// Builds the first integral for parameter k (1-based). Enforces the
// generator-level necessary conditions unless enforce_conditions is false.
FirstIntegral first_integral(const Problem& p, const Generator& g, int k = 1,
                             bool enforce_conditions = true);

// Total time derivative of C along the extremal flow minus the stationarity
// multiple dH/du.(upsilon - tau*udot) it must reduce to; identically zero
// certifies the conservation law modulo the stationarity condition, with no
// need for a closed-form control.
Expr verify_symbolic(const Problem& p, const FirstIntegral& c, const Generator& g);

// value + psi0*delta_f; compensates a gauge-term change of the running cost.
FirstIntegral gauge_adjust(const FirstIntegral& c, const Expr& delta_f);

}  // namespace ocsym

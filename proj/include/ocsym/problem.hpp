#pragma once

// Optimal control problem (P): running cost L(t,x,u), dynamics
// dx/dt = phi(t,x,u), and the Pontryagin machinery derived from its
// Hamiltonian H = psi0*L + psi.phi.

#include "ocsym/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ocsym {

struct Problem {
  std::string name;
  int n = 0;  // state dimension
  int m = 0;  // control dimension
  Expr lagrangian;
  std::vector<Expr> dynamics;  // n components
  double horizon_a = 0.0;
  double horizon_b = 1.0;

  // Throws Error when dimensions or symbol usage are invalid
  // (n,m >= 1, a < b, L and phi over t, x1..xn, u1..um only).
  void validate() const;

  bool is_autonomous() const;   // t does not occur in L or phi
  bool is_polynomial() const;   // L and every phi_i polynomial
};

// H = psi0*L + sum_i psi_i*phi_i, normalized.
Expr hamiltonian(const Problem& p);

// Component i is -dH/dx_i (right-hand side of the adjoint system).
std::vector<Expr> adjoint_rhs(const Problem& p);

// Component j is dH/du_j (stationarity form of the maximality condition).
std::vector<Expr> stationarity(const Problem& p);

// Closed-form extremal control u*(t,x,psi0,psi) from the stationarity
// system, valid for psi0 < 0. Requires H quadratic in u with u-Hessian
// 2*psi0*I; returns nullopt otherwise (e.g. time-optimal L = 1), which
// signals that only symbolic verification applies.
std::optional<std::vector<Expr>> solve_control(const Problem& p);

// Total time derivative along the control system: D_t g = dg/dt +
// dg/dx.phi + dg/du.udot, with formal control-derivative symbols udot_j.
Expr total_derivative(const Problem& p, const Expr& g);

}  // namespace ocsym

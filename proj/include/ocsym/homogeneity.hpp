#pragma once

// Scaling-weight detection for polynomial problems and the induced
// scaling first integral sum_i beta_i*psi_i*x_i - alpha*H*t.

#include "ocsym/family.hpp"
#include "ocsym/noether.hpp"
#include "ocsym/problem.hpp"

#include <vector>

namespace ocsym {

// Exact rational basis (reduced echelon form, deterministic pivot order
// alpha, beta_1..beta_n, gamma_1..gamma_m) of the homogeneous degree
// system: every monomial t^a x^b u^c of L forces alpha*(a+1) + beta.b +
// gamma.c = 0, and of phi_i forces alpha*(a+1) + beta.b + gamma.c = beta_i.
// Empty when only the zero solution exists. Throws on non-polynomial input.
std::vector<Weights> detect_weights(const Problem& p);

// True when w solves the degree system of p.
bool weights_satisfy(const Problem& p, const Weights& w);

// C = sum_i beta_i*psi_i*x_i - alpha*H*t, computed directly from the
// weights (the generator route through first_integral must agree).
FirstIntegral scaling_integral(const Problem& p, const Weights& w);

}  // namespace ocsym

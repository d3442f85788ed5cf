#pragma once

// r-parameter transformation families h^s = (T, X, U) with gauge term F,
// and their infinitesimal generators (tau, xi, upsilon, f) at s = 0.

#include "ocsym/expr.hpp"
#include "ocsym/problem.hpp"

#include <vector>

namespace ocsym {

struct Family {
  int r = 1;               // number of parameters s1..sr
  Expr T;                  // time map, identity at s = 0
  std::vector<Expr> X;     // n state maps
  std::vector<Expr> U;     // m control maps
  Expr F;                  // gauge term, constant in (t,x,u) at s = 0

  // Throws Error on an identity-at-origin violation (names the offending
  // component), bad dimensions, or out-of-range parameter indices.
  void validate(const Problem& p) const;
};

// One parameter direction of a generator.
struct GeneratorComponent {
  Expr tau;
  std::vector<Expr> xi;       // n entries
  std::vector<Expr> upsilon;  // m entries
  Expr f;
};

struct Generator {
  std::vector<GeneratorComponent> components;  // one per parameter

  int r() const { return static_cast<int>(components.size()); }
  void validate(const Problem& p) const;
};

bool operator==(const GeneratorComponent& a, const GeneratorComponent& b);
bool operator==(const Generator& a, const Generator& b);

// d/ds_k at s = 0, component-wise, for every parameter.
Generator generator_of(const Problem& p, const Family& fam);

// Scaling weights (alpha for t, beta_i for x_i, gamma_k for u_k).
struct Weights {
  Rat alpha;
  std::vector<Rat> beta;
  std::vector<Rat> gamma;

  bool all_zero() const;
};

enum class ScalingForm { Exponential, Power, Linear };

// One-parameter scaling family in the chosen form; all three forms share
// the generator tau = alpha*t, xi_i = beta_i*x_i, upsilon_k = gamma_k*u_k,
// f = 0. The power form (1+s)^w requires integer weights.
Family scaling_family(const Weights& w, ScalingForm form);

// The induced generator, built directly (no finite family needed).
Generator scaling_generator(const Weights& w);

}  // namespace ocsym

#pragma once

// Symmetry-generator search: polynomial ansatz with unknown coefficients,
// the invariance necessary conditions imposed by exact coefficient
// matching, and the nullspace returned as a basis of generators.

#include "ocsym/family.hpp"
#include "ocsym/noether.hpp"
#include "ocsym/problem.hpp"

#include <string>
#include <vector>

namespace ocsym {

struct Ansatz {
  int degree = 1;                 // max total degree; (t,x) for tau, xi, f; (t,x,u) for upsilon
  bool include_time_change = true;  // when false, tau is pinned to 0
  bool include_gauge = true;        // when false, f is pinned to 0
};

struct SearchStats {
  int unknowns = 0;
  int equations = 0;
  int rank = 0;
};

// Basis of the solution space of the determining equations within the
// ansatz, in reduced echelon form with the zero solution excluded.
// Requires a polynomial problem and a nonempty ansatz.
std::vector<Generator> search_generators(const Problem& p, const Ansatz& a,
                                         SearchStats* stats = nullptr);

struct SearchEntry {
  Generator generator;
  FirstIntegral integral;
  Expr residual;  // verify_symbolic output; must be zero
};

struct SearchReport {
  Ansatz ansatz;
  SearchStats stats;
  std::vector<SearchEntry> entries;
};

SearchReport search_report(const Problem& p, const Ansatz& a);

}  // namespace ocsym

#pragma once

// Exact linear algebra over the rationals: reduced row echelon form,
// nullspace bases, and span membership. Small dense systems only.

#include "ocsym/expr.hpp"

#include <vector>

namespace ocsym {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row-major

// In-place reduced row echelon form; returns the pivot column of each
// pivot row, in order. Deterministic: first nonzero column, top-most row.
std::vector<int> rref(RatMat& m);

// Basis of {v : A v = 0} in the canonical RREF parameterization: one vector
// per free column (ascending), each with a 1 at its free column. Columns
// are `cols` wide even when A has no rows.
RatMat nullspace(const RatMat& a, int cols);

// True when v lies in the row span of `basis`.
bool in_span(const RatMat& basis, const RatVec& v);

}  // namespace ocsym

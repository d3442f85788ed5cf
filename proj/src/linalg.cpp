#include "ocsym/linalg.hpp"

#include <algorithm>

namespace ocsym {

std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r)
      if (m[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[row], m[pivot]);
    const Rat inv = 1 / m[row][col];
    for (int c = col; c < cols; ++c) m[row][c] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rat factor = m[r][col];
      for (int c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

RatMat nullspace(const RatMat& a, int cols) {
  RatMat m = a;
  const std::vector<int> pivots = rref(m);

  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;

  RatMat basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols, Rat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

bool in_span(const RatMat& basis, const RatVec& v) {
  RatMat m = basis;
  RatMat with_v = basis;
  with_v.push_back(v);
  return rref(m).size() == rref(with_v).size();
}

}  // namespace ocsym

#include "fracbpx/sparse.hpp"

namespace fracbpx {

SparseMatrix sparse_from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.prune(0.0, 0.0);
  a.makeCompressed();
  return a;
}

bool is_canonical(const SparseMatrix& a) {
  if (!a.isCompressed()) return false;
  for (int r = 0; r < a.outerSize(); ++r) {
    int last = -1;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() <= last || it.value() == 0.0) return false;
      last = it.col();
    }
  }
  return true;
}

}  // namespace fracbpx

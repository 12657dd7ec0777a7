#pragma once

#include <vector>

#include <Eigen/Sparse>

namespace fracbpx {

// Compressed row storage: sorted unique columns per row, no stored zeros.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

// Sums duplicates and drops exact zeros.
SparseMatrix sparse_from_triplets(int rows, int cols, const std::vector<Triplet>& triplets);

// True when the storage is compressed with strictly increasing columns and no zeros.
bool is_canonical(const SparseMatrix& a);

}  // namespace fracbpx

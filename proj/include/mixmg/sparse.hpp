#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <span>
#include <vector>

namespace mixmg {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using DenseMat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Returns B^T diag(w) B.
///
/// Every entry (i, j) accumulates the terms w_k * (b_ki * b_kj) in increasing
/// k, so the result is bitwise symmetric.
SpMat weighted_gram(const SpMat& B, const Vec& w);

/// Submatrix A(rows, cols); `rows` and `cols` are lists of kept indices.
SpMat submatrix(const SpMat& A, std::span<const Index> rows, std::span<const Index> cols);

Vec subvector(const Vec& v, std::span<const Index> keep);

SpMat diagonal_matrix(const Vec& d);

/// Assembles [[A11, A12], [A21, A22]]; empty blocks (0 nonzeros) are allowed.
SpMat block_matrix(const SpMat& A11, const SpMat& A12, const SpMat& A21, const SpMat& A22);

/// max |A_ij|, 0 for an empty matrix.
double max_abs(const SpMat& A);

/// max |A_ij - A_ji|.
double symmetry_defect(const SpMat& A);

DenseMat to_dense(const SpMat& A);

/// Coordinate text dump: header `nrows ncols nnz`, then `i j value` lines in
/// (i, j) order with 17 significant digits. Indices are 0-based.
void write_matrix(std::ostream& out, const SpMat& A);

}  // namespace mixmg

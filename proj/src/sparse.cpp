#include "mixmg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace mixmg {

SpMat weighted_gram(const SpMat& B, const Vec& w)
{
  if (w.size() != B.rows())
    throw std::invalid_argument("weighted_gram: weight size does not match rows");

  const SpMat Bt = B.transpose();  // row i of Bt lists column i of B, k ascending
  const Index n = B.cols();

  std::vector<long double> acc(static_cast<std::size_t>(n), 0.0L);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> pattern;
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(B.nonZeros()) * 4);

  for (Index i = 0; i < n; ++i) {
    pattern.clear();
    for (SpMat::InnerIterator ki(Bt, i); ki; ++ki) {
      const Index k = ki.col();
      const long double bki = ki.value();
      const long double wk = w[k];
      for (SpMat::InnerIterator kj(B, k); kj; ++kj) {
        const int j = static_cast<int>(kj.col());
        if (!used[j]) {
          used[j] = 1;
          pattern.push_back(j);
        }
        acc[j] += wk * (bki * kj.value());
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (int j : pattern) {
      out.emplace_back(static_cast<int>(i), j, static_cast<double>(acc[j]));
      acc[j] = 0.0L;
      used[j] = 0;
    }
  }

  SpMat G(n, n);
  G.setFromTriplets(out.begin(), out.end());
  return G;
}

SpMat submatrix(const SpMat& A, std::span<const Index> rows, std::span<const Index> cols)
{
  std::vector<Index> col_map(static_cast<std::size_t>(A.cols()), -1);
  for (std::size_t c = 0; c < cols.size(); ++c)
    col_map[static_cast<std::size_t>(cols[c])] = static_cast<Index>(c);

  std::vector<Triplet> t;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (SpMat::InnerIterator it(A, rows[r]); it; ++it) {
      const Index c = col_map[static_cast<std::size_t>(it.col())];
      if (c >= 0)
        t.emplace_back(static_cast<int>(r), static_cast<int>(c), it.value());
    }
  }
  SpMat S(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

Vec subvector(const Vec& v, std::span<const Index> keep)
{
  Vec out(static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    out[static_cast<Index>(i)] = v[keep[i]];
  return out;
}

SpMat diagonal_matrix(const Vec& d)
{
  SpMat D(d.size(), d.size());
  D.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Index i = 0; i < d.size(); ++i)
    D.insert(i, i) = d[i];
  D.makeCompressed();
  return D;
}

SpMat block_matrix(const SpMat& A11, const SpMat& A12, const SpMat& A21, const SpMat& A22)
{
  const Index n1 = A11.rows();
  const Index n2 = A22.rows();
  if (A12.rows() != n1 || A21.rows() != n2 || A11.cols() != A21.cols()
      || A12.cols() != A22.cols())
    throw std::invalid_argument("block_matrix: incompatible block shapes");
  const Index m1 = A11.cols();

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(A11.nonZeros() + A12.nonZeros() + A21.nonZeros()
                                     + A22.nonZeros()));
  auto put = [&t](const SpMat& A, Index r0, Index c0) {
    for (Index r = 0; r < A.outerSize(); ++r)
      for (SpMat::InnerIterator it(A, r); it; ++it)
        t.emplace_back(static_cast<int>(r0 + r), static_cast<int>(c0 + it.col()), it.value());
  };
  put(A11, 0, 0);
  put(A12, 0, m1);
  put(A21, n1, 0);
  put(A22, n1, m1);
  SpMat K(n1 + n2, m1 + A22.cols());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

double max_abs(const SpMat& A)
{
  double m = 0.0;
  for (Index r = 0; r < A.outerSize(); ++r)
    for (SpMat::InnerIterator it(A, r); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double symmetry_defect(const SpMat& A)
{
  const SpMat At = A.transpose();
  return max_abs(SpMat(A - At));
}

DenseMat to_dense(const SpMat& A)
{
  return DenseMat(A);
}

void write_matrix(std::ostream& out, const SpMat& A)
{
  SpMat C = A;
  C.makeCompressed();
  out << C.rows() << ' ' << C.cols() << ' ' << C.nonZeros() << '\n';
  const auto old = out.precision(17);
  for (Index r = 0; r < C.outerSize(); ++r)
    for (SpMat::InnerIterator it(C, r); it; ++it)
      out << r << ' ' << it.col() << ' ' << it.value() << '\n';
  out.precision(old);
}

}  // namespace mixmg

#include "robinfsi/solve.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "robinfsi/errors.hpp"

namespace robinfsi {

struct Factorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization(const SparseMatrix& a) : impl_(new Impl), n_(a.rows()) {
  if (a.rows() != a.cols())
    fail(ErrorCode::DimensionMismatch, "factorization requires a square matrix");

  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> mapped(
      a.rows(), a.cols(), a.nnz(), a.row_offsets().data(),
      a.col_indices().data(), a.values().data());
  Eigen::SparseMatrix<double> csc = mapped;

  impl_->lu.isSymmetric(false);
  impl_->lu.compute(csc);
  if (impl_->lu.info() != Eigen::Success)
    fail(ErrorCode::Singular, "sparse LU factorization failed (zero pivot)");
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

std::vector<double> Factorization::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != n_)
    fail(ErrorCode::DimensionMismatch, "rhs size does not match factorization");
  Eigen::Map<const Eigen::VectorXd> bm(b.data(), b.size());
  Eigen::VectorXd x = impl_->lu.solve(bm);
  if (impl_->lu.info() != Eigen::Success)
    fail(ErrorCode::Singular, "back-substitution failed");
  return std::vector<double>(x.data(), x.data() + x.size());
}

double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b) {
  std::vector<double> r(b.begin(), b.end());
  a.multiply_add(x, r, -1.0);
  const double nb = norm2(b);
  return norm2(r) / (nb > 0.0 ? nb : 1.0);
}

std::vector<double> solve(const SparseMatrix& a, std::span<const double> b) {
  Factorization f(a);
  std::vector<double> x = f.solve(b);
  const double res = relative_residual(a, x, b);
  if (res > 1e-10)
    fail(ErrorCode::Singular,
         "solve residual " + std::to_string(res) + " exceeds 1e-10");
  return x;
}

}  // namespace robinfsi

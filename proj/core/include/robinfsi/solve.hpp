#pragma once

#include <memory>
#include <span>
#include <vector>

#include "robinfsi/sparse.hpp"

namespace robinfsi {

/// Sparse direct LU with pivoting; handles the indefinite saddle-point
/// systems of the mixed velocity/pressure pairs. Immutable after
/// construction; back-substitution is safe to call concurrently.
class Factorization {
public:
  explicit Factorization(const SparseMatrix& a);  // throws Error(Singular)
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  std::vector<double> solve(std::span<const double> b) const;
  int size() const { return n_; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

/// Factor + solve + relative-residual check (throws SINGULAR when the
/// residual exceeds 1e-10 relative or a pivot collapses).
std::vector<double> solve(const SparseMatrix& a, std::span<const double> b);

/// ||Ax - b|| / max(||b||, tiny)
double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b);

}  // namespace robinfsi

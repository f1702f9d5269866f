#include <doctest.h>

#include <fstream>
#include <random>

#include "robinfsi/errors.hpp"
#include "robinfsi/solve.hpp"
#include "robinfsi/sparse.hpp"
#include "test_support.hpp"

using namespace robinfsi;

namespace {

SparseMatrix random_sparse(int n, int m, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pick(0.0, 1.0);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (pick(rng) < density) t.push_back({i, j, u(rng)});
  return SparseMatrix::from_triplets(n, m, std::move(t));
}

}  // namespace

TEST_CASE("triplet compression sums duplicates and sorts columns") {
  SparseMatrix a = SparseMatrix::from_triplets(
      2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}});
  CHECK(a.coeff(0, 2) == 1.5);
  CHECK(a.coeff(0, 0) == 2.0);
  CHECK(a.coeff(1, 1) == -1.0);
  CHECK(a.coeff(1, 2) == 0.0);
  const auto ci = a.col_indices();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = a.row_offsets()[i] + 1; k < a.row_offsets()[i + 1]; ++k)
      CHECK(ci[k - 1] < ci[k]);
}

TEST_CASE("spmv trivial cases") {
  std::vector<double> x{1.0, 2.0, 3.0};
  SparseMatrix zero = SparseMatrix::from_triplets(3, 3, {});
  const auto y0 = zero * x;
  for (double v : y0) CHECK(v == 0.0);

  SparseMatrix eye = SparseMatrix::from_triplets(
      3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  const auto y1 = eye * x;
  for (int i = 0; i < 3; ++i) CHECK(y1[i] == x[i]);
}

TEST_CASE("spmv matches a dense multiply on random instances") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const SparseMatrix a = random_sparse(50, 50, 0.15, rng);
  const testsup::Dense d = testsup::to_dense(a);
  std::vector<double> x(50);
  for (auto& v : x) v = u(rng);
  const auto y = a * x;
  for (int i = 0; i < 50; ++i) {
    double yi = 0.0;
    for (int j = 0; j < 50; ++j) yi += d(i, j) * x[j];
    CHECK(y[i] == doctest::Approx(yi).epsilon(1e-13));
  }
}

TEST_CASE("solve: identity, saddle permutation, SPD vs dense oracle") {
  SUBCASE("identity") {
    SparseMatrix eye = SparseMatrix::from_triplets(
        4, 4, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}, {3, 3, 1.0}});
    std::vector<double> b{1.0, -2.0, 0.5, 4.0};
    const auto x = solve(eye, b);
    for (int i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(b[i]));
  }

  SUBCASE("2x2 saddle point") {
    SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    std::vector<double> b{1.0, 2.0};
    const auto x = solve(a, b);
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(1.0));
  }

  SUBCASE("random SPD matches the dense factorization oracle") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 20;
    // SPD via AᵀA + n I
    testsup::Dense base(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) base(i, j) = u(rng);
    std::vector<Triplet> t;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = (i == j) ? n : 0.0;
        for (int k = 0; k < n; ++k) s += base(k, i) * base(k, j);
        t.push_back({i, j, s});
      }
    const SparseMatrix a = SparseMatrix::from_triplets(n, n, std::move(t));
    std::vector<double> b(n);
    for (auto& v : b) v = u(rng);

    const auto x = solve(a, b);
    const auto x_oracle = testsup::dense_solve(testsup::to_dense(a), b);
    for (int i = 0; i < n; ++i)
      CHECK(x[i] == doctest::Approx(x_oracle[i]).epsilon(1e-10));
    CHECK(relative_residual(a, x, b) <= 1e-10);
  }
}

TEST_CASE("singular matrix is reported") {
  SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 0, 1.0}});
  std::vector<double> b{1.0, 1.0};
  CHECK_THROWS_AS(solve(a, b), Error);
}

TEST_CASE("dimension mismatch is reported") {
  SparseMatrix a = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}});
  std::vector<double> b{1.0, 2.0};
  CHECK_THROWS_AS(Factorization(a).solve(b), Error);
}

TEST_CASE("axpy and norms") {
  std::vector<double> x{1.0, 2.0}, y{3.0, -1.0};
  axpy(2.0, x, y);
  CHECK(y[0] == 5.0);
  CHECK(y[1] == 3.0);
  CHECK(norm2(std::vector<double>{3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("matrix market export") {
  SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 1, 2.5}, {1, 0, -1.0}});
  write_matrix_market(a, "mm_test.mtx");
  std::ifstream f("mm_test.mtx");
  std::string header;
  std::getline(f, header);
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
}

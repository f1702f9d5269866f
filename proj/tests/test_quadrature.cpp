#include <doctest.h>

#include <cmath>

#include "robinfsi/quadrature.hpp"

using namespace robinfsi;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// ∫_T r^a s^b over the reference triangle = a! b! / (a+b+2)!
double exact_tri_monomial(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double exact_edge_monomial(int a) { return 1.0 / (a + 1); }

}  // namespace

TEST_CASE("triangle rules integrate monomials to their stated degree") {
  for (int degree : {1, 2, 4, 5, 6}) {
    const TriRule& rule = tri_rule(degree);
    REQUIRE(rule.degree >= degree);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= rule.degree; ++a)
      for (int b = 0; a + b <= rule.degree; ++b) {
        double acc = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q)
          acc += rule.weights[q] * std::pow(rule.points[q].x, a) *
                 std::pow(rule.points[q].y, b);
        CHECK(acc == doctest::Approx(exact_tri_monomial(a, b)).epsilon(1e-13));
      }
  }
}

TEST_CASE("edge rules integrate monomials to their stated degree") {
  for (int degree : {1, 3, 5, 7}) {
    const EdgeRule& rule = edge_rule(degree);
    REQUIRE(rule.degree >= degree);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= rule.degree; ++a) {
      double acc = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q)
        acc += rule.weights[q] * std::pow(rule.points[q], a);
      CHECK(acc == doctest::Approx(exact_edge_monomial(a)).epsilon(1e-13));
    }
  }
}

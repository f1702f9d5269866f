#include "robinfsi/quadrature.hpp"

#include <array>
#include <cmath>

#include "robinfsi/errors.hpp"

namespace robinfsi {

namespace {

TriRule make_centroid() {
  return {1, {{1.0 / 3.0, 1.0 / 3.0}}, {0.5}};
}

TriRule make_deg2() {
  TriRule r;
  r.degree = 2;
  r.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
  r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
  return r;
}

void push_orbit3(TriRule& r, double a, double w) {
  // permutations of barycentric (a, a, 1-2a)
  r.points.push_back({a, a});
  r.points.push_back({1.0 - 2.0 * a, a});
  r.points.push_back({a, 1.0 - 2.0 * a});
  for (int k = 0; k < 3; ++k) r.weights.push_back(0.5 * w);
}

void push_orbit6(TriRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const std::array<Vec2, 6> pts = {Vec2{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
  for (const auto& p : pts) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

TriRule make_deg4() {
  TriRule r;
  r.degree = 4;
  push_orbit3(r, 0.445948490915965, 0.223381589678011);
  push_orbit3(r, 0.091576213509771, 0.109951743655322);
  return r;
}

TriRule make_deg5() {
  TriRule r;
  r.degree = 5;
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.5 * 0.225);
  push_orbit3(r, 0.470142064105115, 0.132394152788506);
  push_orbit3(r, 0.101286507323456, 0.125939180544827);
  return r;
}

TriRule make_deg6() {
  TriRule r;
  r.degree = 6;
  push_orbit3(r, 0.063089014491502, 0.050844906370207);
  push_orbit3(r, 0.249286745170910, 0.116786275726379);
  push_orbit6(r, 0.310352451033785, 0.053145049844816, 0.082851075618374);
  return r;
}

EdgeRule gauss_on_unit(int n) {
  EdgeRule r;
  r.degree = 2 * n - 1;
  switch (n) {
    case 1:
      r.points = {0.5};
      r.weights = {1.0};
      break;
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      r.points = {0.5 - d, 0.5 + d};
      r.weights = {0.5, 0.5};
      break;
    }
    case 3: {
      const double d = 0.5 * std::sqrt(3.0 / 5.0);
      r.points = {0.5 - d, 0.5, 0.5 + d};
      r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 72.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 72.0;
      r.points = {0.5 - 0.5 * b, 0.5 - 0.5 * a, 0.5 + 0.5 * a, 0.5 + 0.5 * b};
      r.weights = {wb, wa, wa, wb};
      break;
    }
    default:
      fail(ErrorCode::ValidationError, "unsupported edge rule");
  }
  return r;
}

}  // namespace

const TriRule& tri_rule(int min_degree) {
  static const TriRule r1 = make_centroid();
  static const TriRule r2 = make_deg2();
  static const TriRule r4 = make_deg4();
  static const TriRule r5 = make_deg5();
  static const TriRule r6 = make_deg6();
  if (min_degree <= 1) return r1;
  if (min_degree <= 2) return r2;
  if (min_degree <= 4) return r4;
  if (min_degree <= 5) return r5;
  if (min_degree <= 6) return r6;
  fail(ErrorCode::ValidationError,
       "no committed triangle rule of degree " + std::to_string(min_degree));
}

const EdgeRule& edge_rule(int min_degree) {
  static const EdgeRule e1 = gauss_on_unit(1);
  static const EdgeRule e3 = gauss_on_unit(2);
  static const EdgeRule e5 = gauss_on_unit(3);
  static const EdgeRule e7 = gauss_on_unit(4);
  if (min_degree <= 1) return e1;
  if (min_degree <= 3) return e3;
  if (min_degree <= 5) return e5;
  if (min_degree <= 7) return e7;
  fail(ErrorCode::ValidationError,
       "no committed edge rule of degree " + std::to_string(min_degree));
}

}  // namespace robinfsi

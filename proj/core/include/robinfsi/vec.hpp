#pragma once

#include <cmath>

namespace robinfsi {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

/// 2x2 matrix; entry m(row, col) with row/col in {x, y}.
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  Mat2() = default;
  Mat2(double a, double b, double c, double d) : xx(a), xy(b), yx(c), yy(d) {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return xx * yy - xy * yx; }
  double trace() const { return xx + yy; }
  Mat2 transpose() const { return {xx, yx, xy, yy}; }

  Mat2& operator+=(const Mat2& o) {
    xx += o.xx; xy += o.xy; yx += o.yx; yy += o.yy;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    xx -= o.xx; xy -= o.xy; yx -= o.yx; yy -= o.yy;
    return *this;
  }
  Mat2& operator*=(double s) {
    xx *= s; xy *= s; yx *= s; yy *= s;
    return *this;
  }
};

inline Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
inline Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
inline Mat2 operator*(double s, Mat2 a) { return a *= s; }
inline Vec2 operator*(const Mat2& m, const Vec2& v) {
  return {m.xx * v.x + m.xy * v.y, m.yx * v.x + m.yy * v.y};
}
inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
          a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
}
inline Mat2 inverse(const Mat2& m) {
  const double d = m.det();
  return {m.yy / d, -m.xy / d, -m.yx / d, m.xx / d};
}
inline Mat2 sym(const Mat2& m) {
  return {m.xx, 0.5 * (m.xy + m.yx), 0.5 * (m.xy + m.yx), m.yy};
}
inline double ddot(const Mat2& a, const Mat2& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}

}  // namespace robinfsi

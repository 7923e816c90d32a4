#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dvdec {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline Vec2 rot90(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Circumcentre of a triangle given in a common coordinate chart.
inline Vec2 circumcentre(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 ab = b - a, ac = c - a;
  const double d = 2.0 * cross2(ab, ac);
  if (std::abs(d) < 1e-300) throw std::runtime_error("degenerate triangle");
  const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
  return a + Vec2(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
}

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross2(b - a, c - a);
}

// Reduce x into [0, L).
inline double wrap_coord(double x, double L) {
  const double y = std::fmod(x, L);
  return y < 0.0 ? y + L : y;
}

// Shift `p` by whole periods so it is the image nearest to `ref`.
inline double nearest_image(double p, double ref, double L) {
  return p - L * std::round((p - ref) / L);
}

// Five-point Gauss-Legendre rule on [0,1]; exact through degree 9.
struct GaussLine {
  std::array<double, 5> x, w;
  GaussLine() {
    const double s1 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double s2 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double w0 = 128.0 / 225.0;
    const double w1 = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double w2 = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    x = {0.5 * (1.0 - s2), 0.5 * (1.0 - s1), 0.5, 0.5 * (1.0 + s1), 0.5 * (1.0 + s2)};
    w = {0.5 * w2, 0.5 * w1, 0.5 * w0, 0.5 * w1, 0.5 * w2};
  }
};

inline const GaussLine& gauss_line() {
  static const GaussLine rule;
  return rule;
}

// Integrate f along the segment [a,b].
template <class F>
double integrate_segment(const Vec2& a, const Vec2& b, F&& f) {
  const GaussLine& g = gauss_line();
  const double len = (b - a).norm();
  double s = 0.0;
  for (int q = 0; q < 5; ++q) s += g.w[q] * f(a + g.x[q] * (b - a));
  return s * len;
}

template <class F>
double integrate_segment3(const Vec3& a, const Vec3& b, F&& f) {
  const GaussLine& g = gauss_line();
  const double len = (b - a).norm();
  double s = 0.0;
  for (int q = 0; q < 5; ++q) s += g.w[q] * f(a + g.x[q] * (b - a));
  return s * len;
}

// Seven-point triangle rule, exact through degree 5 (barycentric weights).
struct GaussTri {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> w;
  GaussTri() {
    const double a = (6.0 + std::sqrt(15.0)) / 21.0;
    const double b = (6.0 - std::sqrt(15.0)) / 21.0;
    const double wa = (155.0 + std::sqrt(15.0)) / 1200.0;
    const double wb = (155.0 - std::sqrt(15.0)) / 1200.0;
    bary = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
             {a, a, 1.0 - 2.0 * a},
             {a, 1.0 - 2.0 * a, a},
             {1.0 - 2.0 * a, a, a},
             {b, b, 1.0 - 2.0 * b},
             {b, 1.0 - 2.0 * b, b},
             {1.0 - 2.0 * b, b, b}}};
    w = {9.0 / 40.0, wa, wa, wa, wb, wb, wb};
  }
};

inline const GaussTri& gauss_tri() {
  static const GaussTri rule;
  return rule;
}

template <class F>
double integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c, F&& f) {
  const GaussTri& g = gauss_tri();
  const double area = std::abs(triangle_area(a, b, c));
  double s = 0.0;
  for (int q = 0; q < 7; ++q) {
    const Vec2 p = g.bary[q][0] * a + g.bary[q][1] * b + g.bary[q][2] * c;
    s += g.w[q] * f(p);
  }
  return s * area;
}

template <class F>
double integrate_triangle3(const Vec3& a, const Vec3& b, const Vec3& c, F&& f) {
  const GaussTri& g = gauss_tri();
  const double area = 0.5 * (b - a).cross(c - a).norm();
  double s = 0.0;
  for (int q = 0; q < 7; ++q) {
    const Vec3 p = g.bary[q][0] * a + g.bary[q][1] * b + g.bary[q][2] * c;
    s += g.w[q] * f(p);
  }
  return s * area;
}

}  // namespace dvdec

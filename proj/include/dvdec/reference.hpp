#pragma once

#include <cmath>

#include "dvdec/geometry.hpp"

namespace dvdec {

// Closed-form incompressible flows on the torus [0,2pi) x [0,sqrt(3)pi).
// The wavenumber ratio beta = 2/sqrt(3) makes the cell exactly periodic for
// the sheared equilateral lattice. With lambda = 1+beta^2 = 7/3 the stream
// function is a Laplace eigenfunction, so the flow is a steady Euler
// solution and decays self-similarly as exp(-lambda nu t) under viscosity.
struct TaylorGreen2D {
  double nu = 0.0;
  double beta = 2.0 / std::sqrt(3.0);

  double lambda() const { return 1.0 + beta * beta; }
  double decay(double t) const { return std::exp(-lambda() * nu * t); }

  double stream(const Vec2& x, double t = 0.0) const {
    return std::sin(x.x()) * std::sin(beta * x.y()) * decay(t);
  }
  Vec2 velocity(const Vec2& x, double t = 0.0) const {
    return decay(t) * Vec2(beta * std::sin(x.x()) * std::cos(beta * x.y()),
                           -std::cos(x.x()) * std::sin(beta * x.y()));
  }
  Vec2 velocity_t(const Vec2& x, double t = 0.0) const {
    return -lambda() * nu * velocity(x, t);
  }
  Mat2 velocity_gradient(const Vec2& x, double t = 0.0) const {
    const double sx = std::sin(x.x()), cx = std::cos(x.x());
    const double sy = std::sin(beta * x.y()), cy = std::cos(beta * x.y());
    Mat2 g;
    g << beta * cx * cy, -beta * beta * sx * sy, sx * sy, -beta * cx * cy;
    return Mat2(decay(t) * g);
  }
  double vorticity(const Vec2& x, double t = 0.0) const { return lambda() * stream(x, t); }

  // Bernoulli pairing p = -(lambda psi^2 + |u|^2)/2 + C, C fixing zero mean.
  double pressure(const Vec2& x, double t = 0.0) const {
    const double psi = stream(x, t);
    const double u2 = velocity(x, t).squaredNorm();
    return -0.5 * (lambda() * psi * psi + u2) + 0.25 * lambda() * decay(t) * decay(t);
  }

  double energy(double t, double domain_area) const {
    return lambda() * domain_area / 8.0 * decay(t) * decay(t);
  }
  double enstrophy(double t, double domain_area) const {
    const double l = lambda();
    return l * l * domain_area / 4.0 * decay(t) * decay(t);
  }
};

// The same flow observed from a uniformly translating frame; exercises
// conservation checks with nonzero mean circulation along torus loops, and
// the incommensurate drift breaks the lattice symmetries that make the
// resting flow superconvergent on the equilateral family.
struct DriftingTaylorGreen2D {
  TaylorGreen2D base;
  Vec2 drift = Vec2(0.35, -0.2);

  Vec2 velocity(const Vec2& x, double t = 0.0) const {
    return drift + base.velocity(x - t * drift, t);
  }
  Vec2 velocity_t(const Vec2& x, double t = 0.0) const {
    const Vec2 y = x - t * drift;
    return Vec2(base.velocity_t(y, t) - base.velocity_gradient(y, t) * drift);
  }
  double vorticity(const Vec2& x, double t = 0.0) const {
    return base.vorticity(x - t * drift, t);
  }
  double pressure(const Vec2& x, double t = 0.0) const {
    return base.pressure(x - t * drift, t);
  }
  double energy(double t, double domain_area) const {
    return base.energy(t, domain_area) + 0.5 * drift.squaredNorm() * domain_area;
  }
};

}  // namespace dvdec

#pragma once

#include <Eigen/Sparse>
#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "dvdec/advection.hpp"
#include "dvdec/derham.hpp"
#include "dvdec/operators.hpp"

namespace dvdec {

// Helmholtz machinery: the M1-orthogonal projector onto divergence-free
// 1-cochains, realized by one scalar Poisson solve per application. The
// scalar Laplacian kernel (constants) is handled by a bordered factorization
// that pins the area-weighted mean to zero, so solves are deterministic and
// accurate to direct-solver level. On bounded meshes the gradient rows on
// boundary dual edges are masked; this is the zero-flux realization of the
// potential problem and keeps the no-slip subspace invariant.
//
// The context is immutable after construction; concurrent solves against one
// factorization are read-only, and independent contexts can be built for
// fully isolated use.
struct LerayContext {
  const TriMesh* mesh = nullptr;
  const OperatorSet* ops = nullptr;
  bool closed = true;
  VectorXd interior;  // 1 on interior dual edges, 0 on boundary ones
  SpMat lap;          // Div * diag(interior) * Dt0, equals ops->L when closed
  std::unique_ptr<Eigen::SparseLU<SpMat>> poisson;  // bordered [lap, m0; m0^T, 0]
  std::array<VectorXd, 2> eta;  // M1-orthonormal harmonic basis, torus only
};

namespace detail {

// Factorizes [A, d; d^T, 0]. The multiplier row fixes the d-weighted mean of
// the solution and absorbs any component of the right-hand side outside the
// range of A, so the bordered system is nonsingular whenever ker A = span{k}
// with d^T k != 0.
inline std::unique_ptr<Eigen::SparseLU<SpMat>> factor_bordered(const SpMat& A,
                                                               const VectorXd& d) {
  const int n = static_cast<int>(A.rows());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(A.nonZeros() + 2 * n);
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, n, d[i]);
    trip.emplace_back(n, i, d[i]);
  }
  SpMat B(n + 1, n + 1);
  B.setFromTriplets(trip.begin(), trip.end());
  B.makeCompressed();
  auto lu = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu->compute(B);
  if (lu->info() != Eigen::Success) throw std::runtime_error("bordered factorization failed");
  return lu;
}

}  // namespace detail

inline LerayContext make_leray_context(const TriMesh& m, const OperatorSet& ops) {
  LerayContext c;
  c.mesh = &m;
  c.ops = &ops;
  c.interior = VectorXd::Ones(m.ne());
  for (int j = 0; j < m.ne(); ++j)
    if (m.boundary_edge[j]) {
      c.interior[j] = 0.0;
      c.closed = false;
    }
  c.lap = ops.Div * SpMat(c.interior.asDiagonal()) * ops.Dt0;
  c.lap.makeCompressed();
  c.poisson = detail::factor_bordered(c.lap, ops.m0);

  if (c.closed) {
    c.eta[0] = derham_dual1(m, [](const Vec2&) { return Vec2(1.0, 0.0); });
    c.eta[0] /= std::sqrt(ops.inner1(c.eta[0], c.eta[0]));
    c.eta[1] = derham_dual1(m, [](const Vec2&) { return Vec2(0.0, 1.0); });
    c.eta[1] -= ops.inner1(c.eta[1], c.eta[0]) * c.eta[0];
    c.eta[1] /= std::sqrt(ops.inner1(c.eta[1], c.eta[1]));
  }
  return c;
}

// Mean-zero solution of lap * phi = b. A relative residual above 1e-12 is a
// hard failure rather than a degraded answer.
inline VectorXd solve_scalar_poisson(const LerayContext& c, const VectorXd& b) {
  const int nf = c.mesh->nf();
  VectorXd rhs(nf + 1);
  rhs.head(nf) = b;
  rhs[nf] = 0.0;
  const VectorXd sol = c.poisson->solve(rhs);
  const VectorXd phi = sol.head(nf);
  const double res = (c.lap * phi + sol[nf] * c.ops->m0 - b).norm();
  if (res > 1e-12 * std::max(b.norm(), 1e-30))
    throw std::runtime_error("scalar Poisson solve did not reach tolerance");
  return phi;
}

inline VectorXd leray_project(const LerayContext& c, const VectorXd& w) {
  if (!c.closed)
    throw std::logic_error("closed-complex projector on a bounded mesh; use the no-slip variant");
  return w - c.ops->grad(solve_scalar_poisson(c, c.ops->divergence(w)));
}

// Projection onto the divergence-free no-slip subspace. Inputs must already
// carry no flux through boundary dual edges; the masked gradient correction
// then cannot reintroduce any.
inline VectorXd leray_project_dirichlet(const LerayContext& c, const VectorXd& w) {
  if (c.closed) throw std::logic_error("no-slip projector requires a bounded mesh");
  const double scale = w.lpNorm<Eigen::Infinity>();
  for (int j = 0; j < c.mesh->ne(); ++j)
    if (c.interior[j] == 0.0 && std::abs(w[j]) > 1e-13 * (1.0 + scale))
      throw std::invalid_argument("input carries flux through boundary dual edges");
  const VectorXd phi = solve_scalar_poisson(c, c.ops->divergence(w));
  return w - c.interior.cwiseProduct(c.ops->grad(phi));
}

// Curl-free divergence-free basis of the torus complex. Constant fields are
// exactly harmonic: their interpolant has zero curl by the de Rham
// commutation and zero divergence because the weighted edge normals of each
// triangle close up. The two-dimensionality of the space is certified by the
// spectral probes below (a third independent harmonic would make the
// restricted Laplacian singular).
inline const std::array<VectorXd, 2>& harmonic_basis(const LerayContext& c) {
  if (!c.closed) throw std::logic_error("harmonic basis exists on the torus complex only");
  return c.eta;
}

inline std::array<double, 2> harmonic_coefficients(const LerayContext& c, const VectorXd& w) {
  const auto& eta = harmonic_basis(c);
  return {c.ops->inner1(eta[0], w), c.ops->inner1(eta[1], w)};
}

namespace detail {

// Smallest nonzero eigenvalue (and its eigenvector) of the pencil
// A x = lambda diag(w) x, where A is symmetric positive semidefinite with
// kernel exactly the constants. Inverse power iteration through the bordered
// factorization, deflating the kernel in the weighted inner product.
inline std::pair<double, VectorXd> smallest_pencil_eigenvalue(const SpMat& A, const VectorXd& w,
                                                              double tol) {
  const int n = static_cast<int>(A.rows());
  const auto lu = factor_bordered(A, VectorXd::Ones(n));
  const double wsum = w.sum();
  const auto deflate = [&](VectorXd& x) { x.array() -= w.dot(x) / wsum; };

  std::mt19937_64 rng(0x5eed5eed5eed5eedULL);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  deflate(x);
  x /= std::sqrt(x.dot(w.cwiseProduct(x)));

  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    VectorXd rhs(n + 1);
    rhs.head(n) = w.cwiseProduct(x);
    rhs[n] = 0.0;
    VectorXd y = lu->solve(rhs).head(n);
    deflate(y);
    const double ynorm2 = y.dot(w.cwiseProduct(y));
    const double next = y.dot(A * y) / ynorm2;
    x = y / std::sqrt(ynorm2);
    if (it > 1 && std::abs(next - lambda) <= tol * next) return {next, x};
    lambda = next;
  }
  throw std::runtime_error("pencil eigensolver stagnated");
}

}  // namespace detail

// Smallest eigenvalue of the curl-curl operator on divergence-free cochains
// orthogonal to the harmonics. The curl maps that eigenproblem bijectively
// onto the nonzero spectrum of the Voronoi-cell scalar Laplacian pencil
// (and the codifferential maps it back), so the probe runs on the scalar
// side where the kernel is just the constants.
inline double poincare_constant(const LerayContext& c) {
  const OperatorSet& o = *c.ops;
  const SpMat A = o.Dt1 * SpMat(o.m1.cwiseInverse().asDiagonal()) * SpMat(o.Dt1.transpose());
  return detail::smallest_pencil_eigenvalue(A, o.m2.cwiseInverse(), 1e-9).first;
}

// Inf-sup constant of the divergence pairing: the square root of the
// smallest nonzero eigenvalue of the mean-zero scalar Laplacian pencil.
inline double infsup_constant(const LerayContext& c) {
  return std::sqrt(detail::smallest_pencil_eigenvalue(c.lap, c.ops->m0, 1e-9).first);
}

// Mean-zero pressure balancing the nonlinear and viscous forces:
//   lap p = -Div(Q(v,v) + Dt0(e_kin + potential) + nu * laplace1(v)).
// For v in the divergence-free subspace the viscous divergence vanishes
// identically, so viscosity changes nothing there; the term matters for
// unprojected states and anisotropic generalizations.
inline VectorXd pressure_recover(const LerayContext& c, const AdvectionContext& adv,
                                 const VectorXd& v, double nu,
                                 const VectorXd& potential = VectorXd()) {
  const OperatorSet& o = *c.ops;
  VectorXd bern = adv.recon->kinetic_energy(v);
  if (potential.size() > 0) bern += potential;
  VectorXd force = lamb(adv, v) + o.grad(bern);
  if (nu != 0.0) force += nu * o.laplace1(v);
  return solve_scalar_poisson(c, -o.divergence(force));
}

}  // namespace dvdec

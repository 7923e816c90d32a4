#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "dvdec/mesh.hpp"

namespace dvdec {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

// Metric layer on the 2D complex. Cochain storage conventions:
//   dual 0 (one per triangle): pointwise values at circumcentres;
//   dual 1 (one per primal edge): line integrals along dual edges;
//   dual 2 (one per vertex): area integrals over Voronoi cells.
// Hodge weights: m0 = |K_i| (triangle area), m1 = l_j / l_j*,
// m2 = 1 / |K_p*| (so that <w,w>_2 approximates the integral of the squared
// density; the reciprocal form is forced by the enstrophy pairing and by the
// vertical-edge degeneration of the 3D weights).
struct OperatorSet {
  const TriMesh* mesh = nullptr;
  VectorXd m0, m1, m2;
  SpMat Dt0;  // E x F: dual gradient, (Dt0 q)_j = q_left - q_right
  SpMat Dt1;  // V x E: dual curl, CCW circulation around Voronoi cells
  SpMat Div;  // F x E: net primal-face outflux, D1 * diag(m1)
  SpMat L;    // F x F: scalar Laplacian Div * Dt0, symmetric positive semidefinite

  VectorXd curl(const VectorXd& v) const { return Dt1 * v; }
  VectorXd divergence(const VectorXd& v) const { return Div * v; }
  VectorXd grad(const VectorXd& q) const { return Dt0 * q; }

  // codifferential on dual 2-cochains: M1^{-1} Dt1^T M2
  VectorXd codiff(const VectorXd& w) const {
    return (Dt1.transpose() * m2.cwiseProduct(w)).cwiseQuotient(m1);
  }

  // curl-curl Laplacian on velocity cochains
  VectorXd laplace1(const VectorXd& v) const { return codiff(curl(v)); }

  double inner0(const VectorXd& a, const VectorXd& b) const { return a.dot(m0.cwiseProduct(b)); }
  double inner1(const VectorXd& a, const VectorXd& b) const { return a.dot(m1.cwiseProduct(b)); }
  double inner2(const VectorXd& a, const VectorXd& b) const { return a.dot(m2.cwiseProduct(b)); }

  double norm_l2h(const VectorXd& v) const { return std::sqrt(inner1(v, v)); }
  double norm_h1h(const VectorXd& v) const {
    const VectorXd w = curl(v);
    return std::sqrt(inner1(v, v) + inner2(w, w));
  }
  double norm_linf_h(const VectorXd& v) const {
    return (v.cwiseAbs().cwiseQuotient(m1.cwiseSqrt())).maxCoeff();
  }
  double norm_rec(const VectorXd& v) const {
    double r = 0.0;
    for (int j = 0; j < v.size(); ++j)
      r = std::max(r, std::abs(v[j]) / mesh->len_d[j]);
    return r;
  }
};

inline OperatorSet assemble_operators(const TriMesh& m) {
  OperatorSet ops;
  ops.mesh = &m;

  ops.m0.resize(m.nf());
  for (int t = 0; t < m.nf(); ++t) ops.m0[t] = m.area_f[t];
  ops.m1.resize(m.ne());
  for (int j = 0; j < m.ne(); ++j) {
    if (m.len_d[j] <= 0.0) throw std::runtime_error("nonpositive dual length");
    ops.m1[j] = m.len_p[j] / m.len_d[j];
  }
  ops.m2.resize(m.nv());
  for (int v = 0; v < m.nv(); ++v) {
    if (m.area_v[v] <= 0.0) throw std::runtime_error("nonpositive dual area");
    ops.m2[v] = 1.0 / m.area_v[v];
  }

  ops.Dt0 = SpMat(m.D1.transpose());
  ops.Dt1 = SpMat(-m.D0.transpose());
  ops.Div = m.D1 * SpMat(ops.m1.asDiagonal());
  ops.L = ops.Div * ops.Dt0;
  ops.L.makeCompressed();
  return ops;
}

}  // namespace dvdec

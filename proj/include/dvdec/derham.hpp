#pragma once

#include <Eigen/Dense>

#include "dvdec/geometry.hpp"
#include "dvdec/mesh.hpp"
#include "dvdec/operators.hpp"

namespace dvdec {

// Sampling maps from analytic fields to cochains. All integrals use the
// fixed order-5 Gauss rules, so polynomial fields up to degree 4 (lines) and
// 5 (areas) are integrated exactly and the de Rham commutativity identity
// holds to rounding for them. Evaluation points come from wrap-coherent
// charts, so periodic fields see consistent coordinates.

// Pointwise values at circumcentres.
template <class F>
VectorXd derham_dual0(const TriMesh& m, F&& q) {
  VectorXd out(m.nf());
  for (int t = 0; t < m.nf(); ++t) out[t] = q(m.cc_chart[t]);
  return out;
}

// Line integrals of a vector field along dual edges.
template <class F>
VectorXd derham_dual1(const TriMesh& m, F&& u) {
  VectorXd out(m.ne());
  for (int j = 0; j < m.ne(); ++j) {
    const auto [s, e] = m.dual_segment(j);
    const Vec2 th = m.dual_tangent(j);
    out[j] = integrate_segment(s, e, [&](const Vec2& x) { return u(x).dot(th); });
  }
  return out;
}

// Area integrals of a scalar density over Voronoi cells (kite tiling).
template <class F>
VectorXd derham_dual2(const TriMesh& m, F&& w) {
  VectorXd out = VectorXd::Zero(m.nv());
  for (int t = 0; t < m.nf(); ++t)
    for (int c = 0; c < 3; ++c) {
      const auto k = m.kite(t, c);
      out[m.tris[t][c]] += integrate_triangle(k[0], k[1], k[2], w) +
                           integrate_triangle(k[0], k[2], k[3], w);
    }
  return out;
}

// Line integrals along primal edges (loop circulations, Hodge probes).
template <class F>
VectorXd derham_primal1(const TriMesh& m, F&& u) {
  VectorXd out(m.ne());
  for (int j = 0; j < m.ne(); ++j) {
    const Vec2 a = m.vpos[m.edges[j][0]];
    const Vec2 b = m.image_near(m.vpos[m.edges[j][1]], a);
    const Vec2 eh = m.edge_dir[j];
    out[j] = integrate_segment(a, b, [&](const Vec2& x) { return u(x).dot(eh); });
  }
  return out;
}

// Domain integral via the primal triangulation.
template <class F>
double integrate_domain(const TriMesh& m, F&& f) {
  double s = 0.0;
  for (int t = 0; t < m.nf(); ++t) {
    const auto& ch = m.tri_chart[t];
    s += integrate_triangle(ch[0], ch[1], ch[2], f);
  }
  return s;
}

// Per-cell discrepancy between the diagonal Hodge applied to sampled
// cochains and the exact dual flux, normalized by the cell measure. The
// decay rate of the max entry under refinement is the Hodge consistency
// rate: 2 when dual and primal cell midpoints coincide, else 1.
template <class F>
VectorXd hodge_error_probe1(const TriMesh& m, const OperatorSet& ops, F&& u) {
  const VectorXd v = derham_dual1(m, u);
  VectorXd err(m.ne());
  for (int j = 0; j < m.ne(); ++j) {
    const Vec2 a = m.vpos[m.edges[j][0]];
    const Vec2 b = m.image_near(m.vpos[m.edges[j][1]], a);
    const Vec2 th = m.dual_tangent(j);
    const double flux = integrate_segment(a, b, [&](const Vec2& x) { return u(x).dot(th); });
    err[j] = std::abs(ops.m1[j] * v[j] - flux) / m.len_p[j];
  }
  return err;
}

template <class F>
VectorXd hodge_error_probe0(const TriMesh& m, const OperatorSet& ops, F&& q) {
  VectorXd err(m.nf());
  for (int t = 0; t < m.nf(); ++t) {
    const auto& ch = m.tri_chart[t];
    const double exact = integrate_triangle(ch[0], ch[1], ch[2], q);
    err[t] = std::abs(ops.m0[t] * q(m.cc_chart[t]) - exact) / m.area_f[t];
  }
  return err;
}

template <class F>
VectorXd hodge_error_probe2(const TriMesh& m, const OperatorSet& ops, F&& w) {
  const VectorXd c = derham_dual2(m, w);
  VectorXd err(m.nv());
  for (int v = 0; v < m.nv(); ++v) err[v] = std::abs(ops.m2[v] * c[v] - w(m.vpos[v]));
  return err;
}

}  // namespace dvdec

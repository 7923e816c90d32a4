#pragma once

#include <Eigen/Sparse>
#include <stdexcept>
#include <vector>

#include "dvdec/mesh.hpp"
#include "dvdec/operators.hpp"
#include "dvdec/reconstruction.hpp"

namespace dvdec {

// Discrete interior products, wedge products and Lie derivatives built from a
// single sparse "swept flux" matrix U(v). Row j of U(v) pairs the dual edge
// of primal edge j with its two endpoint cells {tail, head}:
//
//   U(v)_jp = (s_jp . ubar_j) / |K_p*|,   s_jp = 2 sigma_jp (xbar_j* - x_p),
//
// where ubar_j is the trapezoidal face velocity on the dual edge, xbar_j* the
// dual edge midpoint and sigma_jp = +1 at the tail, -1 at the head. The swept
// vector s_jp is the primal edge vector l_j e_j plus a tangential offset
// 2 b_j t_j* that recentres the pairing at xbar_j*; on meshes whose dual edge
// midpoints coincide with the primal ones (b_j = 0) it reduces to the plain
// l_j e_j weight at both endpoints. Applied to a dual 2-cochain w this yields
// the transverse flux of the cell-averaged density through the dual edge,
//   (U(v) w)_j = l_j (ubar_j . e_j) * (mean density at the endpoints) + O(b_j),
// exact when the density is constant: the offsets enter only through the
// density difference across the edge. The recentred weights make the vertex
// pairing (U(v)^T v)_p exact on constant velocity fields for every admissible
// mesh, not only symmetric ones, via the cell-boundary moment identity
// sum_j l_j* (xbar_j* - x_p) (x) n_jp = |K_p*| Id with outward normals
// n_jp = sigma_jp e_j. The contraction
//
//   I_v(w) = (1/2) M1^{-1} (U(v) w  -  Dt1^T U(v)^T v)
//
// antisymmetrises the raw flux; the correction term depends on v alone and is
// what makes the Lamb term exactly energy-neutral, <v, I_v(D1t v)>_1 = 0 for
// every v and every choice of face velocities (the two quadratic forms are
// transposes of each other). See the tests for the polarised identities this
// structure satisfies.
struct AdvectionContext {
  const TriMesh* mesh = nullptr;
  const OperatorSet* ops = nullptr;
  const ReconContext* recon = nullptr;
};

inline AdvectionContext make_advection_context(const TriMesh& m, const OperatorSet& ops,
                                               const ReconContext& rc) {
  return AdvectionContext{&m, &ops, &rc};
}

inline SpMat extrusion_matrix(const AdvectionContext& ctx, const VectorXd& v) {
  const TriMesh& m = *ctx.mesh;
  const std::vector<Vec2> u = ctx.recon->reconstruct(v);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * m.ne());
  for (int j = 0; j < m.ne(); ++j) {
    const Vec2 ub = ReconContext::edge_velocity(m, u, j);
    const auto [d0, d1] = m.dual_segment(j);
    const Vec2 half_edge = Vec2(0.5 * m.len_p[j] * m.edge_dir[j]);
    const Vec2 offset = Vec2(0.5 * (d0 + d1) - m.edge_mid[j]);
    const double flux_tail = 2.0 * (offset + half_edge).dot(ub);
    const double flux_head = 2.0 * (half_edge - offset).dot(ub);
    trip.emplace_back(j, m.edges[j][0], flux_tail / m.area_v[m.edges[j][0]]);
    trip.emplace_back(j, m.edges[j][1], flux_head / m.area_v[m.edges[j][1]]);
  }
  SpMat U(m.ne(), m.nv());
  U.setFromTriplets(trip.begin(), trip.end());
  return U;
}

// I_v(w) for a dual 2-cochain w. Affine in w: the antisymmetrising correction
// carries v in both slots.
inline VectorXd contraction2(const AdvectionContext& ctx, const VectorXd& v,
                             const VectorXd& w) {
  const SpMat U = extrusion_matrix(ctx, v);
  const VectorXd raw = U * w - ctx.ops->Dt1.transpose() * (U.transpose() * v);
  return 0.5 * raw.cwiseQuotient(ctx.ops->m1);
}

// Q(v1, v2) = (1/2) M1^{-1} (U(v1) Dt1 v2 - Dt1^T U(v1)^T v2), the bilinear
// form whose diagonal Q(v, v) = I_v(D1t v) is the rotational (Lamb) part of
// the momentum equation. Linear in v2; v1 enters through the face velocities.
inline VectorXd lamb_bilinear(const AdvectionContext& ctx, const VectorXd& v1,
                              const VectorXd& v2) {
  const SpMat U = extrusion_matrix(ctx, v1);
  const VectorXd raw = U * (ctx.ops->Dt1 * v2) - ctx.ops->Dt1.transpose() * (U.transpose() * v2);
  return 0.5 * raw.cwiseQuotient(ctx.ops->m1);
}

inline VectorXd lamb(const AdvectionContext& ctx, const VectorXd& v) {
  return lamb_bilinear(ctx, v, v);
}

// Pointwise contraction of a dual 1-cochain by a velocity field, evaluated at
// dual vertices: (i_v a)(c_t) = u(c_t) . a(c_t) with both fields
// reconstructed. On the diagonal this is twice the kinetic energy density.
inline VectorXd contraction1(const AdvectionContext& ctx, const VectorXd& v,
                             const VectorXd& a) {
  const std::vector<Vec2> u = ctx.recon->reconstruct(v);
  const std::vector<Vec2> w = ctx.recon->reconstruct(a);
  VectorXd out(ctx.mesh->nf());
  for (int t = 0; t < ctx.mesh->nf(); ++t) out[t] = u[t].dot(w[t]);
  return out;
}

// Wedge of two dual 1-cochains, a dual 2-cochain. Adjoint of the swept-flux
// half of the contraction with respect to the cochain pairings:
// <a ^ b, q>_2 = (1/2) b^T U(a)^T q for every dual 0-cochain q, so
// a ^ b = (1/2) M2^{-1} U(a)^T b. The recentred swept vectors make this exact
// for constant fields (where a ^ b has the constant density a x b) on every
// admissible mesh.
inline VectorXd wedge11(const AdvectionContext& ctx, const VectorXd& a,
                        const VectorXd& b) {
  const SpMat U = extrusion_matrix(ctx, a);
  return 0.5 * (U.transpose() * b).cwiseQuotient(ctx.ops->m2);
}

// Cartan formula on dual 1-cochains: L_v a = Dt0 (i_v a) + I_v(Dt1 a).
inline VectorXd lie1(const AdvectionContext& ctx, const VectorXd& v, const VectorXd& a) {
  return ctx.ops->Dt0 * contraction1(ctx, v, a) + contraction2(ctx, v, ctx.ops->Dt1 * a);
}

// Top-degree Lie derivative (no further exterior derivative in 2D):
// L_v w = Dt1 I_v(w).
inline VectorXd lie2(const AdvectionContext& ctx, const VectorXd& v, const VectorXd& w) {
  return ctx.ops->Dt1 * contraction2(ctx, v, w);
}

// Matrix of the pointwise contraction a -> i_v a, the F x E operator whose
// row t holds the coefficients of u(c_t) . w(c_t) in the entries of a. The
// chain transport assembles its transpose.
inline SpMat contraction1_matrix(const AdvectionContext& ctx, const VectorXd& v) {
  const TriMesh& m = *ctx.mesh;
  const std::vector<Vec2> u = ctx.recon->reconstruct(v);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * m.nf());
  for (int t = 0; t < m.nf(); ++t) {
    for (int c = 0; c < 3; ++c) {
      const int j = m.tri_edges[t][c];
      const Vec2 sample = ctx.recon->crude ? Vec2(m.dual_tangent(j) / 3.0)
                                           : Vec2(ctx.recon->ginv[t] * m.dual_tangent(j));
      trip.emplace_back(t, j, u[t].dot(sample) / m.len_d[j]);
    }
  }
  SpMat C1(m.nf(), m.ne());
  C1.setFromTriplets(trip.begin(), trip.end());
  return C1;
}

}  // namespace dvdec

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dvdec/mesh.hpp"
#include "dvdec/operators.hpp"

namespace dvdec {

// Pointwise velocity recovery at dual vertices (circumcentres) from the
// tangential line integrals on the emanating dual edges, via the per-cell
// Gram system G_i u = sum_n (v_n/l_n*) t_n. Exact for constant fields. The
// "crude" variant drops the Gram correction (plain arithmetic mean of the
// directional samples); it is deliberately inconsistent and exists to verify
// that the algebraic conservation identities do not depend on reconstruction
// quality.
struct ReconContext {
  const TriMesh* mesh = nullptr;
  const OperatorSet* ops = nullptr;
  std::vector<Mat2> ginv;
  bool crude = false;
  double max_gram_condition = 0.0;

  std::vector<Vec2> reconstruct(const VectorXd& v) const {
    const TriMesh& m = *mesh;
    std::vector<Vec2> u(m.nf());
    for (int t = 0; t < m.nf(); ++t) {
      Vec2 s = Vec2::Zero();
      for (int c = 0; c < 3; ++c) {
        const int j = m.tri_edges[t][c];
        s += (v[j] / m.len_d[j]) * m.dual_tangent(j);
      }
      u[t] = crude ? Vec2(s / 3.0) : Vec2(ginv[t] * s);
    }
    return u;
  }

  // Trapezoidal face velocity over the dual edge of j (one-sided at the
  // boundary, where the dual edge has a single interior endpoint).
  static Vec2 edge_velocity(const TriMesh& m, const std::vector<Vec2>& u, int j) {
    const int tl = m.face_left[j], tr = m.face_right[j];
    if (tl < 0) return u[tr];
    if (tr < 0) return u[tl];
    return 0.5 * (u[tl] + u[tr]);
  }

  // Bernoulli kinetic part at dual vertices.
  VectorXd kinetic_energy(const VectorXd& v) const {
    const std::vector<Vec2> u = reconstruct(v);
    VectorXd e(mesh->nf());
    for (int t = 0; t < mesh->nf(); ++t) e[t] = 0.5 * u[t].squaredNorm();
    return e;
  }
};

inline ReconContext make_recon_context(const TriMesh& m, const OperatorSet& ops,
                                       bool crude = false) {
  ReconContext ctx;
  ctx.mesh = &m;
  ctx.ops = &ops;
  ctx.crude = crude;
  ctx.ginv.resize(m.nf());
  for (int t = 0; t < m.nf(); ++t) {
    Mat2 g = Mat2::Zero();
    for (int c = 0; c < 3; ++c) {
      const Vec2 th = m.dual_tangent(m.tri_edges[t][c]);
      g += th * th.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Mat2> es(g);
    const double lmin = es.eigenvalues()[0], lmax = es.eigenvalues()[1];
    if (lmin <= 1e-12) throw std::runtime_error("singular reconstruction Gram matrix");
    ctx.max_gram_condition = std::max(ctx.max_gram_condition, lmax / lmin);
    ctx.ginv[t] = g.inverse();
  }
  return ctx;
}

}  // namespace dvdec

#pragma once

#include <Eigen/Sparse>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <vector>

#include "dvdec/advection.hpp"
#include "dvdec/leray.hpp"
#include "dvdec/operators.hpp"

namespace dvdec {

// Material transport of dual 1-chains (loops with real coefficients). The
// transport operator is the adjoint, under the unweighted chain/cochain
// pairing, of the cochain Lie derivative linearised in its form argument.
// The linearisation replaces the velocity appearing in the affine part of
// the 1-form contraction by the Leray projection of the form argument; at
// the physical diagonal (form = advecting field, divergence free) this
// agrees with the nonlinear operator, and it is the unique choice for which
// the adjoint maps cycles to cycles, because the projector kills the one
// boundary-creating term. Circulations of the projected dynamics around
// transported cycles are then conserved exactly in the semi-discrete sense.

// Boundary of a dual 1-chain, as a dual 0-chain (one coefficient per
// circumcentre). Dual edges run from the right face to the left face.
inline VectorXd chain_boundary(const TriMesh& m, const VectorXd& gamma) {
  return m.D1 * gamma;
}

inline bool is_cycle(const TriMesh& m, const VectorXd& gamma, double tol = 1e-10) {
  const double scale = std::max(1.0, gamma.lpNorm<Eigen::Infinity>());
  return chain_boundary(m, gamma).lpNorm<Eigen::Infinity>() <= tol * scale;
}

// Circulation of a 1-cochain around a chain: the pairing is a plain sum, no
// Hodge weights, because cochain values are already line integrals.
inline double circulation(const VectorXd& v, const VectorXd& gamma) {
  return v.dot(gamma);
}

// Frozen transport operator for one advecting field. Holds the two
// velocity-dependent assemblies (pointwise contraction and extrusion) so a
// midpoint iteration can apply the operator repeatedly at fixed velocity.
struct ChainTransport {
  const OperatorSet* ops = nullptr;
  const LerayContext* leray = nullptr;
  SpMat C1;  // pointwise 1-form contraction against the advecting field
  SpMat U;   // extrusion fluxes of the advecting field
};

inline ChainTransport make_chain_transport(const AdvectionContext& adv,
                                           const LerayContext& lc, const VectorXd& v) {
  if (!lc.closed) throw std::logic_error("chain transport requires a closed mesh");
  ChainTransport ct;
  ct.ops = adv.ops;
  ct.leray = &lc;
  ct.C1 = contraction1_matrix(adv, v);
  ct.U = extrusion_matrix(adv, v);
  return ct;
}

// Adjoint Lie derivative on dual 1-chains. The last term applies the
// transposed Leray projector, one scalar Poisson solve against the cached
// factorization; dropping it would let transported cycles grow boundaries.
inline VectorXd chain_lie(const ChainTransport& ct, const VectorXd& gamma) {
  const OperatorSet& ops = *ct.ops;
  const VectorXd g = gamma.cwiseQuotient(ops.m1);
  const VectorXd t1 = ct.C1.transpose() * (ct.leray->mesh->D1 * gamma);
  const VectorXd t2 = ops.Dt1.transpose() * (ct.U.transpose() * g);
  const VectorXd w = ct.U * (ops.Dt1 * g);
  const VectorXd phi = solve_scalar_poisson(*ct.leray, ct.leray->mesh->D1 * w);
  const VectorXd pw = w - ops.m1.cwiseProduct(ops.Dt0 * phi);
  return t1 + 0.5 * (t2 - pw);
}

// Adjoint Lie derivative on dual 0-chains. Transport commutes with the
// boundary through this operator: boundary(chain_lie gamma) equals
// chain_lie0(boundary gamma) for arbitrary chains.
inline VectorXd chain_lie0(const ChainTransport& ct, const VectorXd& c) {
  return ct.leray->mesh->D1 * (ct.C1.transpose() * c);
}

// One implicit midpoint step for a transported loop at frozen advecting
// velocity (the midpoint velocity of the accompanying flow step). The update
// is linear in the loop, so the fixed point converges geometrically once
// dt times the transport norm is below one.
inline VectorXd advect_loop(const ChainTransport& ct, const VectorXd& gamma, double dt,
                            double tol = 1e-13, int budget = 50) {
  if (!is_cycle(*ct.leray->mesh, gamma))
    throw std::invalid_argument("advected loop must be a cycle");
  const double scale = std::max(gamma.lpNorm<Eigen::Infinity>(), 1e-30);
  VectorXd next = gamma + dt * chain_lie(ct, gamma);
  for (int it = 0; it < budget; ++it) {
    const VectorXd mid = 0.5 * (gamma + next);
    VectorXd cand = gamma + dt * chain_lie(ct, mid);
    const double diff = (cand - next).lpNorm<Eigen::Infinity>();
    next.swap(cand);
    if (diff <= tol * scale) return next;
  }
  throw std::runtime_error("loop midpoint iteration did not converge");
}

namespace detail {

// Integer lattice of winding numbers spanned by fundamental cycles of the
// dual graph, with the generating chains carried along through the row
// reduction. Windings are exact integers, so the reduction is exact and a
// requested homology class is either produced or reported absent.
struct WindingBasis {
  struct Row {
    long wx = 0, wy = 0;
    VectorXd chain;
  };
  std::vector<Row> rows;

  void absorb(Row r) {
    if (r.wx == 0 && r.wy == 0) return;
    rows.push_back(std::move(r));
    reduce();
  }

  void reduce() {
    cascade(&Row::wx, 0);
    cascade(&Row::wy, rows.empty() || rows.front().wx == 0 ? 0 : 1);
    while (!rows.empty() && rows.back().wx == 0 && rows.back().wy == 0) rows.pop_back();
    if (rows.size() > 2) rows.resize(2);
  }

  // Euclidean elimination on one winding component, over rows[from..].
  void cascade(long Row::* comp, std::size_t from) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = from; i < rows.size(); ++i) {
        if (rows[i].*comp == 0) continue;
        if (best == rows.size() || std::labs(rows[i].*comp) < std::labs(rows[best].*comp))
          best = i;
      }
      if (best == rows.size()) return;
      std::swap(rows[from], rows[best]);
      bool changed = false;
      for (std::size_t i = from + 1; i < rows.size(); ++i) {
        if (rows[i].*comp == 0) continue;
        const long q = rows[i].*comp / (rows[from].*comp);
        rows[i].wx -= q * rows[from].wx;
        rows[i].wy -= q * rows[from].wy;
        rows[i].chain -= double(q) * rows[from].chain;
        if (rows[i].*comp != 0) changed = true;
      }
      if (!changed) return;
    }
  }

  // Integer combination of the basis with winding (tx, ty), if one exists.
  bool solve(long tx, long ty, VectorXd* out) const {
    if (rows.size() < 2) {
      if (rows.empty()) return false;
      const Row& r = rows[0];
      if (r.wx * ty - r.wy * tx != 0) return false;
      const long a = r.wx != 0 ? tx / r.wx : ty / r.wy;
      if (a * r.wx != tx || a * r.wy != ty) return false;
      *out = double(a) * r.chain;
      return true;
    }
    const Row& r1 = rows[0];
    const Row& r2 = rows[1];
    const long det = r1.wx * r2.wy - r1.wy * r2.wx;
    if (det == 0) return false;
    const long n1 = tx * r2.wy - ty * r2.wx;
    const long n2 = r1.wx * ty - r1.wy * tx;
    if (n1 % det != 0 || n2 % det != 0) return false;
    *out = double(n1 / det) * r1.chain + double(n2 / det) * r2.chain;
    return true;
  }
};

}  // namespace detail

// Integer dual 1-cycle winding once around the torus, along x for axis 0 and
// along y for axis 1. A breadth-first spanning tree of the dual graph is
// grown with lifted circumcentre positions; every non-tree dual edge closes
// a fundamental cycle whose winding is read off from the lift mismatch, and
// the requested class is assembled by exact integer combination.
inline VectorXd homology_cycle(const TriMesh& m, int axis) {
  if (!m.periodic) throw std::logic_error("homology cycles require a torus mesh");
  if (axis != 0 && axis != 1) throw std::invalid_argument("axis must be 0 or 1");

  std::vector<int> parent_face(m.nf(), -1), parent_edge(m.nf(), -1);
  std::vector<double> parent_coeff(m.nf(), 0.0);
  std::vector<char> seen(m.nf(), 0);
  std::vector<Vec2> lift(m.nf(), Vec2::Zero());

  const auto tree_path = [&](int f, double sign, VectorXd* chain) {
    for (int x = f; parent_face[x] >= 0; x = parent_face[x])
      (*chain)[parent_edge[x]] += sign * parent_coeff[x];
  };

  detail::WindingBasis basis;
  VectorXd out;
  const long tx = axis == 0 ? 1 : 0;
  const long ty = axis == 0 ? 0 : 1;

  std::deque<int> queue;
  seen[0] = 1;
  lift[0] = m.cc[0];
  queue.push_back(0);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int e : m.tri_edges[u]) {
      const int other = m.face_left[e] == u ? m.face_right[e] : m.face_left[e];
      const double coeff = m.face_right[e] == u ? 1.0 : -1.0;
      const auto seg = m.dual_segment(e);
      const Vec2 disp = coeff * (seg.second - seg.first);
      if (!seen[other]) {
        seen[other] = 1;
        lift[other] = lift[u] + disp;
        parent_face[other] = u;
        parent_edge[other] = e;
        parent_coeff[other] = coeff;
        queue.push_back(other);
        continue;
      }
      if (e == parent_edge[u] || e == parent_edge[other]) continue;
      const Vec2 delta = lift[u] + disp - lift[other];
      const long kx = std::lround(delta.x() / m.Lx);
      const long ky = std::lround(delta.y() / m.Ly);
      if ((delta - Vec2(double(kx) * m.Lx, double(ky) * m.Ly)).norm() > 1e-6)
        throw std::logic_error("dual graph lift is inconsistent");
      if (kx == 0 && ky == 0) continue;
      detail::WindingBasis::Row row;
      row.wx = kx;
      row.wy = ky;
      row.chain = VectorXd::Zero(m.ne());
      row.chain[e] += coeff;
      tree_path(u, 1.0, &row.chain);
      tree_path(other, -1.0, &row.chain);
      basis.absorb(std::move(row));
      if (basis.solve(tx, ty, &out)) return out;
    }
  }
  throw std::runtime_error("homology class not reachable from fundamental cycles");
}

}  // namespace dvdec

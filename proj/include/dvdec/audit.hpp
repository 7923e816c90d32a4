#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "dvdec/mesh.hpp"

namespace dvdec {

// Geometric health report. h and h_min are measured on dual edge lengths.
// Containment margin is the signed distance from each circumcentre to its
// triangle boundary (negative = circumcentre escaped). The two case-B
// certificates are the centroid-proximity deviation (midpoints of paired
// primal/dual cells coincide) and the reconstruction-symmetry residual
// (third moment of the outward dual directions over the union stencil of a
// dual edge's two endpoints); both are exactly zero on the equilateral
// lattice and O(h)/h^2 on jittered meshes.
struct MeshAudit {
  double h = 0.0;
  double h_min = 0.0;
  double quasi_uniformity = 0.0;
  double shape_regularity = 0.0;
  int max_valence = 0;
  double containment_margin = 0.0;
  double centroid_proximity = 0.0;
  double recon_symmetry = 0.0;
  double delaunay_min_dual = 0.0;
  double orthogonality = 0.0;
  double chain_residual = 0.0;
  double area_defect = 0.0;
  double cell_identity = 0.0;
  int euler_characteristic = 0;

  bool case_b() const { return centroid_proximity <= 1e-10 && recon_symmetry <= 1e-10; }
  bool healthy() const {
    return delaunay_min_dual > 0.0 && containment_margin >= 0.0 &&
           orthogonality <= 1e-10 && chain_residual == 0.0;
  }
};

namespace detail {

inline double tri_shape_ratio(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double la = (b - c).norm(), lb = (a - c).norm(), lc = (a - b).norm();
  const double area = std::abs(triangle_area(a, b, c));
  const double inradius = 2.0 * area / (la + lb + lc);
  return inradius / std::max({la, lb, lc});
}

}  // namespace detail

inline MeshAudit audit_mesh(const TriMesh& m) {
  MeshAudit a;
  a.euler_characteristic = m.nv() - m.ne() + m.nf();

  a.h = 0.0;
  a.h_min = std::numeric_limits<double>::max();
  a.delaunay_min_dual = std::numeric_limits<double>::max();
  a.orthogonality = 0.0;
  for (int j = 0; j < m.ne(); ++j) {
    a.h = std::max(a.h, m.len_d[j]);
    a.h_min = std::min(a.h_min, m.len_d[j]);
    a.delaunay_min_dual = std::min(a.delaunay_min_dual, m.len_d[j]);
    const auto [s, e] = m.dual_segment(j);
    const double seg = (e - s).norm();
    if (seg > 0.0)
      a.orthogonality = std::max(a.orthogonality, std::abs((e - s).dot(m.edge_dir[j])) / seg);
  }
  a.quasi_uniformity = a.h / a.h_min;

  a.shape_regularity = std::numeric_limits<double>::max();
  a.containment_margin = std::numeric_limits<double>::max();
  for (int t = 0; t < m.nf(); ++t) {
    for (int c = 0; c < 3; ++c) {
      const auto k = m.kite(t, c);
      a.shape_regularity =
          std::min({a.shape_regularity, detail::tri_shape_ratio(k[0], k[1], k[2]),
                    detail::tri_shape_ratio(k[0], k[2], k[3])});
    }
    const auto& ch = m.tri_chart[t];
    for (int c = 0; c < 3; ++c) {
      const Vec2 p = ch[c], q = ch[(c + 1) % 3];
      const Vec2 inward = rot90((q - p).normalized());
      a.containment_margin =
          std::min(a.containment_margin, (m.cc_chart[t] - p).dot(inward));
    }
  }

  for (int v = 0; v < m.nv(); ++v)
    a.max_valence = std::max(a.max_valence, static_cast<int>(m.vert_edges[v].size()));

  // Centroid proximity: dual edge midpoint vs primal edge midpoint, and dual
  // cell centroid vs vertex position (the 2D primal/dual pairings).
  double dev_edge = 0.0;
  for (int j = 0; j < m.ne(); ++j) {
    const auto [s, e] = m.dual_segment(j);
    const Vec2 mid_chart = m.image_near(m.edge_mid[j], 0.5 * (s + e));
    dev_edge = std::max(dev_edge, (0.5 * (s + e) - mid_chart).norm());
  }
  std::vector<Vec2> first_moment(m.nv(), Vec2::Zero());
  for (int t = 0; t < m.nf(); ++t)
    for (int c = 0; c < 3; ++c) {
      const auto k = m.kite(t, c);
      const double a1 = triangle_area(k[0], k[1], k[2]);
      const double a2 = triangle_area(k[0], k[2], k[3]);
      const Vec2 c1 = (k[0] + k[1] + k[2]) / 3.0 - k[0];
      const Vec2 c2 = (k[0] + k[2] + k[3]) / 3.0 - k[0];
      first_moment[m.tris[t][c]] += a1 * c1 + a2 * c2;
    }
  double dev_cell = 0.0;
  for (int v = 0; v < m.nv(); ++v)
    dev_cell = std::max(dev_cell, first_moment[v].norm() / m.area_v[v]);
  a.centroid_proximity = (dev_edge + dev_cell) / (a.h * a.h);

  // Reconstruction symmetry: for each interior dual edge, sum the outward
  // third-moment tensors of both endpoint stencils; the shared edge cancels.
  double sym = 0.0;
  auto add_star = [&](int t, Eigen::Matrix<double, 4, 1>& T) {
    for (int c = 0; c < 3; ++c) {
      const int jj = m.tri_edges[t][c];
      const double out = (m.face_right[jj] == t) ? 1.0 : -1.0;
      const Vec2 d = out * m.dual_tangent(jj);
      const double w = m.len_d[jj];
      T[0] += w * d.x() * d.x() * d.x();
      T[1] += w * d.x() * d.x() * d.y();
      T[2] += w * d.x() * d.y() * d.y();
      T[3] += w * d.y() * d.y() * d.y();
    }
  };
  for (int j = 0; j < m.ne(); ++j) {
    if (m.boundary_edge[j]) continue;
    Eigen::Matrix<double, 4, 1> T = Eigen::Matrix<double, 4, 1>::Zero();
    add_star(m.face_left[j], T);
    add_star(m.face_right[j], T);
    sym = std::max(sym, T.cwiseAbs().maxCoeff());
  }
  a.recon_symmetry = sym / (a.h * a.h);

  a.chain_residual = m.nf() > 0 ? (m.D1 * m.D0).norm() : 0.0;

  double area_p = 0.0, area_d = 0.0;
  for (double x : m.area_f) area_p += x;
  for (double x : m.area_v) area_d += x;
  a.area_defect = std::abs(area_p - area_d) / area_p;

  // On interior stars the Voronoi cell tiles into kites of area l_j l_j* / 4.
  double cid = 0.0;
  for (int v = 0; v < m.nv(); ++v) {
    if (m.boundary_vertex[v]) continue;
    double s = 0.0;
    for (int j : m.vert_edges[v]) s += 0.25 * m.len_p[j] * m.len_d[j];
    cid = std::max(cid, std::abs(s - m.area_v[v]) / m.area_v[v]);
  }
  a.cell_identity = cid;

  return a;
}

}  // namespace dvdec

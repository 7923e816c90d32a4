#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvdec/geometry.hpp"

namespace dvdec {

// Primal-dual triangle mesh. The primal complex is a triangulation of either
// the torus [0,Lx) x [0,Ly) or a bounded parallelogram; the dual complex is
// the circumcentric (Voronoi) one. Velocity lives on dual edges (one value
// per primal edge), vorticity on dual cells (one per primal vertex), and
// pressure/Bernoulli potentials at circumcentres (one per triangle).
//
// Orientation conventions, fixed once:
//   - primal edge j runs tail -> head with tail id < head id;
//   - triangles are stored counterclockwise;
//   - the dual edge of j has unit tangent rot90(edge_dir[j]) and runs from
//     the right face circumcentre to the left face circumcentre (for a
//     boundary edge the missing endpoint is the primal edge midpoint).
struct TriMesh {
  double Lx = 0.0, Ly = 0.0;
  bool periodic = true;

  std::vector<Vec2> vpos;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> tris;

  // Corner coordinates of each triangle in a wrap-coherent local chart.
  std::vector<std::array<Vec2, 3>> tri_chart;

  Eigen::SparseMatrix<double> D0;  // E x V, +head -tail
  Eigen::SparseMatrix<double> D1;  // F x E, CCW boundary signs

  std::vector<Vec2> edge_dir;
  std::vector<double> len_p;
  std::vector<Vec2> edge_mid;
  std::vector<double> len_d;
  std::vector<int> face_left, face_right;
  std::vector<bool> boundary_edge;
  std::vector<bool> boundary_vertex;

  std::vector<Vec2> cc;
  std::vector<std::array<Vec2, 3>> edge_mid_chart;  // per-face edge midpoints
  std::vector<Vec2> cc_chart;
  std::vector<double> area_f;

  std::vector<double> area_v;
  std::vector<std::vector<int>> vert_edges;
  std::vector<std::vector<int>> vert_tris;
  std::vector<std::array<int, 3>> tri_edges;  // edge id of side (corner c -> c+1)

  int nv() const { return static_cast<int>(vpos.size()); }
  int ne() const { return static_cast<int>(edges.size()); }
  int nf() const { return static_cast<int>(tris.size()); }

  Vec2 dual_tangent(int j) const { return rot90(edge_dir[j]); }

  // Endpoints of the dual edge of j in a chart centred at the primal edge
  // midpoint. first = start (right side), second = end (left side).
  std::pair<Vec2, Vec2> dual_segment(int j) const {
    const Vec2 m = edge_mid[j];
    Vec2 a = m, b = m;
    if (face_right[j] >= 0) a = image_near(cc[face_right[j]], m);
    if (face_left[j] >= 0) b = image_near(cc[face_left[j]], m);
    return {a, b};
  }

  Vec2 image_near(const Vec2& p, const Vec2& ref) const {
    if (!periodic) return p;
    return Vec2(nearest_image(p.x(), ref.x(), Lx), nearest_image(p.y(), ref.y(), Ly));
  }

  Vec2 wrap(const Vec2& p) const {
    if (!periodic) return p;
    return Vec2(wrap_coord(p.x(), Lx), wrap_coord(p.y(), Ly));
  }

  // Corner kite of vertex `corner` in triangle t: (vertex, midpoint of the
  // next edge, circumcentre, midpoint of the previous edge), in the face
  // chart. The kites of a vertex tile its (clipped) Voronoi cell.
  std::array<Vec2, 4> kite(int t, int corner) const {
    const auto& ch = tri_chart[t];
    const Vec2 p = ch[corner];
    const Vec2 m1 = 0.5 * (p + ch[(corner + 1) % 3]);
    const Vec2 m2 = 0.5 * (p + ch[(corner + 2) % 3]);
    return {p, m1, cc_chart[t], m2};
  }
};

namespace detail {

inline void build_connectivity(TriMesh& m) {
  const int nv = m.nv(), nf = m.nf();
  std::map<std::array<int, 2>, int> edge_id;
  for (const auto& t : m.tris)
    for (int c = 0; c < 3; ++c) {
      int a = t[c], b = t[(c + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_id.emplace(std::array<int, 2>{a, b}, 0);
    }
  m.edges.clear();
  m.edges.reserve(edge_id.size());
  for (auto& [key, id] : edge_id) {
    id = static_cast<int>(m.edges.size());
    m.edges.push_back(key);
  }
  const int ne = m.ne();

  std::vector<Eigen::Triplet<double>> t0, t1;
  t0.reserve(2 * ne);
  for (int j = 0; j < ne; ++j) {
    t0.emplace_back(j, m.edges[j][1], 1.0);
    t0.emplace_back(j, m.edges[j][0], -1.0);
  }
  m.D0.resize(ne, nv);
  m.D0.setFromTriplets(t0.begin(), t0.end());

  m.face_left.assign(ne, -1);
  m.face_right.assign(ne, -1);
  m.tri_edges.assign(nf, {-1, -1, -1});
  t1.reserve(3 * nf);
  for (int t = 0; t < nf; ++t)
    for (int c = 0; c < 3; ++c) {
      const int a = m.tris[t][c], b = m.tris[t][(c + 1) % 3];
      const int j = edge_id.at({std::min(a, b), std::max(a, b)});
      const double s = a < b ? 1.0 : -1.0;
      t1.emplace_back(t, j, s);
      m.tri_edges[t][c] = j;
      int& slot = s > 0 ? m.face_left[j] : m.face_right[j];
      if (slot >= 0) throw std::runtime_error("non-manifold edge");
      slot = t;
    }
  m.D1.resize(nf, ne);
  m.D1.setFromTriplets(t1.begin(), t1.end());

  m.vert_edges.assign(nv, {});
  m.vert_tris.assign(nv, {});
  for (int j = 0; j < ne; ++j) {
    m.vert_edges[m.edges[j][0]].push_back(j);
    m.vert_edges[m.edges[j][1]].push_back(j);
  }
  for (int t = 0; t < nf; ++t)
    for (int c = 0; c < 3; ++c) m.vert_tris[m.tris[t][c]].push_back(t);
}

inline void build_geometry(TriMesh& m) {
  const int ne = m.ne(), nf = m.nf(), nv = m.nv();

  m.tri_chart.resize(nf);
  m.cc.resize(nf);
  m.cc_chart.resize(nf);
  m.area_f.resize(nf);
  m.edge_mid_chart.resize(nf);
  for (int t = 0; t < nf; ++t) {
    const auto& tri = m.tris[t];
    std::array<Vec2, 3> ch;
    ch[0] = m.vpos[tri[0]];
    ch[1] = m.image_near(m.vpos[tri[1]], ch[0]);
    ch[2] = m.image_near(m.vpos[tri[2]], 0.5 * (ch[0] + ch[1]));
    const double area = triangle_area(ch[0], ch[1], ch[2]);
    if (area <= 0.0) throw std::runtime_error("triangle not CCW or degenerate");
    m.tri_chart[t] = ch;
    m.area_f[t] = area;
    const Vec2 c = circumcentre(ch[0], ch[1], ch[2]);
    m.cc_chart[t] = c;
    m.cc[t] = m.wrap(c);
    for (int cnr = 0; cnr < 3; ++cnr)
      m.edge_mid_chart[t][cnr] = 0.5 * (ch[cnr] + ch[(cnr + 1) % 3]);
  }

  m.edge_dir.resize(ne);
  m.len_p.resize(ne);
  m.edge_mid.resize(ne);
  m.len_d.resize(ne);
  m.boundary_edge.assign(ne, false);
  for (int j = 0; j < ne; ++j) {
    const Vec2 a = m.vpos[m.edges[j][0]];
    const Vec2 b = m.image_near(m.vpos[m.edges[j][1]], a);
    const Vec2 d = b - a;
    m.len_p[j] = d.norm();
    m.edge_dir[j] = d / m.len_p[j];
    m.edge_mid[j] = m.wrap(0.5 * (a + b));
    m.boundary_edge[j] = m.face_left[j] < 0 || m.face_right[j] < 0;
    const auto [s, e] = m.dual_segment(j);
    m.len_d[j] = (e - s).dot(m.dual_tangent(j));
  }

  m.boundary_vertex.assign(nv, false);
  for (int j = 0; j < ne; ++j)
    if (m.boundary_edge[j]) {
      m.boundary_vertex[m.edges[j][0]] = true;
      m.boundary_vertex[m.edges[j][1]] = true;
    }

  m.area_v.assign(nv, 0.0);
  for (int t = 0; t < nf; ++t)
    for (int c = 0; c < 3; ++c) {
      const auto k = m.kite(t, c);
      const double a = triangle_area(k[0], k[1], k[2]) + triangle_area(k[0], k[2], k[3]);
      m.area_v[m.tris[t][c]] += a;
    }
}

}  // namespace detail

// Assemble connectivity and all primal/dual measures from vertex positions
// and CCW triangles. Throws on degenerate input.
inline TriMesh make_mesh(std::vector<Vec2> vpos, std::vector<std::array<int, 3>> tris,
                         double Lx, double Ly, bool periodic) {
  TriMesh m;
  m.Lx = Lx;
  m.Ly = Ly;
  m.periodic = periodic;
  m.vpos = std::move(vpos);
  if (periodic)
    for (auto& p : m.vpos) p = m.wrap(p);
  m.tris = std::move(tris);
  detail::build_connectivity(m);
  detail::build_geometry(m);
  return m;
}

}  // namespace dvdec

#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "dvdec/mesh.hpp"

namespace dvdec {

// Portable uniform doubles in [0,1) from raw engine bits; the standard
// distributions are implementation-defined, which would break seeded
// reproducibility across toolchains.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Vec2 uniform_disk(std::mt19937_64& rng, double radius) {
  while (true) {
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double y = 2.0 * uniform01(rng) - 1.0;
    if (x * x + y * y <= 1.0) return radius * Vec2(x, y);
  }
}

namespace detail {

// Vertex layout shared by the torus and bounded builders: row r is offset by
// r/2 lattice units, row height is sqrt(3)/2 times the lattice spacing, so
// every triangle is exactly equilateral.
inline Vec2 lattice_point(int i, int r, double a) {
  return Vec2(a * (i + 0.5 * r), a * (0.5 * std::sqrt(3.0)) * r);
}

inline bool all_acute_around(const TriMesh& m, const std::vector<Vec2>& vpos, int v,
                             double margin) {
  for (int t : m.vert_tris[v]) {
    const auto& tri = m.tris[t];
    Vec2 p0 = vpos[tri[0]];
    Vec2 p1 = m.periodic ? m.image_near(vpos[tri[1]], p0) : vpos[tri[1]];
    Vec2 p2 = m.periodic ? m.image_near(vpos[tri[2]], 0.5 * (p0 + p1)) : vpos[tri[2]];
    const double s0 = (p2 - p1).squaredNorm();
    const double s1 = (p2 - p0).squaredNorm();
    const double s2 = (p1 - p0).squaredNorm();
    const double longest = std::max({s0, s1, s2});
    const double sum = s0 + s1 + s2;
    // acute iff the longest squared edge is below the sum of the other two
    if (longest > (1.0 - margin) * (sum - longest)) return false;
  }
  return true;
}

inline void perturb_vertices(TriMesh& base, double amplitude, unsigned long seed,
                             bool keep_boundary) {
  std::mt19937_64 rng(seed);
  std::vector<Vec2> vpos = base.vpos;
  const double margin = 0.05;
  const int budget = 200;
  for (int v = 0; v < base.nv(); ++v) {
    if (keep_boundary && base.boundary_vertex[v]) continue;
    const Vec2 original = vpos[v];
    bool placed = false;
    for (int k = 0; k < budget && !placed; ++k) {
      vpos[v] = base.wrap(original + uniform_disk(rng, amplitude));
      placed = all_acute_around(base, vpos, v, margin);
    }
    if (!placed)
      throw std::runtime_error("perturbation rejected: acuteness unreachable, reduce amplitude");
  }
  base = make_mesh(std::move(vpos), base.tris, base.Lx, base.Ly, base.periodic);
}

}  // namespace detail

// Flat torus [0,2pi) x [0,sqrt(3)pi) triangulated by the exactly equilateral
// lattice with spacing a = 2pi/n (n columns, n rows). The shear offset closes
// around the torus only for even n. family "perturbed" jitters every vertex
// by uniform noise in a disk of radius perturbation*h (h = dual edge length
// a/sqrt(3)), redrawing until all incident triangles stay strictly acute,
// which keeps the mesh Delaunay with circumcentres inside their triangles.
inline TriMesh build_torus_mesh(int n, const std::string& family,
                                double perturbation = 0.0, unsigned long seed = 0) {
  if (n < 4) throw std::invalid_argument("build_torus_mesh: n >= 4 required");
  if (n % 2 != 0)
    throw std::invalid_argument("build_torus_mesh: n must be even for the sheared lattice to close");
  if (perturbation < 0.0 || perturbation >= 0.3)
    throw std::invalid_argument("build_torus_mesh: perturbation in [0, 0.3) required");

  const double a = 2.0 * M_PI / n;
  const double Lx = 2.0 * M_PI;
  const double Ly = n * a * 0.5 * std::sqrt(3.0);

  std::vector<Vec2> vpos(n * n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i)
      vpos[r * n + i] = Vec2(wrap_coord(detail::lattice_point(i, r, a).x(), Lx),
                             detail::lattice_point(i, r, a).y());

  // Row n coincides with row 0 shifted by n/2 lattice units.
  auto vid = [&](int i, int r) {
    if (r == n) {
      i += n / 2;
      r = 0;
    }
    return r * n + ((i % n) + n) % n;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * n * n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i) {
      tris.push_back({vid(i, r), vid(i + 1, r), vid(i, r + 1)});
      tris.push_back({vid(i + 1, r), vid(i + 1, r + 1), vid(i, r + 1)});
    }

  TriMesh m = make_mesh(std::move(vpos), std::move(tris), Lx, Ly, true);
  if (family == "perturbed") {
    const double h = a / std::sqrt(3.0);
    detail::perturb_vertices(m, perturbation * h, seed, false);
  } else if (family != "equilateral") {
    throw std::invalid_argument("build_torus_mesh: unknown family " + family);
  }
  return m;
}

// Bounded domain with no-penetration boundary: the parallelogram spanned by
// (n a, 0) and (n a/2, n a sqrt(3)/2) with a = 2pi/n, triangulated by the
// equilateral lattice so that the boundary is a union of primal edges and
// every triangle is acute (an exactly square domain admits no such simple
// acute family; the parallelogram exercises the same boundary structure).
// Dual edges of boundary primal edges are half-edges ending at the edge
// midpoint on the boundary.
inline TriMesh build_bounded_mesh(int n, const std::string& family,
                                  double perturbation = 0.0, unsigned long seed = 0) {
  if (n < 4) throw std::invalid_argument("build_bounded_mesh: n >= 4 required");
  const double a = 2.0 * M_PI / n;
  const int stride = n + 1;
  std::vector<Vec2> vpos(stride * stride);
  for (int r = 0; r <= n; ++r)
    for (int i = 0; i <= n; ++i) vpos[r * stride + i] = detail::lattice_point(i, r, a);

  auto vid = [&](int i, int r) { return r * stride + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * n * n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i) {
      tris.push_back({vid(i, r), vid(i + 1, r), vid(i, r + 1)});
      tris.push_back({vid(i + 1, r), vid(i + 1, r + 1), vid(i, r + 1)});
    }

  TriMesh m = make_mesh(std::move(vpos), std::move(tris), 2.0 * M_PI * 1.5 + 1.0,
                        M_PI * std::sqrt(3.0) + 1.0, false);
  if (family == "perturbed") {
    const double h = a / std::sqrt(3.0);
    detail::perturb_vertices(m, perturbation * h, seed, true);
  } else if (family != "equilateral") {
    throw std::invalid_argument("build_bounded_mesh: unknown family " + family);
  }
  return m;
}

}  // namespace dvdec

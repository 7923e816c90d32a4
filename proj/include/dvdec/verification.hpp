#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvdec/builders.hpp"
#include "dvdec/circulation.hpp"
#include "dvdec/derham.hpp"
#include "dvdec/dynamics.hpp"
#include "dvdec/reference.hpp"

namespace dvdec {

// Closed-form reference flows behind uniform evaluators, and the instruments
// that measure how the discretisation approaches them: truncation residuals,
// error norms, and rate-fitted refinement studies. Every reference must pass
// an independent finite-difference audit of its own evaluators before any
// study consumes it, so a sign or scaling slip in a closed form cannot leak
// into a fitted rate.

struct ReferenceSolution {
  std::string name;
  double nu = 0.0;
  double Lx = 2.0 * M_PI, Ly = std::sqrt(3.0) * M_PI;
  double horizon = 1.0;           // audit samples t in [0, horizon]
  Vec2 mean_flow = Vec2::Zero();  // uniform part; sets torus-loop circulations
  std::function<Vec2(const Vec2&, double)> velocity;
  std::function<Vec2(const Vec2&, double)> velocity_t;
  std::function<double(const Vec2&, double)> vorticity;
  std::function<double(const Vec2&, double)> pressure;
  std::function<double(double, double)> energy;  // exact E(t) given the domain area
};

inline ReferenceSolution reference_taylor_green(double nu) {
  if (nu < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  TaylorGreen2D tg;
  tg.nu = nu;
  ReferenceSolution r;
  r.name = "tg2d";
  r.nu = nu;
  r.velocity = [tg](const Vec2& x, double t) { return tg.velocity(x, t); };
  r.velocity_t = [tg](const Vec2& x, double t) { return tg.velocity_t(x, t); };
  r.vorticity = [tg](const Vec2& x, double t) { return tg.vorticity(x, t); };
  r.pressure = [tg](const Vec2& x, double t) { return tg.pressure(x, t); };
  r.energy = [tg](double t, double area) { return tg.energy(t, area); };
  return r;
}

inline ReferenceSolution reference_drifting_taylor_green(double nu) {
  if (nu < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  DriftingTaylorGreen2D d;
  d.base.nu = nu;
  ReferenceSolution r;
  r.name = "tg2d-drift";
  r.nu = nu;
  r.mean_flow = d.drift;
  r.velocity = [d](const Vec2& x, double t) { return d.velocity(x, t); };
  r.velocity_t = [d](const Vec2& x, double t) { return d.velocity_t(x, t); };
  r.vorticity = [d](const Vec2& x, double t) { return d.vorticity(x, t); };
  r.pressure = [d](const Vec2& x, double t) { return d.pressure(x, t); };
  r.energy = [d](double t, double area) { return d.energy(t, area); };
  return r;
}

inline ReferenceSolution reference_uniform(const Vec2& c) {
  ReferenceSolution r;
  r.name = "uniform";
  r.mean_flow = c;
  r.velocity = [c](const Vec2&, double) { return c; };
  r.velocity_t = [](const Vec2&, double) { return Vec2(Vec2::Zero()); };
  r.vorticity = [](const Vec2&, double) { return 0.0; };
  r.pressure = [](const Vec2&, double) { return 0.0; };
  r.energy = [c](double, double area) { return 0.5 * c.squaredNorm() * area; };
  return r;
}

struct ReferenceAudit {
  double max_divergence = 0.0;
  double max_momentum_residual = 0.0;
  double max_time_derivative_mismatch = 0.0;
  double max_vorticity_mismatch = 0.0;
};

namespace detail {

// Eighth-order central difference. The nine-point stencil keeps the audit
// independent of every analytic derivative it is checking while reaching
// the 1e-12 floor the divergence bound asks for.
template <class F>
double fd_derivative(F&& f, double h) {
  return (0.8 * (f(h) - f(-h)) - 0.2 * (f(2.0 * h) - f(-2.0 * h)) +
          (4.0 / 105.0) * (f(3.0 * h) - f(-3.0 * h)) -
          (1.0 / 280.0) * (f(4.0 * h) - f(-4.0 * h))) /
         h;
}

inline Mat2 fd_velocity_gradient(const ReferenceSolution& ref, const Vec2& x, double t,
                                 double h) {
  Mat2 g;
  for (int axis = 0; axis < 2; ++axis) {
    const Vec2 dir = axis == 0 ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
    for (int comp = 0; comp < 2; ++comp)
      g(comp, axis) =
          fd_derivative([&](double s) { return ref.velocity(x + s * dir, t)[comp]; }, h);
  }
  return g;
}

inline Vec2 fd_scalar_gradient(const std::function<double(const Vec2&, double)>& f,
                               const Vec2& x, double t, double h) {
  return Vec2(fd_derivative([&](double s) { return f(x + Vec2(s, 0.0), t); }, h),
              fd_derivative([&](double s) { return f(x + Vec2(0.0, s), t); }, h));
}

}  // namespace detail

// Spot-checks the evaluators against each other with finite differences at
// random space-time samples: zero divergence, vorticity consistent with the
// velocity curl, the analytic time derivative consistent with the velocity
// history, and the full momentum balance
//   u_t + w Rot90(u) + grad(p + |u|^2/2) - nu Rot90(grad w) = 0,
// the rotational form with the viscous term written through the scalar curl.
inline ReferenceAudit audit_reference(const ReferenceSolution& ref, int trials = 200,
                                      unsigned long seed = 2026) {
  if (!ref.velocity || !ref.velocity_t || !ref.vorticity || !ref.pressure)
    throw std::invalid_argument("reference is missing an evaluator");
  std::mt19937_64 rng(seed);
  const double h = 0.04;
  ReferenceAudit a;
  for (int k = 0; k < trials; ++k) {
    const Vec2 x(ref.Lx * uniform01(rng), ref.Ly * uniform01(rng));
    const double t = ref.horizon * uniform01(rng);

    const Mat2 g = detail::fd_velocity_gradient(ref, x, t, h);
    a.max_divergence = std::max(a.max_divergence, std::abs(g(0, 0) + g(1, 1)));
    const double w = ref.vorticity(x, t);
    a.max_vorticity_mismatch = std::max(a.max_vorticity_mismatch, std::abs(g(1, 0) - g(0, 1) - w));

    const Vec2 ut = ref.velocity_t(x, t);
    for (int comp = 0; comp < 2; ++comp) {
      const double fd =
          detail::fd_derivative([&](double s) { return ref.velocity(x, t + s)[comp]; }, h);
      a.max_time_derivative_mismatch =
          std::max(a.max_time_derivative_mismatch, std::abs(fd - ut[comp]));
    }

    const Vec2 grad_b = detail::fd_scalar_gradient(
        [&](const Vec2& p, double s) {
          return ref.pressure(p, s) + 0.5 * ref.velocity(p, s).squaredNorm();
        },
        x, t, h);
    const Vec2 curl_w = rot90(detail::fd_scalar_gradient(ref.vorticity, x, t, h));
    const Vec2 res = ut + w * rot90(ref.velocity(x, t)) + grad_b - ref.nu * curl_w;
    a.max_momentum_residual = std::max(a.max_momentum_residual, res.lpNorm<Eigen::Infinity>());
  }
  return a;
}

// Hard gate in front of every study: a reference that fails its own audit
// must never parameterize a rate fit.
inline void require_reference_audit(const ReferenceSolution& ref) {
  const ReferenceAudit a = audit_reference(ref);
  if (a.max_divergence > 1e-12 || a.max_momentum_residual > 1e-10 ||
      a.max_time_derivative_mismatch > 1e-10 || a.max_vorticity_mismatch > 1e-10)
    throw std::runtime_error("reference solution " + ref.name + " failed its evaluator audit");
}

// Residual of the semi-discrete momentum equation on the sampled reference:
// the divergence-free part of d/dt(R_h u) minus the projected force at
// R_h u. The time derivative is sampled from the analytic evaluator, so the
// returned number is purely spatial error.
inline double truncation_error(const AdvectionContext& adv, const LerayContext& lc,
                               const ReferenceSolution& ref, double t) {
  const TriMesh& m = *adv.mesh;
  const VectorXd v = derham_dual1(m, [&](const Vec2& x) { return ref.velocity(x, t); });
  const VectorXd vdot = derham_dual1(m, [&](const Vec2& x) { return ref.velocity_t(x, t); });
  const ViscositySpec visc =
      ref.nu > 0.0 ? viscosity_isotropic(ref.nu) : viscosity_none();
  const VectorXd tau = vdot - flow_rhs(adv, lc, visc, v);
  return adv.ops->norm_l2h(leray_project(lc, tau));
}

struct ErrorNorms {
  double l2h = 0.0;      // mass-weighted cochain error
  double rec = 0.0;      // strongest per-edge mean mismatch
  double whitney = 0.0;  // continuous L2 distance to the edge-element lift
};

namespace detail {

// Pointwise lowest-order edge-element field on one triangle from its three
// oriented edge circulations c01, c12, c02.
struct WhitneyTriangle {
  Vec2 q0, q1, q2;
  Vec2 g0, g1, g2;  // barycentric gradients
  double c01, c12, c02;

  WhitneyTriangle(const Vec2& a, const Vec2& b, const Vec2& c) : q0(a), q1(b), q2(c) {
    const double d = cross2(q1 - q0, q2 - q0);
    g0 = rot90(q2 - q1) / d;
    g1 = rot90(q0 - q2) / d;
    g2 = rot90(q1 - q0) / d;
  }

  Vec2 operator()(const Vec2& x) const {
    const double l1 = g1.dot(x - q0);
    const double l2 = g2.dot(x - q0);
    const double l0 = 1.0 - l1 - l2;
    return Vec2(c01 * (l0 * g1 - l1 * g0) + c12 * (l1 * g2 - l2 * g1) +
                c02 * (l0 * g2 - l2 * g0));
  }
};

}  // namespace detail

// L2 distance between a smooth field and the edge-element lift of a dual
// 1-cochain. The lift lives on the simplicial refinement that splits every
// kite along its circumcentre diagonal; each small triangle reads its three
// edge circulations from the data available there: the signed share of the
// dual-edge value for the midpoint-to-circumcentre side, the trapezoidal
// face velocity for the vertex-to-midpoint side, and the cell reconstruction
// for the vertex-to-circumcentre diagonal. All three agree with the exact
// line integrals of a constant field, so constants are reproduced exactly,
// and the two dual-edge shares add back to the cochain entry, so the lift
// integrates to v along every dual edge.
template <class F>
double whitney_l2_error(const AdvectionContext& adv, const VectorXd& v, F&& u) {
  const TriMesh& m = *adv.mesh;
  const std::vector<Vec2> cell = adv.recon->reconstruct(v);
  double acc = 0.0;
  for (int t = 0; t < m.nf(); ++t) {
    const auto& ch = m.tri_chart[t];
    const Vec2 cc = m.cc_chart[t];
    for (int c = 0; c < 3; ++c) {
      const int j = m.tri_edges[t][c];
      const Vec2 mid = m.edge_mid_chart[t][c];
      const Vec2 ub = ReconContext::edge_velocity(m, cell, j);
      const double mid_to_cc = v[j] * (cc - mid).dot(m.dual_tangent(j)) / m.len_d[j];
      for (const Vec2& corner : {ch[c], ch[(c + 1) % 3]}) {
        detail::WhitneyTriangle wt(corner, mid, cc);
        wt.c01 = ub.dot(mid - corner);
        wt.c12 = mid_to_cc;
        wt.c02 = cell[t].dot(cc - corner);
        acc += integrate_triangle(corner, mid, cc,
                                  [&](const Vec2& x) { return (u(x) - wt(x)).squaredNorm(); });
      }
    }
  }
  return std::sqrt(acc);
}

inline ErrorNorms error_norms(const AdvectionContext& adv, const VectorXd& v,
                              const ReferenceSolution& ref, double t,
                              bool with_whitney = true) {
  const TriMesh& m = *adv.mesh;
  const VectorXd exact = derham_dual1(m, [&](const Vec2& x) { return ref.velocity(x, t); });
  ErrorNorms e;
  e.l2h = adv.ops->norm_l2h(v - exact);
  e.rec = adv.ops->norm_rec(v - exact);
  if (with_whitney)
    e.whitney = whitney_l2_error(adv, v, [&](const Vec2& x) { return ref.velocity(x, t); });
  return e;
}

struct RateFit {
  double slope = 0.0;
  double band95 = 0.0;  // half-width of the 95% confidence interval
  int points = 0;
};

struct ConvergenceTable {
  char family = 'B';  // mesh family tag the samples were generated on
  std::string quantity;
  std::vector<double> h;
  std::vector<double> error;
  double floor = 0.0;  // detected solver floor; entries below 100x are not fitted
  bool monotone = false;
  std::optional<RateFit> fit;  // absent when flagged (non-monotone or too few points)
};

namespace detail {

inline double student_t95(int dof) {
  static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                                     2.447,  2.365, 2.306, 2.262, 2.228};
  if (dof <= 0) return 0.0;
  if (dof <= 10) return table[dof - 1];
  return 1.96 + 2.8 / dof;
}

}  // namespace detail

// Least-squares log-log fit with the plumbing the studies share: entries at
// or below 100x the solver floor are excluded, the surviving errors must
// decrease monotonically, and at least four points must remain, otherwise
// the table is returned flagged with no fit.
inline ConvergenceTable make_convergence_table(char family, std::string quantity,
                                               std::vector<double> h, std::vector<double> error,
                                               double floor) {
  if (h.size() != error.size()) throw std::invalid_argument("mismatched table columns");
  ConvergenceTable tab;
  tab.family = family;
  tab.quantity = std::move(quantity);
  tab.h = std::move(h);
  tab.error = std::move(error);
  tab.floor = floor;

  std::vector<double> x, y;
  for (std::size_t i = 0; i < tab.h.size(); ++i)
    if (tab.error[i] > 0.0 && tab.error[i] >= 100.0 * floor) {
      x.push_back(std::log(tab.h[i]));
      y.push_back(std::log(tab.error[i]));
    }
  tab.monotone = true;
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    if (y[i + 1] >= y[i]) tab.monotone = false;
  if (!tab.monotone || x.size() < 4) return tab;

  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.points = n;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - my - fit.slope * (x[i] - mx);
    ssr += r * r;
  }
  if (n > 2) fit.band95 = detail::student_t95(n - 2) * std::sqrt(ssr / (n - 2) / sxx);
  tab.fit = fit;
  return tab;
}

// Study meshes by family tag. B is the exactly equilateral lattice. A
// jitters every vertex by the fraction 1.2/n of the dual edge length: the
// per-edge roughness error of the discrete operators scales with the jitter
// fraction itself rather than with the spacing, so a resolution-independent
// fraction would make first-order quantities plateau; shrinking the fraction
// linearly keeps every member genuinely irregular while the roughness
// contribution refines at the same first-order pace as the smooth one.
inline TriMesh family_mesh(char family, int n, unsigned long seed) {
  if (family == 'B') return build_torus_mesh(n, "equilateral");
  if (family == 'A') {
    if (n < 6) throw std::invalid_argument("family A needs n >= 6 to keep the jitter admissible");
    return build_torus_mesh(n, "perturbed", 1.2 / n, seed + static_cast<unsigned long>(n));
  }
  throw std::invalid_argument("mesh family tag must be A or B");
}

namespace detail {

// The contexts hold pointers into their siblings, so the bundle is pinned in
// place: construct once, never copy or move.
struct Stack {
  TriMesh mesh;
  OperatorSet ops;
  ReconContext recon;
  AdvectionContext adv;
  LerayContext leray;

  Stack(char family, int n, unsigned long seed)
      : mesh(family_mesh(family, n, seed)),
        ops(assemble_operators(mesh)),
        recon(make_recon_context(mesh, ops)),
        adv(make_advection_context(mesh, ops, recon)),
        leray(make_leray_context(mesh, ops)) {}
  Stack(const Stack&) = delete;
  Stack& operator=(const Stack&) = delete;
};

}  // namespace detail

struct TruncationStudyConfig {
  char family = 'B';
  std::vector<int> resolutions{8, 16, 32, 64};
  double t = 0.0;
  unsigned long seed = 1;
};

inline ConvergenceTable truncation_study(const ReferenceSolution& ref,
                                         const TruncationStudyConfig& cfg) {
  require_reference_audit(ref);
  std::vector<double> h, e;
  double floor = 0.0;
  for (int n : cfg.resolutions) {
    const detail::Stack s(cfg.family, n, cfg.seed);
    const VectorXd v =
        derham_dual1(s.mesh, [&](const Vec2& x) { return ref.velocity(x, cfg.t); });
    floor = std::max(floor, 1e-12 * s.ops.norm_l2h(v));
    h.push_back(2.0 * M_PI / n);
    e.push_back(truncation_error(s.adv, s.leray, ref, cfg.t));
  }
  return make_convergence_table(cfg.family, "projected truncation residual", std::move(h),
                                std::move(e), floor);
}

struct ConvergenceStudyConfig {
  char family = 'B';
  std::vector<int> resolutions{8, 16, 32, 64};
  double nu = 0.0;
  bool mean_flow = false;  // use the drifting variant
  double T = 0.5;
  double dt_h2 = 0.5;  // step policy dt = dt_h2 * h^2, rounded to land on T
  double tol = 1e-13;
  unsigned long seed = 1;
};

namespace detail {

struct TrajectoryRecord {
  double sup_error = 0.0;  // sup over sample times of the L2h velocity error
  double energy0 = 0.0, energyT = 0.0;
  double circulation0 = 0.0, circulationT = 0.0;
  double floor = 0.0;
};

// Integrates the projected interpolant of the reference to the horizon with
// the quadratic step policy, recording the running error against the
// sampled exact solution. The fixed homology loop pairs with the velocity
// only (it is not advected); gradients have zero circulation around cycles,
// so the initial projection does not disturb the circulation sample.
inline TrajectoryRecord run_against_reference(const Stack& s, const ReferenceSolution& ref,
                                              const ConvergenceStudyConfig& cfg, double h,
                                              const VectorXd& loop) {
  const ViscositySpec visc =
      cfg.nu > 0.0 ? viscosity_isotropic(cfg.nu) : viscosity_none();
  const long nsteps = std::max(1L, std::lround(cfg.T / (cfg.dt_h2 * h * h)));
  const double dt = cfg.T / static_cast<double>(nsteps);

  const auto sample = [&](double t) {
    return derham_dual1(s.mesh, [&](const Vec2& x) { return ref.velocity(x, t); });
  };
  FlowState state;
  state.v = leray_project(s.leray, sample(0.0));

  TrajectoryRecord rec;
  rec.energy0 = 0.5 * s.ops.inner1(state.v, state.v);
  rec.circulation0 = circulation(state.v, loop);
  rec.sup_error = s.ops.norm_l2h(state.v - sample(0.0));
  double scale = s.ops.norm_l2h(state.v);
  for (long i = 0; i < nsteps; ++i) {
    state = step_implicit_midpoint(s.adv, s.leray, visc, state, dt, cfg.tol);
    rec.sup_error = std::max(rec.sup_error, s.ops.norm_l2h(state.v - sample(state.t)));
    scale = std::max(scale, s.ops.norm_l2h(state.v));
  }
  rec.energyT = 0.5 * s.ops.inner1(state.v, state.v);
  rec.circulationT = circulation(state.v, loop);
  rec.floor = (cfg.tol + 1e-12) * scale;
  return rec;
}

}  // namespace detail

// Sup-over-time velocity error per resolution under the quadratic step
// policy, fitted on the log-log scale.
inline ConvergenceTable convergence_study(const ConvergenceStudyConfig& cfg) {
  if (cfg.resolutions.size() < 4)
    throw std::invalid_argument("a rate fit needs at least four resolutions");
  if (cfg.T <= 0.0 || cfg.dt_h2 <= 0.0)
    throw std::invalid_argument("horizon and step policy must be positive");
  const ReferenceSolution ref = cfg.mean_flow ? reference_drifting_taylor_green(cfg.nu)
                                              : reference_taylor_green(cfg.nu);
  require_reference_audit(ref);

  std::vector<double> h, e;
  double floor = 0.0;
  for (int n : cfg.resolutions) {
    const detail::Stack s(cfg.family, n, cfg.seed);
    const double hn = 2.0 * M_PI / n;
    const VectorXd loop = homology_cycle(s.mesh, 0);
    const detail::TrajectoryRecord rec = detail::run_against_reference(s, ref, cfg, hn, loop);
    h.push_back(hn);
    e.push_back(rec.sup_error);
    floor = std::max(floor, rec.floor);
  }
  return make_convergence_table(cfg.family, "sup-t velocity error", std::move(h), std::move(e),
                                floor);
}

struct NuUniformityReport {
  std::vector<double> nu;
  std::vector<ConvergenceTable> tables;
  double slope_spread = 0.0;  // max minus min fitted slope over the sweep
};

// Reruns the study across viscosities and reports how stable the fitted
// slope is; a scheme whose accuracy degrades as nu -> 0 shows up as spread.
inline NuUniformityReport nu_uniformity_study(ConvergenceStudyConfig cfg,
                                              std::vector<double> nus = {0.0, 1e-3, 1e-2}) {
  NuUniformityReport rep;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double nu : nus) {
    cfg.nu = nu;
    rep.nu.push_back(nu);
    rep.tables.push_back(convergence_study(cfg));
    if (rep.tables.back().fit) {
      const double s = rep.tables.back().fit->slope;
      lo = any ? std::min(lo, s) : s;
      hi = any ? std::max(hi, s) : s;
      any = true;
    }
  }
  rep.slope_spread = any ? hi - lo : 0.0;
  return rep;
}

struct ConservedQuantityStudy {
  ConvergenceTable energy0, energyT, circulation0, circulationT;
  std::vector<double> relative_energy_drift;  // |E_h(T) - E_h(0)| / E_h(0) per resolution
};

// Discrete conserved quantities against their continuum values along the
// mean-flow reference: the energy functional converges at the quadrature
// rate of the metric, the circulation of the homology loop at the rate the
// snapped polyline approaches the straight cycle, and the drift column
// isolates what time integration adds (nothing beyond solver tolerance).
inline ConservedQuantityStudy conserved_quantity_convergence(const ConvergenceStudyConfig& cfg) {
  if (cfg.nu != 0.0)
    throw std::invalid_argument("conserved-quantity study is defined for the ideal flow");
  if (cfg.resolutions.size() < 4)
    throw std::invalid_argument("a rate fit needs at least four resolutions");
  const ReferenceSolution ref = reference_drifting_taylor_green(0.0);
  require_reference_audit(ref);

  std::vector<double> h, e0, eT, c0, cT;
  ConservedQuantityStudy out;
  double floor = 0.0;
  for (int n : cfg.resolutions) {
    const detail::Stack s(cfg.family, n, cfg.seed);
    const double hn = 2.0 * M_PI / n;
    const VectorXd loop = homology_cycle(s.mesh, 0);
    const detail::TrajectoryRecord rec = detail::run_against_reference(s, ref, cfg, hn, loop);

    const double area = s.ops.m0.sum();
    const double energy_exact = ref.energy(0.0, area);
    const double gamma_exact = ref.mean_flow.x() * s.mesh.Lx;
    h.push_back(hn);
    e0.push_back(std::abs(rec.energy0 - energy_exact));
    eT.push_back(std::abs(rec.energyT - energy_exact));
    c0.push_back(std::abs(rec.circulation0 - gamma_exact));
    cT.push_back(std::abs(rec.circulationT - gamma_exact));
    out.relative_energy_drift.push_back(std::abs(rec.energyT - rec.energy0) / rec.energy0);
    floor = std::max(floor, rec.floor);
  }
  out.energy0 = make_convergence_table(cfg.family, "energy error at t=0", h, e0, floor);
  out.energyT = make_convergence_table(cfg.family, "energy error at t=T", h, eT, floor);
  out.circulation0 = make_convergence_table(cfg.family, "circulation error at t=0", h, c0, 0.0);
  out.circulationT = make_convergence_table(cfg.family, "circulation error at t=T", h, cT, 0.0);
  return out;
}

}  // namespace dvdec

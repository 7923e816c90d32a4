#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvdec/advection.hpp"
#include "dvdec/circulation.hpp"
#include "dvdec/leray.hpp"
#include "dvdec/operators.hpp"

namespace dvdec {

// Semi-discrete flow: projected advection plus an admissible viscous force,
// integrated by the implicit midpoint rule. The midpoint rule is symmetric,
// so the flow map is time reversible, and it conserves quadratic invariants
// whose derivative vanishes, which transfers the exact semi-discrete energy
// balance to the fully discrete trajectory up to solver tolerance.

enum class ViscousKind { none, isotropic, anisotropic, smagorinsky };

struct ViscositySpec {
  ViscousKind kind = ViscousKind::none;
  double nu = 0.0;            // isotropic coefficient
  double nu_h = 0.0, nu_v = 0.0;  // horizontal/vertical split, prism meshes only
  double cs = 0.0;            // Smagorinsky constant
};

inline ViscositySpec viscosity_none() { return {}; }

inline ViscositySpec viscosity_isotropic(double nu) {
  if (nu < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  ViscositySpec s;
  s.kind = ViscousKind::isotropic;
  s.nu = nu;
  return s;
}

inline ViscositySpec viscosity_anisotropic(double nu_h, double nu_v) {
  if (nu_h < 0.0 || nu_v < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  ViscositySpec s;
  s.kind = ViscousKind::anisotropic;
  s.nu_h = nu_h;
  s.nu_v = nu_v;
  return s;
}

inline ViscositySpec viscosity_smagorinsky(double cs) {
  if (cs < 0.0) throw std::invalid_argument("Smagorinsky constant must be nonnegative");
  ViscositySpec s;
  s.kind = ViscousKind::smagorinsky;
  s.cs = cs;
  return s;
}

// Viscous force on dual 1-cochains. All kinds share the curl-curl structure
// with a nonnegative diagonal vorticity weight, so energy dissipation and
// monotonicity hold by construction; the Smagorinsky weight additionally
// scales with the local vorticity magnitude over the cell length scale.
inline VectorXd viscous_force(const OperatorSet& ops, const ViscositySpec& spec,
                              const VectorXd& v) {
  switch (spec.kind) {
    case ViscousKind::none:
      return VectorXd::Zero(v.size());
    case ViscousKind::isotropic:
      return -spec.nu * ops.laplace1(v);
    case ViscousKind::anisotropic:
      throw std::invalid_argument("anisotropic split needs a vertical edge class");
    case ViscousKind::smagorinsky: {
      const TriMesh& m = *ops.mesh;
      const VectorXd w = ops.curl(v);
      VectorXd weighted(w.size());
      for (int k = 0; k < w.size(); ++k) {
        const double ell = std::sqrt(m.area_v[k]);
        weighted[k] = spec.cs * spec.cs * ell * std::fabs(w[k]) * ops.m2[k] * w[k];
      }
      return -(ops.Dt1.transpose() * weighted).cwiseQuotient(ops.m1);
    }
  }
  throw std::logic_error("unreachable viscous kind");
}

// Right-hand side of the projected momentum equation. The Bernoulli gradient
// (kinetic energy head plus any external potential) lies in the range the
// projector annihilates, so it never appears here; it resurfaces only in
// pressure recovery. On bounded meshes forces are restricted to interior
// dual edges before projecting, the Galerkin counterpart of testing against
// no-slip fields only, which keeps the no-slip subspace invariant while
// preserving the energy balance exactly.
inline VectorXd flow_rhs(const AdvectionContext& adv, const LerayContext& lc,
                         const ViscositySpec& spec, const VectorXd& v) {
  VectorXd force = -lamb(adv, v);
  if (spec.kind != ViscousKind::none) force += viscous_force(*adv.ops, spec, v);
  if (lc.closed) return leray_project(lc, force);
  return leray_project_dirichlet(lc, lc.interior.cwiseProduct(force));
}

inline VectorXd euler_rhs(const AdvectionContext& adv, const LerayContext& lc,
                          const VectorXd& v) {
  return flow_rhs(adv, lc, viscosity_none(), v);
}

struct FlowState {
  double t = 0.0;
  VectorXd v;
  std::vector<VectorXd> loops;  // materially advected dual 1-cycles
};

// Raised when the midpoint iteration stalls; the caller may retry with the
// suggested smaller step.
struct StepRejected : std::runtime_error {
  double suggested_dt;
  explicit StepRejected(double dt)
      : std::runtime_error("midpoint iteration did not converge"), suggested_dt(dt) {}
};

// One implicit midpoint step, velocity first, then any registered loops at
// the converged midpoint velocity. Divergence is checked on acceptance; a
// violation means the projector or the solver is broken, not the step size.
inline FlowState step_implicit_midpoint(const AdvectionContext& adv, const LerayContext& lc,
                                        const ViscositySpec& spec, const FlowState& state,
                                        double dt, double tol = 1e-13, int budget = 50) {
  if (dt <= 0.0) throw std::invalid_argument("step size must be positive");
  const VectorXd& v = state.v;
  const double scale = std::max(adv.ops->norm_l2h(v), 1e-30);

  VectorXd next = v + dt * flow_rhs(adv, lc, spec, v);
  bool converged = false;
  for (int it = 0; it < budget; ++it) {
    VectorXd cand = v + dt * flow_rhs(adv, lc, spec, 0.5 * (v + next));
    const double diff = adv.ops->norm_l2h(cand - next);
    next.swap(cand);
    if (diff <= tol * scale) {
      converged = true;
      break;
    }
  }
  if (!converged) throw StepRejected(0.5 * dt);

  FlowState out;
  out.t = state.t + dt;
  out.v = std::move(next);
  const double div_res = adv.ops->divergence(out.v).lpNorm<Eigen::Infinity>();
  if (div_res > 1e-9 * std::max(adv.ops->norm_l2h(out.v), 1e-30))
    throw std::runtime_error("divergence residual grew along the step");

  if (!state.loops.empty()) {
    const ChainTransport ct = make_chain_transport(adv, lc, 0.5 * (v + out.v));
    out.loops.reserve(state.loops.size());
    for (const VectorXd& loop : state.loops)
      out.loops.push_back(advect_loop(ct, loop, dt, tol, budget));
  }
  return out;
}

// Explicit Euler step, kept as a diagnostic foil: it is neither symmetric
// nor energy conserving, and the time reversal test quantifies the loss.
inline FlowState step_forward_euler(const AdvectionContext& adv, const LerayContext& lc,
                                    const ViscositySpec& spec, const FlowState& state,
                                    double dt) {
  FlowState out;
  out.t = state.t + dt;
  out.v = state.v + dt * flow_rhs(adv, lc, spec, state.v);
  if (!state.loops.empty()) {
    const ChainTransport ct = make_chain_transport(adv, lc, state.v);
    for (const VectorXd& loop : state.loops)
      out.loops.push_back(loop + dt * chain_lie(ct, loop));
  }
  return out;
}

// Integrate to T, negate, integrate back, negate again. For a symmetric
// stepper the result matches the initial state to solver tolerance.
inline double time_reverse_check(const AdvectionContext& adv, const LerayContext& lc,
                                 const VectorXd& v0, double T, double dt,
                                 double tol = 1e-13, bool forward_euler = false) {
  if (T < 0.0) throw std::invalid_argument("horizon must be nonnegative");
  const long nsteps = std::lround(T / dt);
  if (nsteps == 0) return 0.0;
  const auto advance = [&](FlowState s) {
    for (long i = 0; i < nsteps; ++i)
      s = forward_euler ? step_forward_euler(adv, lc, viscosity_none(), s, dt)
                        : step_implicit_midpoint(adv, lc, viscosity_none(), s, dt, tol);
    return s;
  };
  FlowState s;
  s.v = v0;
  s = advance(std::move(s));
  s.v = -s.v;
  s = advance(std::move(s));
  s.v = -s.v;
  return adv.ops->norm_l2h(s.v - v0) / std::max(adv.ops->norm_l2h(v0), 1e-30);
}

struct FlowDiagnostics {
  double energy = 0.0;
  double enstrophy = 0.0;
  double div_residual = 0.0;
  std::vector<double> circulations;
  std::array<double, 2> harmonic{0.0, 0.0};
};

// Invariant snapshot of a state. Helicity pairs velocity with vorticity
// across dimensions and has no 2D meaning; requesting it here is an error
// rather than a silent zero.
inline FlowDiagnostics diagnostics(const OperatorSet& ops, const LerayContext& lc,
                                   const FlowState& state, bool want_helicity = false) {
  if (want_helicity) throw std::logic_error("helicity is defined on 3D meshes only");
  FlowDiagnostics d;
  d.energy = 0.5 * ops.inner1(state.v, state.v);
  const VectorXd w = ops.curl(state.v);
  d.enstrophy = ops.inner2(w, w);
  d.div_residual = ops.divergence(state.v).lpNorm<Eigen::Infinity>();
  d.circulations.reserve(state.loops.size());
  for (const VectorXd& loop : state.loops) d.circulations.push_back(circulation(state.v, loop));
  if (lc.closed) d.harmonic = harmonic_coefficients(lc, state.v);
  return d;
}

struct FlowRunConfig {
  double T = 1.0;
  double dt = 1e-2;
  int cadence = 1;      // diagnostics every this many steps
  ViscositySpec visc;
  double tol = 1e-13;
  int budget = 50;
  int max_halvings = 5;
};

struct FlowSeries {
  std::vector<double> t;
  std::vector<FlowDiagnostics> samples;
  FlowState final_state;
};

namespace detail {

inline FlowState advance_with_halving(const AdvectionContext& adv, const LerayContext& lc,
                                      const FlowRunConfig& cfg, const FlowState& state,
                                      double dt, int depth) {
  try {
    return step_implicit_midpoint(adv, lc, cfg.visc, state, dt, cfg.tol, cfg.budget);
  } catch (const StepRejected&) {
    if (depth >= cfg.max_halvings)
      throw std::runtime_error("step rejected " + std::to_string(depth) +
                               " times, aborting at t = " + std::to_string(state.t));
    FlowState half = advance_with_halving(adv, lc, cfg, state, 0.5 * dt, depth + 1);
    return advance_with_halving(adv, lc, cfg, half, 0.5 * dt, depth + 1);
  }
}

}  // namespace detail

// Fixed-cadence trajectory run. Steps are uniform except when a rejected
// step is split in two, which keeps the sample grid intact.
inline FlowSeries run_flow(const AdvectionContext& adv, const LerayContext& lc,
                           const FlowRunConfig& cfg, FlowState state) {
  if (cfg.T < 0.0 || cfg.dt <= 0.0 || cfg.cadence < 1)
    throw std::invalid_argument("invalid run configuration");
  const long nsteps = std::lround(cfg.T / cfg.dt);
  FlowSeries series;
  series.t.push_back(state.t);
  series.samples.push_back(diagnostics(*adv.ops, lc, state));
  for (long i = 0; i < nsteps; ++i) {
    state = detail::advance_with_halving(adv, lc, cfg, state, cfg.dt, 0);
    if ((i + 1) % cfg.cadence == 0 || i + 1 == nsteps) {
      series.t.push_back(state.t);
      series.samples.push_back(diagnostics(*adv.ops, lc, state));
    }
  }
  series.final_state = std::move(state);
  return series;
}

}  // namespace dvdec

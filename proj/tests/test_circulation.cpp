#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <stdexcept>

#include "dvdec/advection.hpp"
#include "dvdec/builders.hpp"
#include "dvdec/circulation.hpp"
#include "dvdec/derham.hpp"
#include "dvdec/leray.hpp"
#include "dvdec/operators.hpp"
#include "dvdec/reconstruction.hpp"
#include "support.hpp"

using namespace dvdec;
using dvdec::testing::random_vector;

namespace {

struct Stack {
  TriMesh mesh;
  OperatorSet ops;
  ReconContext recon;
  AdvectionContext adv;
  LerayContext lc;

  explicit Stack(TriMesh m)
      : mesh(std::move(m)),
        ops(assemble_operators(mesh)),
        recon(make_recon_context(mesh, ops)),
        adv(make_advection_context(mesh, ops, recon)),
        lc(make_leray_context(mesh, ops)) {}
};

}  // namespace

TEST_CASE("chain transport is the adjoint of the linearised Lie derivative") {
  int seed = 4000;
  for (const char* family : {"equilateral", "perturbed"}) {
    const Stack s(build_torus_mesh(8, family, family[0] == 'p' ? 0.2 : 0.0, 3));
    const TriMesh& m = s.mesh;
    for (int trial = 0; trial < 25; ++trial) {
      const VectorXd v = leray_project(s.lc, random_vector(m.ne(), ++seed));
      const ChainTransport ct = make_chain_transport(s.adv, s.lc, v);
      const VectorXd alpha = random_vector(m.ne(), ++seed);
      const VectorXd gamma = random_vector(m.ne(), ++seed);

      const SpMat C1 = contraction1_matrix(s.adv, v);
      const SpMat U = extrusion_matrix(s.adv, v);
      const VectorXd pa = leray_project(s.lc, alpha);
      const VectorXd lin =
          s.ops.Dt0 * (C1 * alpha) +
          0.5 * (U * (s.ops.Dt1 * alpha) - s.ops.Dt1.transpose() * (U.transpose() * pa))
                    .cwiseQuotient(s.ops.m1);

      const double lhs = lin.dot(gamma);
      const double rhs = alpha.dot(chain_lie(ct, gamma));
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * (std::fabs(lhs) + std::fabs(rhs)));
    }
  }
}

TEST_CASE("chain transport commutes with the boundary and preserves cycles") {
  int seed = 4600;
  for (const char* family : {"equilateral", "perturbed"}) {
    const Stack s(build_torus_mesh(8, family, family[0] == 'p' ? 0.15 : 0.0, 5));
    const TriMesh& m = s.mesh;
    for (int trial = 0; trial < 25; ++trial) {
      const VectorXd v = leray_project(s.lc, random_vector(m.ne(), ++seed));
      const ChainTransport ct = make_chain_transport(s.adv, s.lc, v);

      const VectorXd chain = random_vector(m.ne(), ++seed);
      const VectorXd b1 = chain_boundary(m, chain_lie(ct, chain));
      const VectorXd b2 = chain_lie0(ct, chain_boundary(m, chain));
      const double scale = b2.lpNorm<Eigen::Infinity>();
      CHECK((b1 - b2).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);

      const VectorXd cycle = s.ops.Dt1.transpose() * random_vector(m.nv(), ++seed);
      REQUIRE(is_cycle(m, cycle, 1e-13));
      const VectorXd tc = chain_lie(ct, cycle);
      CHECK(chain_boundary(m, tc).lpNorm<Eigen::Infinity>() <=
            1e-12 * tc.lpNorm<Eigen::Infinity>());
    }
  }
}

TEST_CASE("instantaneous Kelvin identity on random cycles") {
  int seed = 5200;
  for (const char* family : {"equilateral", "perturbed"}) {
    const Stack s(build_torus_mesh(8, family, family[0] == 'p' ? 0.2 : 0.0, 7));
    const TriMesh& m = s.mesh;
    const VectorXd hx = homology_cycle(m, 0);
    const VectorXd hy = homology_cycle(m, 1);
    for (int trial = 0; trial < 25; ++trial) {
      const VectorXd v = leray_project(s.lc, random_vector(m.ne(), ++seed));
      const ChainTransport ct = make_chain_transport(s.adv, s.lc, v);
      const VectorXd f = -leray_project(s.lc, lamb(s.adv, v));

      VectorXd gamma = s.ops.Dt1.transpose() * random_vector(m.nv(), ++seed);
      if (trial % 3 == 1) gamma += hx - 2.0 * hy;
      if (trial % 3 == 2) gamma = hx + hy;

      const double dgamma = circulation(f, gamma);
      const double dv = circulation(v, chain_lie(ct, gamma));
      CHECK(std::fabs(dgamma + dv) <= 1e-11 * (std::fabs(dgamma) + std::fabs(dv)));
    }
  }
}

TEST_CASE("homology cycles wind once around the torus") {
  for (const char* family : {"equilateral", "perturbed"}) {
    for (int n : {8, 12}) {
      const TriMesh m = build_torus_mesh(n, family, family[0] == 'p' ? 0.25 : 0.0, 11);
      const VectorXd gx = homology_cycle(m, 0);
      const VectorXd gy = homology_cycle(m, 1);

      for (const VectorXd* g : {&gx, &gy}) {
        CHECK((*g - g->unaryExpr([](double x) { return std::round(x); }))
                  .lpNorm<Eigen::Infinity>() == 0.0);
        CHECK(chain_boundary(m, *g).lpNorm<Eigen::Infinity>() == 0.0);
      }

      // Pairing a constant-field interpolant with a cycle telescopes to the
      // lifted displacement of the walk, so it reads off the winding exactly.
      const VectorXd ex = derham_dual1(m, [](const Vec2&) { return Vec2(1.0, 0.0); });
      const VectorXd ey = derham_dual1(m, [](const Vec2&) { return Vec2(0.0, 1.0); });
      CHECK(circulation(ex, gx) == Catch::Approx(m.Lx).epsilon(1e-12));
      CHECK(circulation(ey, gy) == Catch::Approx(m.Ly).epsilon(1e-12));
      CHECK(std::fabs(circulation(ey, gx)) <= 1e-11);
      CHECK(std::fabs(circulation(ex, gy)) <= 1e-11);
    }
  }
}

TEST_CASE("zero velocity leaves loops stationary") {
  const Stack s(build_torus_mesh(8, "perturbed", 0.2, 13));
  const TriMesh& m = s.mesh;
  const ChainTransport ct = make_chain_transport(s.adv, s.lc, VectorXd::Zero(m.ne()));

  const VectorXd gamma = homology_cycle(m, 0);
  CHECK(chain_lie(ct, gamma).lpNorm<Eigen::Infinity>() == 0.0);

  const VectorXd moved = advect_loop(ct, gamma, 0.1);
  CHECK((moved - gamma).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(circulation(random_vector(m.ne(), 77), moved) ==
        circulation(random_vector(m.ne(), 77), gamma));
}

TEST_CASE("transport rejects invalid inputs") {
  const Stack s(build_torus_mesh(8, "equilateral", 0.0, 1));
  const VectorXd v = leray_project(s.lc, random_vector(s.mesh.ne(), 999));
  const ChainTransport ct = make_chain_transport(s.adv, s.lc, v);

  VectorXd not_cycle = VectorXd::Zero(s.mesh.ne());
  not_cycle[0] = 1.0;
  CHECK_THROWS_AS(advect_loop(ct, not_cycle, 0.01), std::invalid_argument);

  CHECK_THROWS_AS(homology_cycle(s.mesh, 2), std::invalid_argument);

  const TriMesh bounded = build_bounded_mesh(4, "equilateral");
  const OperatorSet bops = assemble_operators(bounded);
  const ReconContext brc = make_recon_context(bounded, bops);
  const AdvectionContext badv = make_advection_context(bounded, bops, brc);
  const LerayContext blc = make_leray_context(bounded, bops);
  CHECK_THROWS_AS(make_chain_transport(badv, blc, VectorXd::Zero(bounded.ne())),
                  std::logic_error);
  CHECK_THROWS_AS(homology_cycle(bounded, 0), std::logic_error);
}

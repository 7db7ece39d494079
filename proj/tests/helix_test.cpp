#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "support/reference.hpp"
#include "xyzness/errors.hpp"
#include "xyzness/helix.hpp"

using namespace xyzness;

namespace {
const Cplx kTau(0, 0.65);

ModelParams fig2_params() {
  // periodic ring, M = 60, eta = 4/M
  ModelParams p;
  p.u = Cplx(0, 0.15);
  p.eta = 4.0 / 60.0;
  p.tau = kTau;
  p.alpha_l = Cplx(0.095, 0.1);
  p.alpha_r = p.alpha_l + p.u;
  p.sites = 1;
  p.regime = Regime::CaseB;
  return p;
}

ModelParams fig3_params() {
  // periodic ring, M = 30, imaginary eta = 2 tau / M
  ModelParams p;
  p.u = 0.15;
  p.tau = Cplx(0, 0.325);
  p.eta = 2.0 * p.tau / 30.0;
  p.alpha_l = Cplx(0.095, 0.1);
  p.alpha_r = p.alpha_l + p.u;
  p.sites = 1;
  p.regime = Regime::CaseA;
  return p;
}
}  // namespace

TEST_CASE("psi_site basics") {
  const Vector2cd v = psi_site(0, 0, 0, 0.3, kTau);
  CHECK(std::abs(v(0)) < 1e-14);
  CHECK(std::abs(std::abs(v(1)) - 1.0) < 1e-14);

  // rays repeat with period 2/eta for real eta
  const Cplx alpha(0.17, 0.06);
  const double eta = 0.25;
  const Vector2cd a = psi_site(3, 0, alpha, eta, kTau);
  const Vector2cd b = psi_site(3 + 8, 0, alpha, eta, kTau);  // 8 = 2/eta
  CHECK(std::abs(std::abs(a.dot(b)) - 1.0) < 1e-13);

  // half-shift reflection: psi(alpha) and psi(1 - alpha) are the same vector
  const Vector2cd c = psi_site(0, 0, alpha, 0.0, kTau);
  const Vector2cd d = psi_site(0, 0, 1.0 - alpha, 0.0, kTau);
  CHECK((c - d).norm() < 1e-13);
}

TEST_CASE("helix_state staggering disappears at u = 0") {
  ModelParams p = fig2_params();
  p.u = 0;
  p.alpha_r = p.alpha_l;
  HelixSpec spec;
  spec.alpha_l = p.alpha_l;
  spec.sites = 5;
  spec.geometry = Geometry::OpenOdd;
  const VectorXcd even = helix_state(spec, p, StepParity::EvenTop);
  const VectorXcd odd = helix_state(spec, p, StepParity::OddTop);
  CHECK((even - odd).norm() < 1e-13);
}

TEST_CASE("helix_state rejects kinks and wrong lengths") {
  const ModelParams p = fig2_params();
  HelixSpec spec;
  spec.alpha_l = p.alpha_l;
  spec.sites = 5;
  spec.kinks = 1;
  CHECK_THROWS_AS(helix_state(spec, p), InvalidStateError);
  spec.kinks = 0;
  spec.sites = 4;
  CHECK_THROWS_AS(helix_state(spec, p), OddSizeError);
  spec.geometry = Geometry::PeriodicEven;
  spec.sites = 5;
  CHECK_THROWS_AS(helix_state(spec, p), OddSizeError);
}

TEST_CASE("magnetization of a basis product state") {
  VectorXcd state = VectorXcd::Zero(8);
  state(7) = 1.0;  // |111> = (0,1) on every site
  const MagnetizationProfile prof = magnetization_profile(state);
  for (const auto& xyz : prof.site_xyz) {
    CHECK(std::abs(xyz[0]) < 1e-14);
    CHECK(std::abs(xyz[1]) < 1e-14);
    CHECK(std::abs(xyz[2] + 1.0) < 1e-14);
  }
}

TEST_CASE("profiles from the state and from its density matrix agree") {
  const ModelParams p = fig2_params();
  HelixSpec spec;
  spec.alpha_l = p.alpha_l;
  spec.sites = 6;
  spec.geometry = Geometry::PeriodicEven;
  const VectorXcd psi = helix_state(spec, p);
  const MagnetizationProfile a = magnetization_profile(psi);
  const MagnetizationProfile b = magnetization_profile(MatrixXcd(psi * psi.adjoint()));
  const MagnetizationProfile c = helix_profile(spec, p);
  for (size_t i = 0; i < a.site_xyz.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(a.site_xyz[i][k] - b.site_xyz[i][k]) < 1e-12);
      CHECK(std::abs(a.site_xyz[i][k] - c.site_xyz[i][k]) < 1e-12);
    }
  }
}

TEST_CASE("figure-2 helix profile: full ring, Bloch norm, spatial period M/2") {
  const ModelParams p = fig2_params();
  HelixSpec spec;
  spec.alpha_l = p.alpha_l;
  spec.sites = 60;
  spec.geometry = Geometry::PeriodicEven;
  const MagnetizationProfile prof = helix_profile(spec, p);
  REQUIRE(prof.site_xyz.size() == 60);
  for (const auto& xyz : prof.site_xyz) {
    const double norm =
        std::sqrt(xyz[0] * xyz[0] + xyz[1] * xyz[1] + xyz[2] * xyz[2]);
    CHECK(std::abs(norm - 1.0) < 1e-10);  // pure product state
  }
  // lattice period 2/eta = M/2 = 30 sites, staggering-compatible (even offset)
  for (int n = 0; n < 30; ++n)
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(prof.site_xyz[size_t(n)][k] - prof.site_xyz[size_t(n + 30)][k]) < 1e-10);
}

TEST_CASE("figure-3 profile closes around the imaginary-eta ring") {
  const ModelParams p = fig3_params();
  HelixSpec spec;
  spec.alpha_l = p.alpha_l;
  spec.sites = 30;
  spec.geometry = Geometry::PeriodicEven;
  const MagnetizationProfile prof = helix_profile(spec, p);
  REQUIRE(prof.site_xyz.size() == 30);
  // period 2 tau / eta = M: site n and the wrapped site n + M coincide
  for (int n = 1; n <= 4; ++n) {
    const Vector2cd a = psi_site(n, 0, p.alpha_l, p.eta, p.tau);
    const Vector2cd b = psi_site(n + 30, 0, p.alpha_l, p.eta, p.tau);
    CHECK(std::abs(std::abs(a.dot(b)) - 1.0) < 1e-10);
  }
  // even/odd parity profiles differ by the u staggering swap
  const MagnetizationProfile odd = helix_profile(spec, p, StepParity::OddTop);
  bool differs = false;
  for (size_t i = 0; i < prof.site_xyz.size(); ++i)
    if (std::abs(prof.site_xyz[i][1] - odd.site_xyz[i][1]) > 1e-6) differs = true;
  CHECK(differs);
}

TEST_CASE("indicator values on closed-form states") {
  const Cplx alpha(0.165, 0.13);
  const Cplx eta = 0.3;
  // pure reference state: f1 = 0 and f2_plus = 0 by construction
  const Matrix2cd rho_plus = helix_site_density(alpha + eta, kTau);
  const Indicators ind = indicators(rho_plus, alpha, eta, kTau);
  CHECK(std::abs(ind.f1) < 1e-13);
  CHECK(ind.f2_plus < 1e-13);
  CHECK(ind.f2_minus > 1e-3);

  const Matrix2cd mixed = Matrix2cd::Identity() / 2.0;
  const Indicators im = indicators(mixed, alpha, eta, kTau);
  CHECK(std::abs(im.f1 - 0.5) < 1e-14);

  // squared variant vanishes at the same place and differs elsewhere
  const Indicators sq = indicators(mixed, alpha, eta, kTau, true);
  CHECK(sq.f2_plus < im.f2_plus);
  CHECK(sq.f2_plus > 0);
}

TEST_CASE("indicator ranges on random densities") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    Matrix2cd a;
    a << Cplx(g(rng), g(rng)), Cplx(g(rng), g(rng)), Cplx(g(rng), g(rng)), Cplx(g(rng), g(rng));
    Matrix2cd rho = a * a.adjoint();
    rho /= rho.trace();
    const Indicators ind = indicators(rho, Cplx(0.1, 0.05), 0.22, kTau);
    CHECK(ind.f1 >= -1e-12);
    CHECK(ind.f1 <= 0.5 + 1e-12);
    CHECK(ind.f2_plus >= 0);
    CHECK(ind.f2_plus <= 1 + 1e-12);
    CHECK(ind.f2_minus <= 1 + 1e-12);
  }
}

TEST_CASE("eta scan finds the pure-helix zeros at N = 5") {
  ModelParams base;
  base.u = Cplx(0, 0.185);
  base.tau = kTau;
  base.alpha_l = Cplx(0.165, 0.13);
  base.sites = 5;
  base.regime = Regime::CaseB;
  base.eta = 0.1;

  // (N+1) eta = 2 at eta = 1/3: exact zero; nearby points are not
  const std::vector<Cplx> etas = {Cplx(0.28), Cplx(1.0 / 3.0), Cplx(0.38)};
  const auto samples = eta_scan(base, etas, {});
  REQUIRE(samples.size() == 3);
  for (const auto& s : samples) CHECK(s.ok);
  CHECK(samples[1].f1 < 1e-10);
  CHECK(samples[1].f2_plus < 1e-10);
  CHECK(samples[0].f1 > 1e-4);
  CHECK(samples[2].f1 > 1e-4);
}

TEST_CASE("scan records per-point failures and continues") {
  ModelParams base;
  base.u = Cplx(0, 0.185);
  base.tau = kTau;
  base.alpha_l = 0.0;  // real axis: eta = 1/4 puts theta2bar(2 eta) at zero
  base.sites = 5;
  base.regime = Regime::CaseB;
  base.eta = 0.1;
  const std::vector<Cplx> etas = {Cplx(0.22), Cplx(0.25), Cplx(0.28)};
  const auto samples = eta_scan(base, etas, {});
  CHECK(samples[0].ok);
  CHECK(!samples[1].ok);
  CHECK(!samples[1].error.empty());
  CHECK(samples[2].ok);
}

TEST_CASE("scan engines agree where both run") {
  ModelParams base;
  base.u = Cplx(0, 0.185);
  base.tau = kTau;
  base.alpha_l = Cplx(0.165, 0.13);
  base.sites = 3;
  base.regime = Regime::CaseB;
  base.eta = 0.1;
  ScanOptions opt;
  opt.engine = NessEngine::Both;
  opt.oracle_every = 1;
  opt.oracle_tol = 1e-12;
  const std::vector<Cplx> etas = {Cplx(0.27), Cplx(0.41)};
  const auto samples = eta_scan(base, etas, opt);
  for (const auto& s : samples) {
    REQUIRE(s.ok);
    REQUIRE(s.oracle_distance.has_value());
    CHECK(*s.oracle_distance < 1e-8);
  }
}

TEST_CASE("deterministic multithreaded scan ordering") {
  ModelParams base;
  base.u = Cplx(0, 0.185);
  base.tau = kTau;
  base.alpha_l = Cplx(0.165, 0.13);
  base.sites = 3;
  base.regime = Regime::CaseB;
  base.eta = 0.1;
  std::vector<Cplx> etas;
  for (int i = 0; i < 12; ++i) etas.push_back(Cplx(0.15 + 0.02 * i));
  ScanOptions serial;
  ScanOptions parallel;
  parallel.threads = 4;
  const auto a = eta_scan(base, etas, serial);
  const auto b = eta_scan(base, etas, parallel);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].eta == b[i].eta);
    CHECK(a[i].f1 == b[i].f1);  // identical code path, identical doubles
    CHECK(a[i].f2_plus == b[i].f2_plus);
  }
}

TEST_CASE("periodic checks: stationarity and span report") {
  ModelParams p = fig2_params();
  p.eta = 0.5;  // closure: 4 * 1/2 = 2
  std::vector<Cplx> alphas;
  std::mt19937_64 rng(62);
  for (int i = 0; i < 8; ++i) alphas.push_back(testsupport::random_cplx(rng, 0.9, 0.25));
  const PeriodicReport rep = periodic_checks(p, 4, alphas);
  CHECK(rep.closure_ok);
  CHECK(rep.max_stationarity_residual < 1e-10);
  CHECK(rep.gram_rank_states == 8);  // 2M with both chiralities sampled
  CHECK(rep.gram_rank_projectors >= rep.gram_rank_states);
  CHECK(rep.conjectured_degeneracy == 8);
}

TEST_CASE("periodic checks: u = 0 ring and closure violations") {
  ModelParams p = fig2_params();
  p.u = 0;
  p.alpha_r = p.alpha_l;
  p.eta = 0.5;
  std::vector<Cplx> alphas = {Cplx(0.2, 0.1), Cplx(-0.3, 0.05)};
  const PeriodicReport rep = periodic_checks(p, 4, alphas);
  CHECK(rep.max_stationarity_residual < 1e-10);

  ModelParams bad = fig2_params();
  bad.eta = 0.21;
  CHECK_THROWS_AS(periodic_checks(bad, 4, alphas), ClosureViolatedError);
  CHECK_THROWS_AS(periodic_checks(fig2_params(), 5, alphas), OddSizeError);
}

TEST_CASE("periodic checks on the imaginary-eta closure") {
  ModelParams p = fig3_params();
  p.eta = 2.0 * p.tau / 4.0;  // M = 4 ring
  std::vector<Cplx> alphas = {Cplx(0.095, 0.1), Cplx(0.31, -0.07), Cplx(-0.22, 0.12)};
  const PeriodicReport rep = periodic_checks(p, 4, alphas);
  CHECK(rep.closure_ok);
  CHECK(rep.max_stationarity_residual < 1e-10);
}

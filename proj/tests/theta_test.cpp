#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/reference.hpp"
#include "xyzness/errors.hpp"
#include "xyzness/theta.hpp"

using namespace xyzness;

namespace {
const Cplx kTau(0, 0.65);
}

TEST_CASE("theta1 vanishes at the origin in both conventions") {
  CHECK(std::abs(theta(1, 0, Nome::bar(kTau))) < 1e-15);
  CHECK(std::abs(theta(1, 0, Nome::plain(kTau))) < 1e-15);
  CHECK(std::abs(theta(1, 0, Nome::plain(Cplx(0.1, 0.8)))) < 1e-15);
}

TEST_CASE("theta3 at tiny nome is 1 to the q-term") {
  // tau = 10i in the plain convention: |q| ~ 5e-28
  const Cplx v = theta(3, 0.37, Nome::plain(Cplx(0, 10)));
  CHECK(std::abs(v - Cplx(1)) < 1e-25);
}

TEST_CASE("frozen values from the extended-precision series oracle") {
  // theta4bar(0.25), tau = 0.65i
  CHECK(std::abs(theta(4, 0.25, Nome::bar(kTau)) - Cplx(0.9994329106703693)) < 1e-14);
  // complex arguments
  CHECK(std::abs(theta(1, Cplx(0.21, 0.17), Nome::bar(kTau)) -
                 Cplx(0.7952474296283168, 0.5500608213189183)) < 1e-13);
  CHECK(std::abs(theta(2, Cplx(-0.33, 0.08), Nome::bar(kTau)) -
                 Cplx(0.6042255990068519, 0.2629354672344442)) < 1e-13);
}

TEST_CASE("agreement with the 200-term reference across random arguments") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    const Cplx z = testsupport::random_cplx(rng);
    const int alpha = 1 + int(i % 4);
    const bool bar = (i % 2 == 0);
    const Cplx got = theta(alpha, z, bar ? Nome::bar(kTau) : Nome::plain(kTau));
    const Cplx want = testsupport::theta_ref(alpha, z, kTau, bar);
    CHECK(std::abs(got - want) < 1e-13 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("parity: theta1 odd, theta2..4 even") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Cplx z = testsupport::random_cplx(rng);
    for (const auto nome : {Nome::bar(kTau), Nome::plain(kTau)}) {
      CHECK(std::abs(theta(1, -z, nome) + theta(1, z, nome)) < 1e-13);
      for (int a = 2; a <= 4; ++a)
        CHECK(std::abs(theta(a, -z, nome) - theta(a, z, nome)) < 1e-13);
    }
  }
}

TEST_CASE("quasi-periodicity under z -> z + 1") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const Cplx z = testsupport::random_cplx(rng, 1.5, 0.3);
    const auto nome = Nome::bar(kTau);
    CHECK(std::abs(theta(1, z + 1.0, nome) + theta(1, z, nome)) < 1e-13);
    CHECK(std::abs(theta(4, z + 1.0, nome) - theta(4, z, nome)) < 1e-13);
  }
}

TEST_CASE("cross-nome consistency: bar at 2 tau equals plain at tau") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const Cplx z = testsupport::random_cplx(rng);
    for (int a = 1; a <= 4; ++a) {
      const Cplx lhs = theta(a, z, Nome::bar(2.0 * kTau));
      const Cplx rhs = theta(a, z, Nome::plain(kTau));
      CHECK(std::abs(lhs - rhs) < 1e-14 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("derivative matches a central finite difference") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 20; ++i) {
    const Cplx z = testsupport::random_cplx(rng);
    const double h = 1e-5;
    for (int a = 1; a <= 4; ++a) {
      const auto nome = Nome::bar(kTau);
      const Cplx fd = (theta(a, z + h, nome) - theta(a, z - h, nome)) / (2 * h);
      CHECK(std::abs(theta_deriv(a, z, nome) - fd) < 1e-6);
    }
  }
}

TEST_CASE("pair-sum identity at the origin and at random points") {
  const Cplx zero[2] = {0, 0};
  CHECK(theta_identity_residual(ThetaIdentity::PairSum, zero, kTau) < 1e-13);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Cplx args[2] = {testsupport::random_cplx(rng), testsupport::random_cplx(rng)};
    CHECK(theta_identity_residual(ThetaIdentity::PairSum, args, kTau) < 1e-12);
  }
}

TEST_CASE("pair-difference identity vanishes structurally at u = v") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    const Cplx u = testsupport::random_cplx(rng);
    const Cplx args[2] = {u, u};
    // antisymmetric LHS and a theta1(0) factor on the RHS: 0 == 0
    CHECK(theta_identity_residual(ThetaIdentity::PairDifference, args, kTau) < 1e-13);
  }
  for (int i = 0; i < 50; ++i) {
    const Cplx args[2] = {testsupport::random_cplx(rng), testsupport::random_cplx(rng)};
    CHECK(theta_identity_residual(ThetaIdentity::PairDifference, args, kTau) < 1e-12);
  }
}

TEST_CASE("quad-product identity at random 4-tuples") {
  std::mt19937_64 rng(13);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const Cplx args[4] = {testsupport::random_cplx(rng), testsupport::random_cplx(rng),
                          testsupport::random_cplx(rng), testsupport::random_cplx(rng)};
    worst = std::max(worst, theta_identity_residual(ThetaIdentity::QuadProduct, args, kTau));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("vertex identities at random arguments") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 25; ++i) {
    const Cplx x = testsupport::random_cplx(rng);
    const Cplx y = testsupport::random_cplx(rng);
    const Cplx u = testsupport::random_cplx(rng, 0.3, 0.15);
    const Cplx eta = testsupport::random_cplx(rng, 0.45, 0.15);
    const Cplx shift_args[3] = {x, u, eta};
    const Cplx exch_args[4] = {x, y, u, eta};
    for (const auto id : {ThetaIdentity::VertexPsiShiftPlus, ThetaIdentity::VertexPsiShiftMinus,
                          ThetaIdentity::VertexXiShiftPlus, ThetaIdentity::VertexXiShiftMinus})
      CHECK(theta_identity_residual(id, shift_args, kTau) < 1e-12);
    for (const auto id :
         {ThetaIdentity::VertexPsiExchangePlus, ThetaIdentity::VertexPsiExchangeMinus,
          ThetaIdentity::VertexXiExchangePlus, ThetaIdentity::VertexXiExchangeMinus})
      CHECK(theta_identity_residual(id, exch_args, kTau) < 1e-12);
  }
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(theta(1, 0.3, Nome::bar(Cplx(0.5, -0.1))), NonConvergentError);
  CHECK_THROWS_AS(theta(1, 0.3, Nome::bar(Cplx(0.5, 0.0))), NonConvergentError);
  CHECK_THROWS_AS(theta(3, Cplx(0, 900), Nome::bar(kTau)), OverflowError);
  const Cplx args[1] = {0};
  CHECK_THROWS_AS(theta_identity_residual(ThetaIdentity::PairSum, args, kTau),
                  UnknownIdentityError);
}

TEST_CASE("zero detection distinguishes lattice zeros from small values") {
  CHECK(theta_is_zero(1, 0, Nome::bar(kTau)));
  CHECK(theta_is_zero(1, 2, Nome::bar(kTau)));
  CHECK(theta_is_zero(2, 0.5, Nome::bar(kTau)));
  CHECK(!theta_is_zero(1, 0.01, Nome::bar(kTau)));
  CHECK(!theta_is_zero(4, 0.25, Nome::bar(kTau)));
}

#include "xyzness/channels.hpp"

#include <cmath>

#include "xyzness/errors.hpp"

namespace xyzness {
namespace {

struct BlochAngles {
  double theta;
  double phi;
};

// Global phase stripped; the channel is invariant under it.
BlochAngles bloch_angles(const Vector2cd& t) {
  BlochAngles b;
  b.theta = 2.0 * std::atan2(std::abs(t(1)), std::abs(t(0)));
  b.phi = std::arg(t(1)) - std::arg(t(0));
  return b;
}

}  // namespace

Vector2cd psi_vector(Cplx x, Cplx tau) {
  Vector2cd v;
  v << theta_plain(1, x, tau), theta_plain(4, x, tau);
  return v;
}

Eigen::RowVector2cd xi_covector(Cplx x, Cplx tau) {
  Eigen::RowVector2cd v;
  v << theta_plain(4, x, tau), -theta_plain(1, x, tau);
  return v;
}

Vector2cd boundary_state(Cplx alpha, Cplx tau) {
  const Vector2cd v = psi_vector(alpha, tau);
  const double n = v.norm();
  const double scale = std::max(theta_scaled(1, alpha, Nome::plain(tau)).scale,
                                theta_scaled(4, alpha, Nome::plain(tau)).scale);
  if (n < 1e-12 * scale)
    throw DegenerateStateError("boundary_state: both theta components vanish at this alpha");
  return v / n;
}

Matrix2cd reset_channel_map(Side side, const GateMatrix& gate, const Vector2cd& target,
                            const Matrix2cd& a) {
  const Matrix2cd proj = target * target.adjoint();
  const Matrix4cd big =
      side == Side::Left ? gate.m * kron(proj, a) * gate.m.adjoint()
                         : gate.m * kron(a, proj) * gate.m.adjoint();
  Matrix2cd out;
  if (side == Side::Left) {
    // trace over the first factor
    out(0, 0) = big(0, 0) + big(2, 2);
    out(0, 1) = big(0, 1) + big(2, 3);
    out(1, 0) = big(1, 0) + big(3, 2);
    out(1, 1) = big(1, 1) + big(3, 3);
  } else {
    // trace over the second factor
    out(0, 0) = big(0, 0) + big(1, 1);
    out(0, 1) = big(0, 2) + big(1, 3);
    out(1, 0) = big(2, 0) + big(3, 1);
    out(1, 1) = big(2, 2) + big(3, 3);
  }
  return out;
}

Matrix2cd reset_channel_direct(Side side, const GateMatrix& gate, const Vector2cd& target,
                               const Matrix2cd& rho) {
  if (!is_valid_density(rho))
    throw InvalidStateError("reset_channel_direct: input is not a valid density matrix");
  return reset_channel_map(side, gate, target, rho);
}

KrausPair kraus_pair(Side side, const ModelParams& p, const Vector2cd& target) {
  const auto [th, phi] = bloch_angles(target);
  const auto bar = [&](int a, Cplx z) { return theta_scaled(a, z, Nome::bar(p.tau)); };
  const ThetaValue b1e = bar(1, p.eta);
  const ThetaValue b1p = bar(1, p.eta + p.u);
  const ThetaValue b1m = bar(1, p.eta - p.u);
  if (std::abs(b1p.value) < 1e-12 * b1p.scale || std::abs(b1m.value) < 1e-12 * b1m.scale ||
      std::abs(b1e.value) < 1e-12 * b1e.scale)
    throw SingularParameterError("kraus_pair: theta1bar(eta±u) or theta1bar(eta) vanishes");
  const Cplx sqrt_y = std::sqrt(b1p.value * b1m.value / (b1e.value * b1e.value));

  const Matrix4cd ut = build_gate_tilde(p.u, p.eta, p.tau);
  const Cplx r1 = ut(0, 0), r2 = ut(1, 2), r3 = ut(1, 1), r4 = ut(0, 3);

  const double c2 = std::cos(th / 2) * std::cos(th / 2);
  const double s2 = std::sin(th / 2) * std::sin(th / 2);
  const Cplx em = std::exp(Cplx(0, -phi));
  const Cplx ep = std::exp(Cplx(0, phi));
  const double big_f = std::sin(th) / 2.0;

  const auto f = [&](Cplx x, Cplx y) { return x * c2 + y * s2; };
  const auto f_t = [&](Cplx x, Cplx y) { return x * em * c2 - y * ep * s2; };
  const auto g = [&](Cplx x, Cplx y) { return em * x + ep * y; };

  KrausPair k;
  k.side = side;
  k.k1 << f(r1, r3), g(r2, r4) * big_f, g(r4, r2) * big_f, f(r3, r1);
  k.k2 << (r3 - r1) * big_f, f_t(r2, r4), f_t(r4, r2), (r1 - r3) * big_f;
  k.k1 /= sqrt_y;
  k.k2 /= sqrt_y;
  return k;
}

Matrix2cd apply_kraus(const KrausPair& k, const Matrix2cd& a) {
  return k.k1 * a * k.k1.adjoint() + k.k2 * a * k.k2.adjoint();
}

}  // namespace xyzness

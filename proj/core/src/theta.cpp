#include "xyzness/theta.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace xyzness {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTermTol = 1e-18;   // relative to running max term
constexpr int kMaxTerms = 512;
constexpr double kEnvelopeLimit = 1e280;

struct SeriesOut {
  Cplx value;
  double scale;
};

Cplx effective_tau(const Nome& nome) {
  return nome.convention == NomeConvention::Single ? nome.tau : 2.0 * nome.tau;
}

void validate(int alpha, const Nome& nome) {
  if (alpha < 1 || alpha > 4) throw std::invalid_argument("theta: alpha must be in 1..4");
  if (!(nome.tau.imag() > 0.0))
    throw NonConvergentError("theta: Im(tau) must be positive for a convergent series");
}

// Quasi-period shift: all four functions are periodic in z with period 2.
Cplx reduce(Cplx z) {
  const double shift = 2.0 * std::round(z.real() / 2.0);
  return {z.real() - shift, z.imag()};
}

// vartheta_alpha(pi z, e^{i pi tau_eff}) plus the envelope of the largest term.
// `deriv` switches to the term-by-term z-derivative.
SeriesOut sum_series(int alpha, Cplx z, Cplx tau_eff, bool deriv) {
  z = reduce(z);
  const Cplx v = kPi * z;
  const double abs_im_v = std::abs(v.imag());
  const Cplx ipitau = Cplx(0, kPi) * tau_eff;
  const bool half_index = (alpha == 1 || alpha == 2);  // exponents (n+1/2)^2
  const bool alternating = (alpha == 1 || alpha == 4);

  Cplx sum = 0;
  double max_env = 0;
  // theta3/theta4 carry the constant term 1 (derivative 0).
  if (!half_index) {
    if (!deriv) sum = 1.0;
    max_env = 1.0;
  }
  const int n0 = half_index ? 0 : 1;
  for (int n = n0; n < n0 + kMaxTerms; ++n) {
    const double e = half_index ? (n + 0.5) * (n + 0.5) : double(n) * double(n);
    const double m = half_index ? 2 * n + 1 : 2 * n;
    const Cplx qpow = std::exp(ipitau * e);
    const double env = 2.0 * std::abs(qpow) * std::cosh(m * abs_im_v) * (deriv ? m * kPi : 1.0);
    if (env > kEnvelopeLimit)
      throw OverflowError(
          "theta: |Im z| too large for double range; reduce the imaginary part "
          "of the argument before evaluating");
    Cplx term;
    if (alpha == 1) {
      term = deriv ? qpow * std::cos(m * v) * (m * kPi) : qpow * std::sin(m * v);
    } else {  // 2, 3, 4 are cosine series
      term = deriv ? -qpow * std::sin(m * v) * (m * kPi) : qpow * std::cos(m * v);
    }
    if (alternating && (n % 2 != 0)) term = -term;
    sum += 2.0 * term;
    if (env > max_env) max_env = env;
    if (env < kTermTol * max_env) return {sum, max_env};
  }
  throw NonConvergentError("theta: series did not converge within the term cap");
}

std::array<Cplx, 2> psi_pair(Cplx x, Cplx tau) {
  return {theta_plain(1, x, tau), theta_plain(4, x, tau)};
}
std::array<Cplx, 2> xi_pair(Cplx x, Cplx tau) {
  return {theta_plain(4, x, tau), -theta_plain(1, x, tau)};
}

// Eight-vertex weights of the (unnormalized) gate, Boltzmann form.
std::array<Cplx, 4> vertex_weights(Cplx u, Cplx eta, Cplx tau) {
  const Cplx t40 = theta_plain(4, 0, tau);
  const Cplx t1e = theta_plain(1, eta, tau);
  const Cplx t4e = theta_plain(4, eta, tau);
  const Cplx r1 = theta_plain(4, u, tau) * theta_plain(1, u + eta, tau) / (t40 * t1e);
  const Cplx r2 = theta_plain(1, u, tau) * theta_plain(4, u + eta, tau) / (t40 * t1e);
  const Cplx r3 = theta_plain(4, u, tau) * theta_plain(4, u + eta, tau) / (t40 * t4e);
  const Cplx r4 = theta_plain(1, u, tau) * theta_plain(1, u + eta, tau) / (t40 * t4e);
  return {r1, r2, r3, r4};
}

// Apply the vertex matrix to a 2x2-factorized 4-vector (a (X) b), column side.
std::array<Cplx, 4> vertex_apply(const std::array<Cplx, 4>& r, const std::array<Cplx, 2>& a,
                                 const std::array<Cplx, 2>& b) {
  const std::array<Cplx, 4> in = {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
  return {r[0] * in[0] + r[3] * in[3], r[2] * in[1] + r[1] * in[2], r[1] * in[1] + r[2] * in[2],
          r[3] * in[0] + r[0] * in[3]};
}

// Row action (the matrix is symmetric, so it coincides with the column action).
std::array<Cplx, 4> vertex_apply_row(const std::array<Cplx, 4>& r, const std::array<Cplx, 2>& a,
                                     const std::array<Cplx, 2>& b) {
  return vertex_apply(r, a, b);
}

std::array<Cplx, 4> outer4(const std::array<Cplx, 2>& a, const std::array<Cplx, 2>& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

double vec_residual(const std::array<Cplx, 4>& lhs, const std::array<Cplx, 4>& rhs) {
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    const double d = std::abs(lhs[i] - rhs[i]) / (std::abs(lhs[i]) + std::abs(rhs[i]) + 1e-300);
    worst = std::max(worst, d);
  }
  return worst;
}

void need(std::span<const Cplx> args, size_t n, const char* id) {
  if (args.size() != n)
    throw UnknownIdentityError(std::string("theta identity ") + id + ": wrong argument count");
}

}  // namespace

Cplx theta(int alpha, Cplx z, const Nome& nome) {
  validate(alpha, nome);
  return sum_series(alpha, z, effective_tau(nome), false).value;
}

ThetaValue theta_scaled(int alpha, Cplx z, const Nome& nome) {
  validate(alpha, nome);
  const SeriesOut s = sum_series(alpha, z, effective_tau(nome), false);
  return {s.value, s.scale};
}

Cplx theta_deriv(int alpha, Cplx z, const Nome& nome) {
  validate(alpha, nome);
  return sum_series(alpha, z, effective_tau(nome), true).value;
}

bool theta_is_zero(int alpha, Cplx z, const Nome& nome, double rel_tol) {
  const ThetaValue t = theta_scaled(alpha, z, nome);
  return std::abs(t.value) < rel_tol * t.scale;
}

double theta_identity_residual(ThetaIdentity id, std::span<const Cplx> args, Cplx tau) {
  const auto tb = [&](int a, Cplx zz) { return theta_bar(a, zz, tau); };
  const auto tp = [&](int a, Cplx zz) { return theta_plain(a, zz, tau); };

  switch (id) {
    case ThetaIdentity::PairSum: {
      need(args, 2, "PairSum");
      const Cplx u = args[0], v = args[1];
      const Cplx lhs = tp(1, u) * tp(1, v) + tp(4, u) * tp(4, v);
      const Cplx rhs = tb(4, (u + v) / 2.0) * tb(3, (u - v) / 2.0);
      return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
    }
    case ThetaIdentity::PairDifference: {
      need(args, 2, "PairDifference");
      const Cplx u = args[0], v = args[1];
      const Cplx lhs = tp(1, u) * tp(4, v) - tp(1, v) * tp(4, u);
      const Cplx rhs = tb(2, (u + v) / 2.0) * tb(1, (u - v) / 2.0);
      return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
    }
    case ThetaIdentity::QuadProduct: {
      need(args, 4, "QuadProduct");
      const Cplx x = args[0], y = args[1], z = args[2], w = args[3];
      const Cplx t1 = tb(1, x) * tb(2, y) * tb(3, z) * tb(4, w);
      const Cplx t2 = tb(1, (x + y + z - w) / 2.0) * tb(2, (x + y - z + w) / 2.0) *
                      tb(3, (x - y + z + w) / 2.0) * tb(4, (y + z + w - x) / 2.0);
      const Cplx t3 = tb(1, (w + x - y - z) / 2.0) * tb(2, (w - x + y - z) / 2.0) *
                      tb(3, (w - x - y + z) / 2.0) * tb(4, (w + x + y + z) / 2.0);
      return std::abs(t1 - t2 - t3) / (std::abs(t1) + std::abs(t2) + std::abs(t3) + 1e-300);
    }
    case ThetaIdentity::VertexPsiShiftPlus:
    case ThetaIdentity::VertexPsiShiftMinus: {
      need(args, 3, "VertexPsiShift");
      const double s = (id == ThetaIdentity::VertexPsiShiftPlus) ? 1.0 : -1.0;
      const Cplx x = args[0], u = args[1], eta = args[2];
      const auto r = vertex_weights(u, eta, tau);
      const auto lhs = vertex_apply(r, psi_pair(x - s * u, tau), psi_pair(x + s * eta, tau));
      const Cplx c = tb(1, u + eta) / tb(1, eta);
      auto rhs = outer4(psi_pair(x, tau), psi_pair(x - s * u + s * eta, tau));
      for (auto& e : rhs) e *= c;
      return vec_residual(lhs, rhs);
    }
    case ThetaIdentity::VertexPsiExchangePlus:
    case ThetaIdentity::VertexPsiExchangeMinus: {
      need(args, 4, "VertexPsiExchange");
      const double s = (id == ThetaIdentity::VertexPsiExchangePlus) ? 1.0 : -1.0;
      const Cplx x = args[0], y = args[1], u = args[2], eta = args[3];
      const auto r = vertex_weights(u, eta, tau);
      const auto lhs = vertex_apply(r, psi_pair(x + s * eta, tau), psi_pair(y - s * u, tau));
      const Cplx mid = (x + y) / 2.0;
      const Cplx c1 = tb(2, mid - s * u) / tb(2, mid);
      const Cplx c2 = tb(1, u) * tb(2, mid + s * eta) / (tb(1, eta) * tb(2, mid));
      auto rhs = outer4(psi_pair(x + s * u + s * eta, tau), psi_pair(y, tau));
      const auto rhs2 = outer4(psi_pair(y - s * u - s * eta, tau), psi_pair(x, tau));
      for (int i = 0; i < 4; ++i) rhs[i] = c1 * rhs[i] + c2 * rhs2[i];
      return vec_residual(lhs, rhs);
    }
    case ThetaIdentity::VertexXiShiftPlus:
    case ThetaIdentity::VertexXiShiftMinus: {
      need(args, 3, "VertexXiShift");
      const double s = (id == ThetaIdentity::VertexXiShiftPlus) ? 1.0 : -1.0;
      const Cplx x = args[0], u = args[1], eta = args[2];
      const auto r = vertex_weights(u, eta, tau);
      const auto lhs = vertex_apply_row(r, xi_pair(x - s * u, tau), xi_pair(x + s * eta, tau));
      const Cplx c = tb(1, u + eta) / tb(1, eta);
      auto rhs = outer4(xi_pair(x, tau), xi_pair(x - s * u + s * eta, tau));
      for (auto& e : rhs) e *= c;
      return vec_residual(lhs, rhs);
    }
    case ThetaIdentity::VertexXiExchangePlus:
    case ThetaIdentity::VertexXiExchangeMinus: {
      need(args, 4, "VertexXiExchange");
      const double s = (id == ThetaIdentity::VertexXiExchangePlus) ? 1.0 : -1.0;
      const Cplx x = args[0], y = args[1], u = args[2], eta = args[3];
      const auto r = vertex_weights(u, eta, tau);
      const auto lhs = vertex_apply_row(r, xi_pair(x + s * eta, tau), xi_pair(y - s * u, tau));
      const Cplx mid = (x + y) / 2.0;
      const Cplx c1 = tb(2, mid - s * u) / tb(2, mid);
      const Cplx c2 = tb(1, u) * tb(2, mid + s * eta) / (tb(1, eta) * tb(2, mid));
      auto rhs = outer4(xi_pair(x + s * u + s * eta, tau), xi_pair(y, tau));
      const auto rhs2 = outer4(xi_pair(y - s * u - s * eta, tau), xi_pair(x, tau));
      for (int i = 0; i < 4; ++i) rhs[i] = c1 * rhs[i] + c2 * rhs2[i];
      return vec_residual(lhs, rhs);
    }
  }
  throw UnknownIdentityError("theta identity: unknown id");
}

}  // namespace xyzness

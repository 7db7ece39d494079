#include "xyzness/gate.hpp"

#include <cmath>

#include "xyzness/errors.hpp"

namespace xyzness {
namespace {

constexpr double kRealityTol = 1e-12;

void check_nonsingular(const ThetaValue& t, const char* what) {
  if (std::abs(t.value) < 1e-12 * std::max(t.scale, 1.0))
    throw SingularParameterError(std::string("gate: ") + what + " vanishes at these parameters");
}

}  // namespace

void ModelParams::validate() const {
  if (!(tau.imag() > 0.0)) throw WrongRegimeError("params: Im(tau) must be positive");
  if (sites < 1 || sites % 2 == 0) throw WrongRegimeError("params: N must be odd and positive");
  if (regime == Regime::CaseA) {
    if (std::abs(eta.real()) > kRealityTol || std::abs(u.imag()) > kRealityTol)
      throw WrongRegimeError("params: CaseA requires eta imaginary and u real");
  } else if (regime == Regime::CaseB) {
    if (std::abs(eta.imag()) > kRealityTol || std::abs(u.real()) > kRealityTol)
      throw WrongRegimeError("params: CaseB requires eta real and u imaginary");
  }
}

Matrix4cd build_gate_tilde(Cplx u, Cplx eta, Cplx tau) {
  const auto plain = [&](int a, Cplx z) { return theta_scaled(a, z, Nome::plain(tau)); };
  const ThetaValue t40 = plain(4, 0);
  const ThetaValue t1e = plain(1, eta);
  const ThetaValue t4e = plain(4, eta);
  check_nonsingular(t40, "theta4(0)");
  check_nonsingular(t1e, "theta1(eta)");
  check_nonsingular(t4e, "theta4(eta)");

  const Cplx r1 = plain(4, u).value * plain(1, u + eta).value / (t40.value * t1e.value);
  const Cplx r2 = plain(1, u).value * plain(4, u + eta).value / (t40.value * t1e.value);
  const Cplx r3 = plain(4, u).value * plain(4, u + eta).value / (t40.value * t4e.value);
  const Cplx r4 = plain(1, u).value * plain(1, u + eta).value / (t40.value * t4e.value);

  Matrix4cd m = Matrix4cd::Zero();
  m(0, 0) = r1;
  m(0, 3) = r4;
  m(1, 1) = r3;
  m(1, 2) = r2;
  m(2, 1) = r2;
  m(2, 2) = r3;
  m(3, 0) = r4;
  m(3, 3) = r1;
  return m;
}

GateMatrix build_gate(Cplx u, Cplx eta, Cplx tau) {
  const auto bar = [&](int a, Cplx z) { return theta_scaled(a, z, Nome::bar(tau)); };
  const ThetaValue b1e = bar(1, eta);
  const ThetaValue b1p = bar(1, eta + u);
  const ThetaValue b1m = bar(1, eta - u);
  check_nonsingular(b1p, "theta1bar(eta+u)");
  check_nonsingular(b1m, "theta1bar(eta-u)");
  check_nonsingular(b1e, "theta1bar(eta)");

  const Cplx pref = std::sqrt(b1e.value * b1e.value / (b1p.value * b1m.value));
  GateMatrix g;
  g.m = pref * build_gate_tilde(u, eta, tau);
  g.unitarity_residual = (g.m * g.m.adjoint() - Matrix4cd::Identity()).norm();
  return g;
}

GateMatrix build_gate(const ModelParams& p) {
  p.validate();
  return build_gate(p.u, p.eta, p.tau);
}

std::array<Cplx, 3> xyz_couplings(Cplx eta, Cplx tau) {
  const auto bar = [&](int a, Cplx z) { return theta_scaled(a, z, Nome::bar(tau)); };
  const ThetaValue b40 = bar(4, 0);
  const ThetaValue b30 = bar(3, 0);
  const ThetaValue b20 = bar(2, 0);
  check_nonsingular(b40, "theta4bar(0)");
  check_nonsingular(b30, "theta3bar(0)");
  check_nonsingular(b20, "theta2bar(0)");
  return {bar(4, eta).value / b40.value, bar(3, eta).value / b30.value,
          bar(2, eta).value / b20.value};
}

HamiltonianDensity hamiltonian_density(Cplx eta, Cplx tau) {
  const auto j = xyz_couplings(eta, tau);
  const Matrix2cd sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  HamiltonianDensity h;
  h.couplings = j;
  h.entries = j[0] * kron(sx, sx) + j[1] * kron(sy, sy) + j[2] * kron(sz, sz);
  return h;
}

}  // namespace xyzness

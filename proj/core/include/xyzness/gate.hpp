#pragma once

#include <array>

#include "xyzness/linalg.hpp"
#include "xyzness/theta.hpp"

namespace xyzness {

// Unitary regimes of the elliptic gate:
//   CaseA: eta purely imaginary, u real       ("easy axis")
//   CaseB: eta real, u purely imaginary       ("easy plane")
//   General: arbitrary complex parameters, unitarity not enforced.
enum class Regime { CaseA, CaseB, General };

struct ModelParams {
  Cplx u;
  Cplx eta;
  Cplx tau;
  Cplx alpha_l;
  Cplx alpha_r;
  int sites = 1;  // N, odd
  Regime regime = Regime::General;

  // Throws on violated invariants (Im tau, odd N, regime reality conditions).
  void validate() const;
  bool unitary_regime() const { return regime != Regime::General; }
};

struct GateMatrix {
  Matrix4cd m;
  double unitarity_residual = -1.0;  // ||U U^dag - I||_F, cached by build_gate
  bool is_unitary(double tol = 1e-12) const {
    return unitarity_residual >= 0 && unitarity_residual < tol;
  }
};

// Two-qubit gate without the square-root prefactor.
Matrix4cd build_gate_tilde(Cplx u, Cplx eta, Cplx tau);

// Full gate including the prefactor on the principal sqrt branch.
// Throws SingularParameterError when a denominator theta value vanishes.
GateMatrix build_gate(const ModelParams& p);
GateMatrix build_gate(Cplx u, Cplx eta, Cplx tau);

// (J1, J2, J3) coupling triple; real for tau imaginary and eta real or imaginary.
std::array<Cplx, 3> xyz_couplings(Cplx eta, Cplx tau);

struct HamiltonianDensity {
  Matrix4cd entries;             // sum_a J_a sigma^a (X) sigma^a
  std::array<Cplx, 3> couplings;
};

HamiltonianDensity hamiltonian_density(Cplx eta, Cplx tau);

}  // namespace xyzness

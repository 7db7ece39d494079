#pragma once

#include "xyzness/gate.hpp"
#include "xyzness/linalg.hpp"

namespace xyzness {

enum class Side { Left, Right };

// Unnormalized spinor (theta1(x), theta4(x)) and its orthogonal covector
// (theta4(x), -theta1(x)); the pairing <xi(x)|psi(x)> vanishes identically.
Vector2cd psi_vector(Cplx x, Cplx tau);
Eigen::RowVector2cd xi_covector(Cplx x, Cplx tau);

// Unit-norm reset target proportional to (theta1(alpha), theta4(alpha)).
// Throws DegenerateStateError if both components vanish.
Vector2cd boundary_state(Cplx alpha, Cplx tau);

// Linear action of the reset channel on an arbitrary 2x2 operator:
//   Left:  tr_1( U (|t><t| (X) A) U^dag )
//   Right: tr_2( U (A (X) |t><t|) U^dag )
Matrix2cd reset_channel_map(Side side, const GateMatrix& gate, const Vector2cd& target,
                            const Matrix2cd& a);

// Same action restricted to density matrices; throws InvalidStateError when
// rho is not Hermitian/unit-trace/PSD within tolerance.
Matrix2cd reset_channel_direct(Side side, const GateMatrix& gate, const Vector2cd& target,
                               const Matrix2cd& rho);

struct KrausPair {
  Matrix2cd k1, k2;
  Side side;

  // ||K1^dag K1 + K2^dag K2 - I||_F
  double completeness_residual() const {
    return (k1.adjoint() * k1 + k2.adjoint() * k2 - Matrix2cd::Identity()).norm();
  }
};

// Explicit two-element Kraus decomposition of the reset channel, built from
// the closed-form entries with Bloch angles read off the target state.
KrausPair kraus_pair(Side side, const ModelParams& p, const Vector2cd& target);

Matrix2cd apply_kraus(const KrausPair& k, const Matrix2cd& a);

}  // namespace xyzness

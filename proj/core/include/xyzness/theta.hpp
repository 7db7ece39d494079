#pragma once

#include <complex>
#include <span>

#include "xyzness/errors.hpp"

namespace xyzness {

using Cplx = std::complex<double>;

// Two nome conventions are used side by side throughout: the "bar" family
// with q = e^{i pi tau} and the plain family with q = e^{2 i pi tau}.
// All functions take the pi-scaled argument: theta(alpha, z) = vartheta_alpha(pi z, q).
enum class NomeConvention { Single, Double };

struct Nome {
  Cplx tau;
  NomeConvention convention = NomeConvention::Single;

  static Nome bar(Cplx tau) { return {tau, NomeConvention::Single}; }
  static Nome plain(Cplx tau) { return {tau, NomeConvention::Double}; }
};

struct ThetaValue {
  Cplx value;
  // Envelope of the largest series term; the natural magnitude against
  // which a value counts as an exact zero.
  double scale;
};

// vartheta_alpha(pi z, q), alpha in 1..4, by truncated series.
// Throws NonConvergentError if Im(tau) <= 0, OverflowError if |Im z| is too
// large for double range.
Cplx theta(int alpha, Cplx z, const Nome& nome);

ThetaValue theta_scaled(int alpha, Cplx z, const Nome& nome);

// d/dz of theta(alpha, z), term-by-term differentiated series.
Cplx theta_deriv(int alpha, Cplx z, const Nome& nome);

// True when theta(alpha, z) vanishes up to rel_tol of the series scale.
bool theta_is_zero(int alpha, Cplx z, const Nome& nome, double rel_tol = 1e-12);

// Shorthands matching the two families used in all model formulas.
inline Cplx theta_plain(int alpha, Cplx z, Cplx tau) { return theta(alpha, z, Nome::plain(tau)); }
inline Cplx theta_bar(int alpha, Cplx z, Cplx tau) { return theta(alpha, z, Nome::bar(tau)); }
inline Cplx theta_bar_deriv(int alpha, Cplx z, Cplx tau) { return theta_deriv(alpha, z, Nome::bar(tau)); }

// Checkable identities. Scalar ones relate products across the two nome
// families; the Vertex* ones are the eight-vertex weight actions on the
// (theta1, theta4) spinors, reduced to componentwise residuals.
//
// Argument layout per identity:
//   PairSum             (u, v)
//   PairDifference      (u, v)
//   QuadProduct         (x, y, z, w)
//   VertexPsiShift*     (x, u, eta)
//   VertexPsiExchange*  (x, y, u, eta)
//   VertexXiShift*      (x, u, eta)
//   VertexXiExchange*   (x, y, u, eta)
enum class ThetaIdentity {
  PairSum,
  QuadProduct,
  PairDifference,
  VertexPsiShiftPlus,
  VertexPsiShiftMinus,
  VertexPsiExchangePlus,
  VertexPsiExchangeMinus,
  VertexXiShiftPlus,
  VertexXiShiftMinus,
  VertexXiExchangePlus,
  VertexXiExchangeMinus,
};

// |LHS - RHS| / (|LHS| + |RHS| + eps), maximized over components for the
// vector identities. Throws UnknownIdentityError on a bad id/arity.
double theta_identity_residual(ThetaIdentity id, std::span<const Cplx> args, Cplx tau);

}  // namespace xyzness

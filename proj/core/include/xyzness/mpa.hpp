#pragma once

#include <map>
#include <span>
#include <utility>

#include "xyzness/gate.hpp"
#include "xyzness/linalg.hpp"

namespace xyzness {

// The four operator families entering the two-replica ansatz. Plus/Minus
// alternate along the chain; the *Conj kinds act on the second replica.
enum class LaxKind { Plus, Minus, PlusConj, MinusConj };

// Block (aux_row -> aux_col) of the banded Lax operator at `site`. Only
// aux_col == aux_row (diagonal) and aux_col == aux_row+1 (superdiagonal)
// are nonzero; anything else returns zero. Every nonzero block is a rank-1
// outer product of the theta spinors divided by theta2bar(a + m*eta),
// m = site - 2*aux_row. Throws PoleAtSiteError when that factor vanishes.
Matrix2cd lax_block(LaxKind kind, int site, int aux_row, int aux_col, const ModelParams& p,
                    Cplx a);

struct AuxVector {
  enum class Side { LeftBra, RightKet };
  // Generic: full product form. Cropped: some b_n vanished, support limited
  // to {0..n}^2. Renormalized: a b_n pole, only the dominant reachable
  // component kept (opposite-chirality resonance).
  enum class Structure { Generic, Cropped, Renormalized };

  Side side;
  Structure structure = Structure::Generic;
  int resonance_index = -1;  // index of the detected zero or pole of b
  int jmax = 0;
  std::map<std::pair<int, int>, Cplx> coeffs;

  Cplx at(int j, int jp) const {
    const auto it = coeffs.find({j, jp});
    return it == coeffs.end() ? Cplx(0) : it->second;
  }
  int max_support() const;
  bool single_component() const { return coeffs.size() == 1; }
};

// Four-component left boundary vector; requires CaseA or CaseB.
AuxVector left_vector(const ModelParams& p);

// Truncated right boundary vector r_{j,j'} = C_{j,j'} prod b_k prod b*_k',
// with zero/pole detection on the b_n factors. jmax should be >= N+2.
AuxVector right_vector(const ModelParams& p, int jmax);

enum class StepParity { EvenTop, OddTop };

struct MpaNess {
  MatrixXcd rho;      // trace-normalized
  Cplx raw_trace;     // pre-normalization trace
  StepParity parity;
  double hermiticity_residual = 0.0;
};

// Contract the two-replica MPA left-to-right into the exact NESS. EvenTop
// starts the alternation with a Plus operator (the even-step fixed point),
// OddTop with Minus.
MpaNess contract_ness(const ModelParams& p, StepParity parity = StepParity::EvenTop);

struct RllReport {
  double base_residual = 0.0;       // the three block identities
  double conjugate_residual = 0.0;  // their conjugated versions
  // Largest residual that is expected to vanish in p.regime. The conjugated
  // set holds on the unitary manifold only, so General-regime reports use
  // just the base set.
  double max_residual = 0.0;
};

// Numerical check of the intertwining identities at the sampled m values.
RllReport verify_rll(const ModelParams& p, std::span<const int> m_values);

// Componentwise residual of the left/right stationarity conditions for the
// constructed boundary vectors; both should vanish in valid regimes.
double left_boundary_residual(const ModelParams& p);
double right_boundary_residual(const ModelParams& p, int jmax);

}  // namespace xyzness

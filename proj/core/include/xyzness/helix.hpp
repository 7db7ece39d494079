#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xyzness/circuit.hpp"
#include "xyzness/gate.hpp"
#include "xyzness/linalg.hpp"
#include "xyzness/mpa.hpp"

namespace xyzness {

enum class Chirality { Plus, Minus };
enum class Geometry { OpenOdd, PeriodicEven };

struct HelixSpec {
  Cplx alpha_l;
  Chirality chirality = Chirality::Plus;
  int kinks = 0;
  int sites = 1;  // N (odd, open) or M (even, periodic)
  Geometry geometry = Geometry::OpenOdd;
};

// Normalized qubit state (theta1, theta4) at argument alpha_l + n*eta + shift.
Vector2cd psi_site(int n, Cplx shift, Cplx alpha_l, Cplx eta, Cplx tau);

// Product state of the pure helix (kinks must be 0). EvenTop places the +-u
// increment on even sites, OddTop on odd sites.
VectorXcd helix_state(const HelixSpec& spec, const ModelParams& p,
                      StepParity parity = StepParity::EvenTop);

struct MagnetizationProfile {
  std::vector<std::array<double, 3>> site_xyz;  // <sigma^x>, <sigma^y>, <sigma^z> per site
  StepParity parity = StepParity::EvenTop;
};

MagnetizationProfile magnetization_profile(const VectorXcd& state);
MagnetizationProfile magnetization_profile(const MatrixXcd& rho);

// Analytic per-site profile of a pure helix; works for any chain length
// since no 2^M object is formed.
MagnetizationProfile helix_profile(const HelixSpec& spec, const ModelParams& p,
                                   StepParity parity = StepParity::EvenTop);

struct Indicators {
  double f1;        // 1 - tr(rho1^2)
  double f2_plus;   // trace distance to the plus-helix site-1 state
  double f2_minus;  // trace distance to the minus-helix site-1 state
};

// Helix indicators of a single-qubit state. `squared` switches f2 to the
// squared-eigenvalue variant; both vanish together for 2x2 differences.
Indicators indicators(const Matrix2cd& rho1, Cplx alpha_l, Cplx eta, Cplx tau,
                      bool squared = false);

// Reference single-site helix state rho(x).
Matrix2cd helix_site_density(Cplx x, Cplx tau);

enum class NessEngine { Mpa, Oracle, Both };

struct ScanOptions {
  NessEngine engine = NessEngine::Mpa;
  int oracle_every = 8;    // with engine Both, cross-check every k-th point
  double oracle_tol = 1e-12;
  int oracle_max_iter = 200000;
  int threads = 1;
  bool squared_f2 = false;
};

struct IndicatorSample {
  Cplx eta;
  double f1 = 0, f2_plus = 0, f2_minus = 0;
  bool ok = false;
  std::string error;                      // per-point failure, scan continues
  std::optional<double> oracle_distance;  // MPA-vs-oracle cross-check when run
};

// NESS indicators across a grid of anisotropies at fixed resets
// (alpha_r = alpha_l + u). Points are independent; output order follows the
// grid.
std::vector<IndicatorSample> eta_scan(const ModelParams& base, const std::vector<Cplx>& etas,
                                      const ScanOptions& opt = {});

struct PeriodicReport {
  int ring_sites = 0;
  bool closure_ok = false;
  double max_stationarity_residual = 0.0;  // over sampled alphas, both chiralities
  std::vector<double> residuals;
  int gram_rank_states = 0;      // rank of the sampled helix state family
  int gram_rank_projectors = 0;  // rank of the vectorized projector family
  int conjectured_degeneracy = 0;  // 2M, reported for comparison only
};

// Stationarity and span checks for the coherent periodic ring. Requires the
// closure condition eta*M = 0 mod 2 (real eta) or mod 2*tau (imaginary eta).
PeriodicReport periodic_checks(const ModelParams& p, int ring_sites,
                               const std::vector<Cplx>& alphas);

}  // namespace xyzness

#pragma once

#include <vector>

#include "xyzness/channels.hpp"
#include "xyzness/gate.hpp"
#include "xyzness/linalg.hpp"

namespace xyzness {

// Dense density-matrix propagation of the open brickwork channel on N
// (odd) interior qubits. Gates are applied in place on index pairs; the
// full 4^N x 4^N superoperator is never formed.
class BrickworkEngine {
 public:
  explicit BrickworkEngine(const ModelParams& p);

  // Gate layer on (1,2),(3,4),... plus the right reset on qubit N.
  void even_step(MatrixXcd& rho) const;
  // Left reset on qubit 1 plus gate layer on (2,3),(4,5),...
  void odd_step(MatrixXcd& rho) const;
  void full_step(MatrixXcd& rho) const {
    even_step(rho);
    odd_step(rho);
  }

  int sites() const { return n_; }
  const GateMatrix& gate() const { return gate_; }
  const KrausPair& left_kraus() const { return kl_; }
  const KrausPair& right_kraus() const { return kr_; }

 private:
  int n_;
  GateMatrix gate_;
  KrausPair kl_, kr_;
};

MatrixXcd apply_even_step(const MatrixXcd& rho, const ModelParams& p);
MatrixXcd apply_odd_step(const MatrixXcd& rho, const ModelParams& p);

MatrixXcd maximally_mixed(int n_sites);

struct NessResult {
  MatrixXcd rho;
  int iterations = 0;
  double residual = 0.0;          // trace distance between the final iterates
  bool converged = false;
  bool unique_fixed_point = true; // cleared when the map looks degenerate (u ~ 0)
};

// Plain fixed-point iteration of M_o . M_e from the maximally mixed state.
// Returns the best iterate with converged=false instead of throwing.
NessResult find_ness(const ModelParams& p, double tol = 1e-12, int max_iter = 20000);

// The odd-step flavor rho' = M_e(rho) of a converged even-step NESS.
MatrixXcd odd_flavor(const MatrixXcd& rho_even, const ModelParams& p);

// Independent oracle for N=1: eigenvector of the 4x4 superoperator of
// K_L . K_R at eigenvalue 1.
Matrix2cd ness_n1_superoperator(const ModelParams& p);

// Coherent space-periodic circuit of even size M: even gate layer on
// (1,2)...(M-1,M), odd layer on (2,3)...(M-2,M-1) plus the wraparound (M,1).
enum class PeriodicLayer { Even, Odd, Both };
MatrixXcd periodic_step(const MatrixXcd& rho, const ModelParams& p, int m_sites,
                        PeriodicLayer layer = PeriodicLayer::Both);

// In-place primitives shared with the periodic circuit; exposed for tests.
void apply_two_site_gate(MatrixXcd& rho, const Matrix4cd& g, int site, int n_sites);
void apply_two_site_gate_pair(MatrixXcd& rho, const Matrix4cd& g, int site_a, int site_b,
                              int n_sites);
void apply_single_site_kraus(MatrixXcd& rho, const KrausPair& k, int site, int n_sites);

}  // namespace xyzness

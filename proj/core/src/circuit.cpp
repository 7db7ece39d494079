#include "xyzness/circuit.hpp"

#include <cmath>

#include "xyzness/errors.hpp"

namespace xyzness {
namespace {

Eigen::Index dim_of(int n_sites) { return Eigen::Index(1) << n_sites; }

// Row mix over the pair index at `site` (gate acting from the left).
void gate_rows(MatrixXcd& rho, MatrixXcd& scratch, const Matrix4cd& g, int site, int n_sites) {
  const Eigen::Index pre = Eigen::Index(1) << (site - 1);
  const Eigen::Index post = Eigen::Index(1) << (n_sites - site - 1);
  for (Eigen::Index p = 0; p < pre; ++p) {
    const Eigen::Index base = p * 4 * post;
    auto blk = [&](MatrixXcd& m, int k) { return m.middleRows(base + k * post, post); };
    for (int k = 0; k < 4; ++k) blk(scratch, k) = blk(rho, k);
    for (int kp = 0; kp < 4; ++kp) {
      blk(rho, kp) = g(kp, 0) * blk(scratch, 0);
      for (int k = 1; k < 4; ++k) blk(rho, kp) += g(kp, k) * blk(scratch, k);
    }
  }
}

// Column mix: rho <- rho * g^dag over the pair index at `site`.
void gate_cols(MatrixXcd& rho, MatrixXcd& scratch, const Matrix4cd& g, int site, int n_sites) {
  const Eigen::Index pre = Eigen::Index(1) << (site - 1);
  const Eigen::Index post = Eigen::Index(1) << (n_sites - site - 1);
  for (Eigen::Index p = 0; p < pre; ++p) {
    const Eigen::Index base = p * 4 * post;
    auto blk = [&](MatrixXcd& m, int k) { return m.middleCols(base + k * post, post); };
    for (int k = 0; k < 4; ++k) blk(scratch, k) = blk(rho, k);
    for (int kp = 0; kp < 4; ++kp) {
      blk(rho, kp) = std::conj(g(kp, 0)) * blk(scratch, 0);
      for (int k = 1; k < 4; ++k) blk(rho, kp) += std::conj(g(kp, k)) * blk(scratch, k);
    }
  }
}

void single_rows(const MatrixXcd& in, MatrixXcd& out, const Matrix2cd& k, int site, int n_sites) {
  const Eigen::Index pre = Eigen::Index(1) << (site - 1);
  const Eigen::Index post = Eigen::Index(1) << (n_sites - site);
  for (Eigen::Index p = 0; p < pre; ++p) {
    const Eigen::Index base = p * 2 * post;
    out.middleRows(base, post) =
        k(0, 0) * in.middleRows(base, post) + k(0, 1) * in.middleRows(base + post, post);
    out.middleRows(base + post, post) =
        k(1, 0) * in.middleRows(base, post) + k(1, 1) * in.middleRows(base + post, post);
  }
}

void single_cols(const MatrixXcd& in, MatrixXcd& out, const Matrix2cd& k, int site, int n_sites) {
  const Eigen::Index pre = Eigen::Index(1) << (site - 1);
  const Eigen::Index post = Eigen::Index(1) << (n_sites - site);
  for (Eigen::Index p = 0; p < pre; ++p) {
    const Eigen::Index base = p * 2 * post;
    out.middleCols(base, post) = std::conj(k(0, 0)) * in.middleCols(base, post) +
                                 std::conj(k(0, 1)) * in.middleCols(base + post, post);
    out.middleCols(base + post, post) = std::conj(k(1, 0)) * in.middleCols(base, post) +
                                        std::conj(k(1, 1)) * in.middleCols(base + post, post);
  }
}

}  // namespace

void apply_two_site_gate(MatrixXcd& rho, const Matrix4cd& g, int site, int n_sites) {
  if (rho.rows() != dim_of(n_sites) || rho.cols() != dim_of(n_sites))
    throw DimensionMismatchError("apply_two_site_gate: state dimension != 2^N");
  MatrixXcd scratch(rho.rows(), rho.cols());
  gate_rows(rho, scratch, g, site, n_sites);
  gate_cols(rho, scratch, g, site, n_sites);
}

void apply_two_site_gate_pair(MatrixXcd& rho, const Matrix4cd& g, int site_a, int site_b,
                              int n_sites) {
  const Eigen::Index d = dim_of(n_sites);
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionMismatchError("apply_two_site_gate_pair: state dimension != 2^N");
  const Eigen::Index bit_a = Eigen::Index(1) << (n_sites - site_a);
  const Eigen::Index bit_b = Eigen::Index(1) << (n_sites - site_b);

  std::vector<std::array<Eigen::Index, 4>> groups;
  groups.reserve(size_t(d / 4));
  for (Eigen::Index r = 0; r < d; ++r) {
    if ((r & bit_a) || (r & bit_b)) continue;
    groups.push_back({r, r + bit_b, r + bit_a, r + bit_a + bit_b});
  }

  Eigen::Matrix<Cplx, 4, Eigen::Dynamic> tmp(4, d);
  for (const auto& idx : groups) {  // rows
    for (int k = 0; k < 4; ++k) tmp.row(k) = rho.row(idx[k]);
    for (int kp = 0; kp < 4; ++kp) {
      rho.row(idx[kp]) = g(kp, 0) * tmp.row(0) + g(kp, 1) * tmp.row(1) + g(kp, 2) * tmp.row(2) +
                         g(kp, 3) * tmp.row(3);
    }
  }
  Eigen::Matrix<Cplx, Eigen::Dynamic, 4> tmc(d, 4);
  for (const auto& idx : groups) {  // columns
    for (int k = 0; k < 4; ++k) tmc.col(k) = rho.col(idx[k]);
    for (int kp = 0; kp < 4; ++kp) {
      rho.col(idx[kp]) = std::conj(g(kp, 0)) * tmc.col(0) + std::conj(g(kp, 1)) * tmc.col(1) +
                         std::conj(g(kp, 2)) * tmc.col(2) + std::conj(g(kp, 3)) * tmc.col(3);
    }
  }
}

void apply_single_site_kraus(MatrixXcd& rho, const KrausPair& k, int site, int n_sites) {
  if (rho.rows() != dim_of(n_sites) || rho.cols() != dim_of(n_sites))
    throw DimensionMismatchError("apply_single_site_kraus: state dimension != 2^N");
  MatrixXcd t(rho.rows(), rho.cols());
  MatrixXcd acc(rho.rows(), rho.cols());
  single_rows(rho, t, k.k1, site, n_sites);
  single_cols(t, acc, k.k1, site, n_sites);
  single_rows(rho, t, k.k2, site, n_sites);
  MatrixXcd t2(rho.rows(), rho.cols());
  single_cols(t, t2, k.k2, site, n_sites);
  rho = acc + t2;
}

BrickworkEngine::BrickworkEngine(const ModelParams& p)
    : n_(p.sites),
      gate_(build_gate(p)),
      kl_(kraus_pair(Side::Left, p, boundary_state(p.alpha_l, p.tau))),
      kr_(kraus_pair(Side::Right, p, boundary_state(p.alpha_r, p.tau))) {}

void BrickworkEngine::even_step(MatrixXcd& rho) const {
  MatrixXcd scratch(rho.rows(), rho.cols());
  for (int i = 1; i + 1 <= n_ - 1; i += 2) {
    gate_rows(rho, scratch, gate_.m, i, n_);
    gate_cols(rho, scratch, gate_.m, i, n_);
  }
  apply_single_site_kraus(rho, kr_, n_, n_);
}

void BrickworkEngine::odd_step(MatrixXcd& rho) const {
  apply_single_site_kraus(rho, kl_, 1, n_);
  MatrixXcd scratch(rho.rows(), rho.cols());
  for (int i = 2; i + 1 <= n_; i += 2) {
    gate_rows(rho, scratch, gate_.m, i, n_);
    gate_cols(rho, scratch, gate_.m, i, n_);
  }
}

MatrixXcd apply_even_step(const MatrixXcd& rho, const ModelParams& p) {
  BrickworkEngine eng(p);
  MatrixXcd out = rho;
  eng.even_step(out);
  return out;
}

MatrixXcd apply_odd_step(const MatrixXcd& rho, const ModelParams& p) {
  BrickworkEngine eng(p);
  MatrixXcd out = rho;
  eng.odd_step(out);
  return out;
}

MatrixXcd maximally_mixed(int n_sites) {
  const Eigen::Index d = dim_of(n_sites);
  return MatrixXcd::Identity(d, d) / double(d);
}

NessResult find_ness(const ModelParams& p, double tol, int max_iter) {
  p.validate();
  if (!p.unitary_regime())
    throw WrongRegimeError("find_ness: requires a unitary regime (CaseA or CaseB)");
  if (tol <= 0) throw std::invalid_argument("find_ness: tol must be positive");

  BrickworkEngine eng(p);
  const Eigen::Index d = dim_of(p.sites);
  const double dist_factor = 0.5 * std::sqrt(double(d));

  NessResult res;
  res.rho = maximally_mixed(p.sites);
  MatrixXcd prev;
  for (int it = 1; it <= max_iter; ++it) {
    prev = res.rho;
    eng.full_step(res.rho);
    // 0.5*sqrt(d)*||.||_F bounds the trace distance from above.
    const double bound = dist_factor * (res.rho - prev).norm();
    res.iterations = it;
    if (it == 1 && bound < tol) {
      // The map did not move the maximally mixed state: the fixed point
      // cannot be certified unique (u = 0 and other degenerate parameters).
      res.residual = trace_distance(res.rho, prev);
      res.unique_fixed_point = false;
      res.converged = false;
      return res;
    }
    if (bound < tol) {
      res.residual = trace_distance(res.rho, prev);
      res.converged = true;
      return res;
    }
    res.residual = bound;
  }
  res.converged = false;
  return res;
}

MatrixXcd odd_flavor(const MatrixXcd& rho_even, const ModelParams& p) {
  return apply_even_step(rho_even, p);
}

Matrix2cd ness_n1_superoperator(const ModelParams& p) {
  const KrausPair kl = kraus_pair(Side::Left, p, boundary_state(p.alpha_l, p.tau));
  const KrausPair kr = kraus_pair(Side::Right, p, boundary_state(p.alpha_r, p.tau));
  const auto super = [](const KrausPair& k) {
    Matrix4cd s = kron(k.k1, k.k1.conjugate());
    s += kron(k.k2, k.k2.conjugate());
    return s;
  };
  const Matrix4cd s = super(kl) * super(kr);
  Eigen::ComplexEigenSolver<Matrix4cd> es(s);
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(es.eigenvalues()(i) - Cplx(1.0)) < std::abs(es.eigenvalues()(best) - Cplx(1.0)))
      best = i;
  Eigen::Vector4cd v = es.eigenvectors().col(best);
  Matrix2cd rho;
  rho << v(0), v(1), v(2), v(3);
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return rho;
}

MatrixXcd periodic_step(const MatrixXcd& rho, const ModelParams& p, int m_sites,
                        PeriodicLayer layer) {
  if (m_sites < 2 || m_sites % 2 != 0)
    throw OddSizeError("periodic_step: ring size must be even");
  const GateMatrix g = build_gate(p.u, p.eta, p.tau);
  MatrixXcd out = rho;
  if (layer == PeriodicLayer::Even || layer == PeriodicLayer::Both) {
    for (int i = 1; i + 1 <= m_sites; i += 2) apply_two_site_gate(out, g.m, i, m_sites);
  }
  if (layer == PeriodicLayer::Odd || layer == PeriodicLayer::Both) {
    for (int i = 2; i + 1 <= m_sites - 1; i += 2) apply_two_site_gate(out, g.m, i, m_sites);
    apply_two_site_gate_pair(out, g.m, m_sites, 1, m_sites);
  }
  return out;
}

}  // namespace xyzness

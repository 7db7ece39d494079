#include "xyzness/helix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "xyzness/channels.hpp"
#include "xyzness/errors.hpp"

namespace xyzness {
namespace {

double modular_distance(double x, double period) {
  const double r = x - period * std::round(x / period);
  return std::abs(r);
}

// eta*M = 0 mod 2 (eta real) or mod 2 tau (eta imaginary), tolerance 1e-9.
bool closure_holds(Cplx eta, Cplx tau, int m_sites) {
  const Cplx q = eta * double(m_sites);
  if (std::abs(eta.imag()) < 1e-12) return modular_distance(q.real(), 2.0) < 1e-9;
  if (std::abs(eta.real()) < 1e-12) {
    // imaginary eta, imaginary tau in all supported regimes
    return modular_distance(q.imag(), 2.0 * tau.imag()) < 1e-9 && std::abs(tau.real()) < 1e-12;
  }
  return false;
}

Cplx site_shift(int n, Cplx u, Chirality chir, StepParity parity) {
  const bool bump = (parity == StepParity::EvenTop) ? (n % 2 == 0) : (n % 2 == 1);
  if (!bump) return 0;
  return chir == Chirality::Plus ? u : -u;
}

int signed_index(int n, Chirality chir) { return chir == Chirality::Plus ? n : -n; }

}  // namespace

Vector2cd psi_site(int n, Cplx shift, Cplx alpha_l, Cplx eta, Cplx tau) {
  const Cplx x = alpha_l + double(n) * eta + shift;
  const Vector2cd v = psi_vector(x, tau);
  const double norm = v.norm();
  const double scale = std::max(theta_scaled(1, x, Nome::plain(tau)).scale,
                                theta_scaled(4, x, Nome::plain(tau)).scale);
  if (norm < 1e-12 * scale)
    throw DegenerateStateError("psi_site: both components vanish at this argument");
  return v / norm;
}

VectorXcd helix_state(const HelixSpec& spec, const ModelParams& p, StepParity parity) {
  if (spec.kinks != 0)
    throw InvalidStateError("helix_state: only pure helices (kinks = 0) factorize");
  if (spec.geometry == Geometry::OpenOdd && spec.sites % 2 == 0)
    throw OddSizeError("helix_state: open chains have odd length");
  if (spec.geometry == Geometry::PeriodicEven && spec.sites % 2 != 0)
    throw OddSizeError("helix_state: periodic rings have even length");

  VectorXcd state = VectorXcd::Ones(1);
  for (int n = 1; n <= spec.sites; ++n) {
    const Vector2cd site = psi_site(signed_index(n, spec.chirality),
                                    site_shift(n, p.u, spec.chirality, parity), spec.alpha_l,
                                    p.eta, p.tau);
    VectorXcd next(state.size() * 2);
    next(Eigen::seqN(0, state.size(), 2)) = site(0) * state;
    next(Eigen::seqN(1, state.size(), 2)) = site(1) * state;
    state.swap(next);
  }
  return state;
}

MagnetizationProfile magnetization_profile(const VectorXcd& state) {
  const int n_sites = int(std::round(std::log2(double(state.size()))));
  MagnetizationProfile prof;
  prof.site_xyz.resize(size_t(n_sites));
  for (int site = 1; site <= n_sites; ++site) {
    const Eigen::Index pre = Eigen::Index(1) << (site - 1);
    const Eigen::Index post = Eigen::Index(1) << (n_sites - site);
    Matrix2cd rdm = Matrix2cd::Zero();
    for (Eigen::Index p = 0; p < pre; ++p)
      for (Eigen::Index s = 0; s < post; ++s)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            rdm(a, b) += state((p * 2 + a) * post + s) * std::conj(state((p * 2 + b) * post + s));
    rdm /= rdm.trace();
    prof.site_xyz[size_t(site - 1)] = {(rdm * pauli_x()).trace().real(),
                                       (rdm * pauli_y()).trace().real(),
                                       (rdm * pauli_z()).trace().real()};
  }
  return prof;
}

MagnetizationProfile magnetization_profile(const MatrixXcd& rho) {
  const int n_sites = int(std::round(std::log2(double(rho.rows()))));
  MagnetizationProfile prof;
  prof.site_xyz.resize(size_t(n_sites));
  for (int site = 1; site <= n_sites; ++site) {
    const Matrix2cd rdm = reduce_to_site(rho, site, n_sites);
    prof.site_xyz[size_t(site - 1)] = {(rdm * pauli_x()).trace().real(),
                                       (rdm * pauli_y()).trace().real(),
                                       (rdm * pauli_z()).trace().real()};
  }
  return prof;
}

MagnetizationProfile helix_profile(const HelixSpec& spec, const ModelParams& p,
                                   StepParity parity) {
  MagnetizationProfile prof;
  prof.parity = parity;
  prof.site_xyz.resize(size_t(spec.sites));
  for (int n = 1; n <= spec.sites; ++n) {
    const Vector2cd v = psi_site(signed_index(n, spec.chirality),
                                 site_shift(n, p.u, spec.chirality, parity), spec.alpha_l, p.eta,
                                 p.tau);
    const Matrix2cd rdm = v * v.adjoint();
    prof.site_xyz[size_t(n - 1)] = {(rdm * pauli_x()).trace().real(),
                                    (rdm * pauli_y()).trace().real(),
                                    (rdm * pauli_z()).trace().real()};
  }
  return prof;
}

Matrix2cd helix_site_density(Cplx x, Cplx tau) {
  const Vector2cd v = psi_vector(x, tau);
  const double n2 = v.squaredNorm();
  if (n2 == 0.0) throw DegenerateStateError("helix_site_density: zero state");
  return v * v.adjoint() / n2;
}

Indicators indicators(const Matrix2cd& rho1, Cplx alpha_l, Cplx eta, Cplx tau, bool squared) {
  Indicators out;
  out.f1 = 1.0 - (rho1 * rho1).trace().real();
  const auto dist = [&](Cplx x) {
    const Matrix2cd diff = rho1 - helix_site_density(x, tau);
    Eigen::SelfAdjointEigenSolver<Matrix2cd> es(diff, Eigen::EigenvaluesOnly);
    double acc = 0;
    for (int i = 0; i < 2; ++i) {
      const double l = std::abs(es.eigenvalues()(i));
      acc += squared ? l * l : l;
    }
    return 0.5 * acc;
  };
  out.f2_plus = dist(alpha_l + eta);
  out.f2_minus = dist(alpha_l - eta);
  return out;
}

std::vector<IndicatorSample> eta_scan(const ModelParams& base, const std::vector<Cplx>& etas,
                                      const ScanOptions& opt) {
  std::vector<IndicatorSample> samples(etas.size());

  const auto run_point = [&](size_t i) {
    IndicatorSample& s = samples[i];
    s.eta = etas[i];
    try {
      ModelParams p = base;
      p.eta = etas[i];
      p.alpha_r = p.alpha_l + p.u;  // resets held fixed across the scan
      Matrix2cd rho1;
      if (opt.engine == NessEngine::Oracle) {
        const NessResult ness = find_ness(p, opt.oracle_tol, opt.oracle_max_iter);
        if (!ness.converged) throw Error("oracle NESS did not converge");
        rho1 = reduce_to_site(ness.rho, 1, p.sites);
      } else {
        const MpaNess mpa = contract_ness(p, StepParity::EvenTop);
        rho1 = reduce_to_site(mpa.rho, 1, p.sites);
        if (opt.engine == NessEngine::Both && opt.oracle_every > 0 &&
            i % size_t(opt.oracle_every) == 0) {
          const NessResult ness = find_ness(p, opt.oracle_tol, opt.oracle_max_iter);
          if (ness.converged) s.oracle_distance = trace_distance(mpa.rho, ness.rho);
        }
      }
      const Indicators ind = indicators(rho1, p.alpha_l, p.eta, p.tau, opt.squared_f2);
      s.f1 = ind.f1;
      s.f2_plus = ind.f2_plus;
      s.f2_minus = ind.f2_minus;
      s.ok = true;
    } catch (const std::exception& e) {
      s.ok = false;
      s.error = e.what();
    }
  };

  const int threads = std::max(1, opt.threads);
  if (threads == 1 || etas.size() < 2) {
    for (size_t i = 0; i < etas.size(); ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> cursor{0};
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (size_t i = cursor.fetch_add(1); i < etas.size(); i = cursor.fetch_add(1))
          run_point(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return samples;
}

PeriodicReport periodic_checks(const ModelParams& p, int ring_sites,
                               const std::vector<Cplx>& alphas) {
  if (ring_sites < 2 || ring_sites % 2 != 0)
    throw OddSizeError("periodic_checks: ring size must be even");
  PeriodicReport rep;
  rep.ring_sites = ring_sites;
  rep.conjectured_degeneracy = 2 * ring_sites;
  rep.closure_ok = closure_holds(p.eta, p.tau, ring_sites);
  if (!rep.closure_ok)
    throw ClosureViolatedError("periodic_checks: eta*M is not 0 mod 2 (or mod 2 tau)");

  const Eigen::Index dim = Eigen::Index(1) << ring_sites;
  std::vector<VectorXcd> states;
  states.reserve(alphas.size() * 2);

  for (const Chirality chir : {Chirality::Plus, Chirality::Minus}) {
    for (const Cplx alpha : alphas) {
      HelixSpec spec;
      spec.alpha_l = alpha;
      spec.chirality = chir;
      spec.sites = ring_sites;
      spec.geometry = Geometry::PeriodicEven;
      const VectorXcd psi = helix_state(spec, p, StepParity::EvenTop);
      states.push_back(psi);
      const MatrixXcd proj = psi * psi.adjoint();
      const MatrixXcd evolved = periodic_step(proj, p, ring_sites, PeriodicLayer::Both);
      const double resid = trace_distance(evolved, proj);
      rep.residuals.push_back(resid);
      rep.max_stationarity_residual = std::max(rep.max_stationarity_residual, resid);
    }
  }

  // Gram rank of the state family and of the vectorized projector family.
  const auto gram_rank = [](const MatrixXcd& g) {
    Eigen::JacobiSVD<MatrixXcd> svd(g);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * sv(0)) ++rank;
    return rank;
  };
  const Eigen::Index k = Eigen::Index(states.size());
  MatrixXcd gs(k, k), gp(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const Cplx overlap = states[size_t(i)].adjoint() * states[size_t(j)];
      gs(i, j) = overlap;
      // <P_i, P_j>_HS = |<psi_i|psi_j>|^2 for unit projectors
      gp(i, j) = overlap * std::conj(overlap);
    }
  }
  rep.gram_rank_states = gram_rank(gs);
  rep.gram_rank_projectors = gram_rank(gp);
  (void)dim;
  return rep;
}

}  // namespace xyzness

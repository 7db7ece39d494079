#include "xyzness/mpa.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "xyzness/channels.hpp"
#include "xyzness/errors.hpp"

namespace xyzness {
namespace {

constexpr double kZeroTol = 1e-12;

// Site-dependent rank-1 entries of the Lax operators. `raw` variants skip
// the 1/C(m) normalization; along a single contraction path those factors
// are an overall scalar and would otherwise inject spurious poles.
struct LaxFactory {
  Cplx u, eta, tau, a;

  ThetaValue c_factor(int m) const { return theta_scaled(2, a + double(m) * eta, Nome::bar(tau)); }

  Cplx c_or_throw(int m) const {
    const ThetaValue c = c_factor(m);
    if (std::abs(c.value) < kZeroTol * c.scale)
      throw PoleAtSiteError("lax: theta2bar(a + m*eta) vanishes at m = " + std::to_string(m), m);
    return c.value;
  }

  Matrix2cd outer(Cplx psi_arg, Cplx xi_arg) const {
    return psi_vector(psi_arg, tau) * xi_covector(xi_arg, tau);
  }

  Matrix2cd l_raw(int m) const { return outer(double(m) * eta + a, -u - double(m) * eta - a); }
  Matrix2cd lp_raw(int m) const { return outer(u + double(m) * eta + a, -double(m) * eta - a); }
  Matrix2cd x_raw(int m) const { return outer(double(m) * eta - u + a, -double(m) * eta - a); }
  Matrix2cd xp_raw(int m) const { return outer(double(m) * eta + a, u - double(m) * eta - a); }

  Matrix2cd l(int m) const { return l_raw(m) / c_or_throw(m); }
  Matrix2cd lp(int m) const { return lp_raw(m) / c_or_throw(m); }
  Matrix2cd x(int m) const { return x_raw(m) / c_or_throw(m); }
  Matrix2cd xp(int m) const { return xp_raw(m) / c_or_throw(m); }
};

Cplx bar(int alpha, Cplx z, Cplx tau) { return theta_bar(alpha, z, tau); }

void check_denominator(const ThetaValue& t, const char* what) {
  if (std::abs(t.value) < kZeroTol * std::max(t.scale, 1.0))
    throw SingularParameterError(std::string("aux vector: ") + what + " vanishes");
}

// dest += m (X) blk, dest preallocated to twice the size of m.
void kron_accum(MatrixXcd& dest, const MatrixXcd& m, const Matrix2cd& blk) {
  const Eigen::Index r = m.rows(), c = m.cols();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (blk(a, b) != Cplx(0))
        dest(Eigen::seqN(a, r, 2), Eigen::seqN(b, c, 2)) += blk(a, b) * m;
}

struct BFactor {
  Cplx value;
  bool numerator_zero;
  bool denominator_zero;
};

}  // namespace

int AuxVector::max_support() const {
  int m = 0;
  for (const auto& [k, v] : coeffs) m = std::max({m, k.first, k.second});
  return m;
}

Matrix2cd lax_block(LaxKind kind, int site, int aux_row, int aux_col, const ModelParams& p,
                    Cplx a) {
  if (aux_row < 0) throw std::invalid_argument("lax_block: aux_row must be >= 0");
  if (aux_col != aux_row && aux_col != aux_row + 1) return Matrix2cd::Zero();
  const LaxFactory f{p.u, p.eta, p.tau, a};
  const int m = site - 2 * aux_row;
  const bool diag = (aux_col == aux_row);
  switch (kind) {
    case LaxKind::Plus:
      return diag ? f.l(m) : f.xp(m);
    case LaxKind::Minus:
      return diag ? f.lp(m) : f.x(m);
    case LaxKind::PlusConj:
      return diag ? f.l(m).adjoint().eval() : f.xp(m).adjoint().eval();
    case LaxKind::MinusConj:
      return diag ? f.lp(m).adjoint().eval() : f.x(m).adjoint().eval();
  }
  throw std::invalid_argument("lax_block: unknown kind");
}

AuxVector left_vector(const ModelParams& p) {
  p.validate();
  if (p.regime == Regime::General)
    throw WrongRegimeError("left_vector: boundary vectors exist in CaseA/CaseB only");
  const double w0 = p.alpha_l.real();
  const double w1 = p.alpha_l.imag();
  const Cplx iw1(0, w1);
  const Cplx u = p.u, tau = p.tau;

  Cplx l01, l11;
  if (p.regime == Regime::CaseB) {  // eta real, u imaginary
    const ThetaValue d1 = theta_scaled(3, u + iw1, Nome::bar(tau));
    const ThetaValue d2 = theta_scaled(4, w0, Nome::bar(tau));
    check_denominator(d1, "theta3bar(u + i w1)");
    check_denominator(d2, "theta4bar(w0)");
    l11 = bar(3, u - iw1, tau) / d1.value;
    l01 = bar(3, iw1, tau) * bar(4, u + w0, tau) / (d1.value * d2.value);
  } else {  // CaseA: eta imaginary, u real
    const ThetaValue d1 = theta_scaled(4, u + w0, Nome::bar(tau));
    const ThetaValue d2 = theta_scaled(3, iw1, Nome::bar(tau));
    check_denominator(d1, "theta4bar(u + w0)");
    check_denominator(d2, "theta3bar(i w1)");
    l11 = bar(4, u - w0, tau) / d1.value;
    l01 = bar(3, u + iw1, tau) * bar(4, w0, tau) / (d2.value * d1.value);
  }

  AuxVector v;
  v.side = AuxVector::Side::LeftBra;
  v.jmax = 1;
  v.coeffs[{0, 0}] = 1.0;
  v.coeffs[{0, 1}] = l01;
  v.coeffs[{1, 0}] = std::conj(l01);
  v.coeffs[{1, 1}] = l11;
  return v;
}

AuxVector right_vector(const ModelParams& p, int jmax) {
  p.validate();
  if (p.regime == Regime::General)
    throw WrongRegimeError("right_vector: boundary vectors exist in CaseA/CaseB only");
  if (jmax < p.sites + 2)
    throw std::invalid_argument("right_vector: jmax must be at least N+2");

  const Cplx u = p.u, eta = p.eta, tau = p.tau;
  const Cplx gamma = p.alpha_l + double(p.sites + 1) * eta;
  const Cplx g0(gamma.real(), 0);
  const Cplx ig1(0, gamma.imag());
  const Cplx nu = 0.5 * (p.alpha_r - p.alpha_l - u - double(p.sites + 1) * eta);

  const ThetaValue c3 = theta_scaled(3, ig1, Nome::bar(tau));
  const ThetaValue c4 = theta_scaled(4, g0, Nome::bar(tau));
  check_denominator(c3, "theta3bar(i Gamma1)");
  check_denominator(c4, "theta4bar(Gamma0)");

  const auto coupling = [&](int j, int jp) -> Cplx {
    const Cplx djm = double(j - jp) * eta;
    const Cplx djp = double(j + jp) * eta;
    if (p.regime == Regime::CaseB)
      return bar(3, djm - ig1, tau) * bar(4, djp - g0, tau) / (c3.value * c4.value);
    return bar(4, djm - g0, tau) * bar(3, djp - ig1, tau) / (c4.value * c3.value);
  };

  // b_n factors with zero/pole detection relative to each theta's own scale.
  std::vector<BFactor> b(static_cast<size_t>(jmax));
  for (int n = 0; n < jmax; ++n) {
    const ThetaValue n1 = theta_scaled(1, double(n) * eta + nu, Nome::bar(tau));
    const ThetaValue n2 = theta_scaled(2, u + gamma - double(n) * eta + nu, Nome::bar(tau));
    const ThetaValue d1 = theta_scaled(1, u + double(n + 1) * eta + nu, Nome::bar(tau));
    const ThetaValue d2 = theta_scaled(2, gamma - double(n + 1) * eta + nu, Nome::bar(tau));
    BFactor f;
    f.numerator_zero =
        std::abs(n1.value) < kZeroTol * n1.scale || std::abs(n2.value) < kZeroTol * n2.scale;
    f.denominator_zero =
        std::abs(d1.value) < kZeroTol * d1.scale || std::abs(d2.value) < kZeroTol * d2.scale;
    f.value = (f.denominator_zero || f.numerator_zero)
                  ? Cplx(0)
                  : -n1.value * n2.value / (d1.value * d2.value);
    b[size_t(n)] = f;
  }

  int zero_at = -1, pole_at = -1;
  for (int n = 0; n < jmax; ++n) {
    if (b[size_t(n)].numerator_zero && b[size_t(n)].denominator_zero)
      throw PoleInBError("right_vector: b_" + std::to_string(n) +
                             " has a simultaneous zero and pole; the limit is undetermined",
                         n);
    if (b[size_t(n)].numerator_zero && zero_at < 0) zero_at = n;
    if (b[size_t(n)].denominator_zero && pole_at < 0) pole_at = n;
  }

  AuxVector v;
  v.side = AuxVector::Side::RightKet;
  v.jmax = jmax;

  if (pole_at >= 0 && pole_at <= p.sites) {
    // Opposite-chirality resonance 1/b_pole = 0. Components that pass
    // through the pole dominate every finite one; renormalize by the
    // divergent factor and keep the walk-reachable block above the pole.
    // Every factor at or below the pole (including a zero pairing with it)
    // is common to the surviving components and drops out.
    v.structure = AuxVector::Structure::Renormalized;
    v.resonance_index = pole_at;
    const int lo = pole_at + 1;
    const int hi = p.sites + 1;  // the walk cannot reach further
    for (int k = lo; k < hi; ++k)
      if (b[size_t(k)].denominator_zero)
        throw PoleInBError("right_vector: second pole in b at n = " + std::to_string(k), k);
    std::vector<Cplx> prefix(size_t(hi) + 1, Cplx(1));
    for (int j = lo + 1; j <= hi; ++j)
      prefix[size_t(j)] = prefix[size_t(j - 1)] * b[size_t(j - 1)].value;
    const Cplx c0 = coupling(lo, lo);
    for (int j = lo; j <= hi; ++j)
      for (int jp = lo; jp <= hi; ++jp)
        v.coeffs[{j, jp}] =
            coupling(j, jp) * prefix[size_t(j)] * std::conj(prefix[size_t(jp)]) / c0;
    return v;
  }

  const int crop = (zero_at >= 0) ? zero_at : jmax;
  if (zero_at >= 0) {
    v.structure = AuxVector::Structure::Cropped;
    v.resonance_index = zero_at;
  }
  std::vector<Cplx> prefix(size_t(crop) + 1);
  prefix[0] = 1.0;
  for (int j = 1; j <= crop; ++j) prefix[size_t(j)] = prefix[size_t(j - 1)] * b[size_t(j - 1)].value;
  for (int j = 0; j <= std::min(crop, jmax); ++j)
    for (int jp = 0; jp <= std::min(crop, jmax); ++jp)
      v.coeffs[{j, jp}] = coupling(j, jp) * prefix[size_t(j)] * std::conj(prefix[size_t(jp)]);
  return v;
}

namespace {

// Walk the single surviving contraction path (helix resonances) without the
// 1/C(m) scalars.
MatrixXcd contract_single_path(const ModelParams& p, StepParity parity, const AuxVector& l,
                               const AuxVector& r, Cplx a, Cplx* raw_trace) {
  const LaxFactory f{p.u, p.eta, p.tau, a};
  const auto [key, rcoeff] = *r.coeffs.begin();
  const bool diagonal_path = (key.first == 0);
  const Cplx seed = diagonal_path ? l.at(0, 0) : l.at(1, 1);

  MatrixXcd rho = MatrixXcd::Ones(1, 1);
  for (int n = 1; n <= p.sites; ++n) {
    const bool plus = (parity == StepParity::EvenTop) ? (n % 2 == 1) : (n % 2 == 0);
    Matrix2cd elem;
    if (diagonal_path) {
      const int m = n;  // aux index stays 0
      elem = plus ? f.l_raw(m) : f.lp_raw(m);
    } else {
      const int m = n - 2 * n;  // aux index enters at n, i.e. m = -n
      elem = plus ? f.xp_raw(m) : f.x_raw(m);
    }
    const Matrix2cd site_op = elem * elem.adjoint();
    MatrixXcd next = MatrixXcd::Zero(rho.rows() * 2, rho.cols() * 2);
    kron_accum(next, rho, site_op);
    rho.swap(next);
  }
  rho *= seed * rcoeff;
  *raw_trace = rho.trace();
  return rho;
}

}  // namespace

MpaNess contract_ness(const ModelParams& p, StepParity parity) {
  p.validate();
  const Cplx a = p.alpha_l;
  const AuxVector l = left_vector(p);
  const AuxVector r = right_vector(p, p.sites + 2);

  MpaNess out;
  out.parity = parity;

  MatrixXcd rho;
  const auto single = r.coeffs.begin();
  if (r.single_component() &&
      (single->first.first == 0 || single->first.first == p.sites + 1)) {
    rho = contract_single_path(p, parity, l, r, a, &out.raw_trace);
  } else {
    const LaxFactory f{p.u, p.eta, p.tau, a};
    const int rmax = r.max_support();
    std::map<std::pair<int, int>, MatrixXcd> t;
    for (const auto& [k, c] : l.coeffs)
      if (k.first <= rmax && k.second <= rmax) t[k] = MatrixXcd::Constant(1, 1, c);

    const Eigen::Index d = Eigen::Index(1) << p.sites;
    rho = MatrixXcd::Zero(d, d);
    for (int n = 1; n <= p.sites; ++n) {
      const bool plus = (parity == StepParity::EvenTop) ? (n % 2 == 1) : (n % 2 == 0);
      const bool last = (n == p.sites);
      std::map<std::pair<int, int>, MatrixXcd> next;
      for (const auto& [k, m] : t) {
        const auto [j, jp] = k;
        const Matrix2cd diag_a = plus ? f.l(n - 2 * j) : f.lp(n - 2 * j);
        const Matrix2cd sup_a = plus ? f.xp(n - 2 * j) : f.x(n - 2 * j);
        const Matrix2cd diag_b = (plus ? f.l(n - 2 * jp) : f.lp(n - 2 * jp)).adjoint();
        const Matrix2cd sup_b = (plus ? f.xp(n - 2 * jp) : f.x(n - 2 * jp)).adjoint();
        for (int dj = 0; dj < 2; ++dj) {
          for (int djp = 0; djp < 2; ++djp) {
            const int nj = j + dj, njp = jp + djp;
            if (nj > rmax || njp > rmax) continue;
            Matrix2cd site_op = (dj ? sup_a : diag_a) * (djp ? sup_b : diag_b);
            if (last) {
              // Fold the right vector in at the final site instead of
              // materializing the full block map once more.
              const Cplx c = r.at(nj, njp);
              if (c == Cplx(0)) continue;
              site_op *= c;
              kron_accum(rho, m, site_op);
            } else {
              auto it = next.find({nj, njp});
              if (it == next.end()) {
                it = next.emplace(std::pair{nj, njp},
                                  MatrixXcd::Zero(m.rows() * 2, m.cols() * 2))
                         .first;
              }
              kron_accum(it->second, m, site_op);
            }
          }
        }
      }
      t.swap(next);
    }
    out.raw_trace = rho.trace();
  }

  if (!std::isfinite(std::abs(out.raw_trace)) || std::abs(out.raw_trace) == 0.0)
    throw NonHermitianResultError("contract_ness: degenerate raw trace");
  rho /= out.raw_trace;
  out.hermiticity_residual = (rho - rho.adjoint()).norm();
  if (out.hermiticity_residual > 1e-8)
    throw NonHermitianResultError("contract_ness: result is not Hermitian, residual " +
                                  std::to_string(out.hermiticity_residual));
  out.rho = std::move(rho);
  return out;
}

RllReport verify_rll(const ModelParams& p, std::span<const int> m_values) {
  const GateMatrix g = build_gate(p.u, p.eta, p.tau);
  const LaxFactory f{p.u, p.eta, p.tau, p.alpha_l};
  const auto dag = [](const Matrix2cd& m) { return m.adjoint().eval(); };

  RllReport rep;
  for (const int m : m_values) {
    const auto check = [&](const Matrix4cd& lhs_ops, const Matrix4cd& rhs_ops) {
      return (g.m * lhs_ops - rhs_ops * g.m).norm();
    };
    {
      const double r1 = check(kron(f.l(m), f.lp(m + 1)), kron(f.lp(m), f.l(m + 1)));
      const double r2 = check(kron(f.l(m), f.x(m + 1)) + kron(f.xp(m), f.lp(m - 1)),
                              kron(f.lp(m), f.xp(m + 1)) + kron(f.x(m), f.l(m - 1)));
      const double r3 = check(kron(f.xp(m), f.x(m - 1)), kron(f.x(m), f.xp(m - 1)));
      rep.base_residual = std::max({rep.base_residual, r1, r2, r3});
    }
    {
      const double r1 =
          check(kron(dag(f.l(m)), dag(f.lp(m + 1))), kron(dag(f.lp(m)), dag(f.l(m + 1))));
      const double r2 =
          check(kron(dag(f.l(m)), dag(f.x(m + 1))) + kron(dag(f.xp(m)), dag(f.lp(m - 1))),
                kron(dag(f.lp(m)), dag(f.xp(m + 1))) + kron(dag(f.x(m)), dag(f.l(m - 1))));
      const double r3 =
          check(kron(dag(f.xp(m)), dag(f.x(m - 1))), kron(dag(f.x(m)), dag(f.xp(m - 1))));
      rep.conjugate_residual = std::max({rep.conjugate_residual, r1, r2, r3});
    }
  }
  rep.max_residual = p.unitary_regime() ? std::max(rep.base_residual, rep.conjugate_residual)
                                        : rep.base_residual;
  return rep;
}

double left_boundary_residual(const ModelParams& p) {
  const AuxVector l = left_vector(p);
  const GateMatrix g = build_gate(p.u, p.eta, p.tau);
  const Vector2cd target = boundary_state(p.alpha_l, p.tau);

  double worst = 0;
  for (int k = 0; k <= 2; ++k) {
    for (int kp = 0; kp <= 2; ++kp) {
      Matrix2cd lhs = Matrix2cd::Zero();
      Matrix2cd inner = Matrix2cd::Zero();
      bool any = false;
      for (const auto& [key, c] : l.coeffs) {
        const auto [j, jp] = key;
        const Matrix2cd pa = lax_block(LaxKind::Plus, 1, j, k, p, p.alpha_l);
        const Matrix2cd pb = lax_block(LaxKind::PlusConj, 1, jp, kp, p, p.alpha_l);
        const Matrix2cd ma = lax_block(LaxKind::Minus, 1, j, k, p, p.alpha_l);
        const Matrix2cd mb = lax_block(LaxKind::MinusConj, 1, jp, kp, p, p.alpha_l);
        if (!pa.isZero() && !pb.isZero()) {
          lhs += c * (pa * pb);
          any = true;
        }
        if (!ma.isZero() && !mb.isZero()) {
          inner += c * (ma * mb);
          any = true;
        }
      }
      if (!any) continue;
      const Matrix2cd rhs = reset_channel_map(Side::Left, g, target, inner);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double right_boundary_residual(const ModelParams& p, int jmax) {
  const AuxVector r = right_vector(p, jmax);
  const GateMatrix g = build_gate(p.u, p.eta, p.tau);
  const Vector2cd target = boundary_state(p.alpha_r, p.tau);
  const int n = p.sites;

  double worst = 0;
  const int kmax = std::min(r.max_support() + 1, n + 1);
  for (int k = 0; k < kmax; ++k) {
    for (int kp = 0; kp < kmax; ++kp) {
      Matrix2cd lhs = Matrix2cd::Zero();
      Matrix2cd inner = Matrix2cd::Zero();
      for (int dj = 0; dj < 2; ++dj) {
        for (int djp = 0; djp < 2; ++djp) {
          const Cplx c = r.at(k + dj, kp + djp);
          if (c == Cplx(0)) continue;
          lhs += c * lax_block(LaxKind::Minus, n, k, k + dj, p, p.alpha_l) *
                 lax_block(LaxKind::MinusConj, n, kp, kp + djp, p, p.alpha_l);
          inner += c * lax_block(LaxKind::Plus, n, k, k + dj, p, p.alpha_l) *
                   lax_block(LaxKind::PlusConj, n, kp, kp + djp, p, p.alpha_l);
        }
      }
      const Matrix2cd rhs = reset_channel_map(Side::Right, g, target, inner);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace xyzness

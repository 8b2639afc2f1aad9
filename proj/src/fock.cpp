#include "gssf/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace gssf {

namespace {

const complexd I(0.0, 1.0);

VectorXcd coherent_vector(complexd alpha, int D) {
  VectorXcd c(D);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < D; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

// ladder operators on a two-mode pure state psi(na, nb)
FockWavefunction apply_a(const FockWavefunction& p) {
  FockWavefunction q = FockWavefunction::Zero(p.rows(), p.cols());
  for (int n = 0; n + 1 < p.rows(); ++n) q.row(n) = std::sqrt(n + 1.0) * p.row(n + 1);
  return q;
}

FockWavefunction apply_adag(const FockWavefunction& p) {
  FockWavefunction q = FockWavefunction::Zero(p.rows(), p.cols());
  for (int n = 1; n < p.rows(); ++n) q.row(n) = std::sqrt(static_cast<double>(n)) * p.row(n - 1);
  return q;
}

FockWavefunction apply_b(const FockWavefunction& p) {
  FockWavefunction q = FockWavefunction::Zero(p.rows(), p.cols());
  for (int m = 0; m + 1 < p.cols(); ++m) q.col(m) = std::sqrt(m + 1.0) * p.col(m + 1);
  return q;
}

FockWavefunction apply_bdag(const FockWavefunction& p) {
  FockWavefunction q = FockWavefunction::Zero(p.rows(), p.cols());
  for (int m = 1; m < p.cols(); ++m) q.col(m) = std::sqrt(static_cast<double>(m)) * p.col(m - 1);
  return q;
}

FockWavefunction apply_label(const FockWavefunction& p, const FockLabel& l) {
  if (l.mode == 0) return l.dag ? apply_adag(p) : apply_a(p);
  if (l.mode == 1) return l.dag ? apply_bdag(p) : apply_b(p);
  throw std::invalid_argument("fock label: mode out of range");
}

complexd expect(const FockWavefunction& psi, const FockWavefunction& op_psi) {
  return (psi.conjugate().array() * op_psi.array()).sum();
}

void check_truncation_psi(const FockWavefunction& psi) {
  double top = psi.row(psi.rows() - 1).squaredNorm() + psi.col(psi.cols() - 1).squaredNorm();
  if (top > 1e-6) throw std::runtime_error("fock: truncation guard tripped, increase D");
}

template <class Rhs>
void rk4_inplace(MatrixXcd& y, double h, Rhs&& rhs) {
  MatrixXcd k1 = rhs(y);
  MatrixXcd k2 = rhs(y + 0.5 * h * k1);
  MatrixXcd k3 = rhs(y + 0.5 * h * k2);
  MatrixXcd k4 = rhs(y + h * k3);
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<KerrMoments> kerr_master_evolve(complexd alpha0, double kappa_over_g, int D,
                                            const std::vector<double>& gt_grid) {
  if (D < 2) throw std::invalid_argument("fock: D too small");
  VectorXcd c = coherent_vector(alpha0, D);
  MatrixXcd rho = c * c.adjoint();

  VectorXd hdiag(D), sq(D);
  for (int n = 0; n < D; ++n) {
    hdiag[n] = 0.5 * n * (n - 1.0);
    sq[n] = std::sqrt(static_cast<double>(n));
  }

  auto rhs = [&](const MatrixXcd& r) {
    MatrixXcd d = -I * (hdiag.cast<complexd>().asDiagonal() * r - r * hdiag.cast<complexd>().asDiagonal());
    if (kappa_over_g > 0.0) {
      MatrixXcd jump = MatrixXcd::Zero(D, D);
      for (int m = 0; m + 1 < D; ++m)
        for (int n = 0; n + 1 < D; ++n) jump(m, n) = sq[m + 1] * sq[n + 1] * r(m + 1, n + 1);
      VectorXd num = VectorXd::LinSpaced(D, 0, D - 1);
      d += kappa_over_g * (2.0 * jump - num.cast<complexd>().asDiagonal() * r -
                           r * num.cast<complexd>().asDiagonal());
    }
    return d;
  };

  // RK4 stability bound set by the largest diagonal phase rate
  double rate = hdiag[D - 1] + 2.0 * kappa_over_g * (D - 1) + 1.0;
  std::vector<KerrMoments> out;
  out.reserve(gt_grid.size());
  double t = 0.0;
  for (double target : gt_grid) {
    double span = target - t;
    if (span < 0.0) throw std::invalid_argument("fock: time grid must be ascending");
    int nsub = std::max(1, static_cast<int>(std::ceil(span * rate / 1.0)));
    double h = span / nsub;
    for (int s = 0; s < nsub; ++s) rk4_inplace(rho, h, rhs);
    t = target;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    if (std::abs(rho(D - 1, D - 1)) > 1e-6)
      throw std::runtime_error("fock: truncation guard tripped, increase D");

    complexd mean = 0.0, asq = 0.0;
    double nbar = 0.0;
    for (int n = 0; n + 1 < D; ++n) mean += sq[n + 1] * rho(n + 1, n);
    for (int n = 0; n + 2 < D; ++n) asq += sq[n + 1] * sq[n + 2] * rho(n + 2, n);
    for (int n = 0; n < D; ++n) nbar += n * rho(n, n).real();
    KerrMoments m;
    m.mean = mean;
    m.var_a = asq - mean * mean;
    m.cov_na = nbar - std::norm(mean);
    out.push_back(m);
  }
  return out;
}

namespace {

FockWavefunction chi2_h_psi(const FockWavefunction& p) {
  // H = (1/2)(i b a^dag^2 - i b^dag a^2)
  return 0.5 * I * (apply_adag(apply_adag(apply_b(p))) - apply_a(apply_a(apply_bdag(p))));
}

}  // namespace

std::vector<TwoModeMoments> chi2_single_bin_evolve(complexd alpha_a, complexd beta_b, int Da,
                                                   int Db, const std::vector<double>& t_grid) {
  FockWavefunction psi = coherent_vector(alpha_a, Da) * coherent_vector(beta_b, Db).transpose();
  auto rhs = [](const MatrixXcd& p) { return MatrixXcd(-I * chi2_h_psi(p)); };
  double rate = 0.5 * std::sqrt(static_cast<double>(Db)) * Da + 1.0;
  std::vector<TwoModeMoments> out;
  out.reserve(t_grid.size());
  double t = 0.0;
  for (double target : t_grid) {
    double span = target - t;
    if (span < 0.0) throw std::invalid_argument("fock: time grid must be ascending");
    int nsub = std::max(1, static_cast<int>(std::ceil(span * rate)));
    double h = span / nsub;
    for (int s = 0; s < nsub; ++s) rk4_inplace(psi, h, rhs);
    t = target;
    psi /= psi.norm();
    check_truncation_psi(psi);
    out.push_back(fock_moments(psi));
  }
  return out;
}

FockWavefunction prepare_gaussian_two_mode(const QuadraticTwoModeSpec& spec, int Da, int Db) {
  FockWavefunction psi =
      coherent_vector(spec.disp_a, Da) * coherent_vector(spec.disp_b, Db).transpose();
  if (spec.time == 0.0) return psi;

  auto h_psi = [&](const FockWavefunction& p) {
    FockWavefunction q = spec.detune_a * apply_adag(apply_a(p)) +
                         spec.detune_b * apply_bdag(apply_b(p));
    q += 0.5 * (spec.squeeze_a * apply_adag(apply_adag(p)) +
                std::conj(spec.squeeze_a) * apply_a(apply_a(p)));
    q += 0.5 * (spec.squeeze_b * apply_bdag(apply_bdag(p)) +
                std::conj(spec.squeeze_b) * apply_b(apply_b(p)));
    q += spec.beamsplit * apply_adag(apply_b(p)) + std::conj(spec.beamsplit) * apply_a(apply_bdag(p));
    q += spec.pair * apply_adag(apply_bdag(p)) + std::conj(spec.pair) * apply_a(apply_b(p));
    return q;
  };
  auto rhs = [&](const MatrixXcd& p) { return MatrixXcd(-I * h_psi(p)); };

  double scale = std::abs(spec.detune_a) + std::abs(spec.detune_b) + std::abs(spec.squeeze_a) +
                 std::abs(spec.squeeze_b) + std::abs(spec.beamsplit) + std::abs(spec.pair);
  double rate = (scale + 1.0) * std::max(Da, Db);
  int nsub = std::max(1, static_cast<int>(std::ceil(spec.time * rate)));
  double h = spec.time / nsub;
  for (int s = 0; s < nsub; ++s) rk4_inplace(psi, h, rhs);
  psi /= psi.norm();
  check_truncation_psi(psi);
  return psi;
}

TwoModeMoments fock_moments(const FockWavefunction& psi) {
  FockWavefunction ap = apply_a(psi), bp = apply_b(psi);
  TwoModeMoments m;
  m.mu_a = expect(psi, ap);
  m.mu_b = expect(psi, bp);
  complexd aa = expect(psi, apply_a(ap));
  complexd bb = expect(psi, apply_b(bp));
  complexd na = expect(ap, ap);   // <a^dag a>
  complexd nb = expect(bp, bp);
  complexd ab = expect(psi, apply_b(ap));
  complexd adb = expect(ap, bp);  // <a^dag b>
  m.cp_aa = aa - m.mu_a * m.mu_a;
  m.cm_aa = na - std::norm(m.mu_a);
  m.cp_bb = bb - m.mu_b * m.mu_b;
  m.cm_bb = nb - std::norm(m.mu_b);
  m.cp_ab = ab - m.mu_a * m.mu_b;
  m.cm_ab = adb - std::conj(m.mu_a) * m.mu_b;
  return m;
}

complexd fock_fourth_moment(const FockWavefunction& psi, const std::array<FockLabel, 4>& labels) {
  FockWavefunction p = apply_label(psi, labels[3]);
  p = apply_label(p, labels[2]);
  p = apply_label(p, labels[1]);
  p = apply_label(p, labels[0]);
  return expect(psi, p);
}

}  // namespace gssf

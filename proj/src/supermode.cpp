#include "gssf/supermode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace gssf {

void eigh_real(const MatrixXd& a, VectorXd& evals, MatrixXd& evecs) {
  const auto n = a.rows();
  evecs = a;
  evals.resize(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                   evecs.data(), static_cast<lapack_int>(n), evals.data());
  if (info != 0) throw std::runtime_error("eigh_real: dsyevd failed");
}

void eigh_complex(const MatrixXcd& a, VectorXd& evals, MatrixXcd& evecs) {
  const auto n = a.rows();
  evecs = a;
  evals.resize(n);
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                   reinterpret_cast<lapack_complex_double*>(evecs.data()),
                                   static_cast<lapack_int>(n), evals.data());
  if (info != 0) throw std::runtime_error("eigh_complex: zheevd failed");
}

MatrixXd symplectic_form(int n) {
  MatrixXd om = MatrixXd::Zero(2 * n, 2 * n);
  om.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  om.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  return om;
}

namespace {

// omega * x without forming the matrix
MatrixXd omega_times(const MatrixXd& x) {
  const auto n = x.rows() / 2;
  MatrixXd y(x.rows(), x.cols());
  y.topRows(n) = x.bottomRows(n);
  y.bottomRows(n) = -x.topRows(n);
  return y;
}

}  // namespace

WilliamsonResult williamson(const MatrixXd& sigma, double tol) {
  const auto n2 = sigma.rows();
  if (n2 % 2 != 0 || sigma.cols() != n2) throw std::invalid_argument("williamson: bad shape");
  const auto n = n2 / 2;
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + sigma.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("williamson: input not symmetric");

  VectorXd sev;
  MatrixXd svec;
  eigh_real(0.5 * (sigma + sigma.transpose()), sev, svec);
  if (sev.minCoeff() <= 0.0) throw std::invalid_argument("williamson: input not positive definite");
  MatrixXd m12 = svec * sev.cwiseSqrt().asDiagonal() * svec.transpose();

  // K = Sigma^{1/2} Omega Sigma^{1/2} is antisymmetric; iK is Hermitian with
  // eigenvalues +-d. An eigenvector w = x + iy at +d yields the canonical
  // pair u = sqrt(2) x, v = -sqrt(2) y with u^T K v = d.
  MatrixXd k = m12 * omega_times(m12);
  k = 0.5 * (k - k.transpose()).eval();
  MatrixXcd ik = complexd(0.0, 1.0) * k.cast<complexd>();

  VectorXd kev;
  MatrixXcd kvec;
  eigh_complex(ik, kev, kvec);

  // positive branch, descending
  std::vector<int> idx;
  for (int i = static_cast<int>(n2) - 1; i >= static_cast<int>(n); --i) idx.push_back(i);
  VectorXd d(n);
  MatrixXd q(n2, n2);
  for (int j = 0; j < n; ++j) {
    int i = idx[j];
    d[j] = kev[i];
    if (d[j] < 0.5 - tol)
      throw std::invalid_argument("williamson: symplectic eigenvalue below vacuum (unphysical)");
    q.col(j) = std::sqrt(2.0) * kvec.col(i).real();
    q.col(n + j) = -std::sqrt(2.0) * kvec.col(i).imag();
  }

  WilliamsonResult res;
  res.d = d;
  VectorXd scale(n2);
  scale.head(n) = d.cwiseSqrt().cwiseInverse();
  scale.tail(n) = scale.head(n);
  res.S = m12 * q * scale.asDiagonal();
  return res;
}

namespace {

// pairs inside an Omega-invariant eigenspace (columns of basis orthonormal):
// restricted Omega is antisymmetric with square -I, so eigenvectors of
// i*Omega_r at +1 give (q, p) partners exactly as in williamson
void pair_unit_subspace(const MatrixXd& basis, MatrixXd& qcols, MatrixXd& pcols) {
  const auto c2 = basis.cols();
  MatrixXd jr = basis.transpose() * omega_times(basis);
  jr = 0.5 * (jr - jr.transpose()).eval();
  MatrixXcd ij = complexd(0.0, 1.0) * jr.cast<complexd>();
  VectorXd ev;
  MatrixXcd evec;
  eigh_complex(ij, ev, evec);
  const auto c = c2 / 2;
  qcols.resize(basis.rows(), c);
  pcols.resize(basis.rows(), c);
  for (int j = 0; j < c; ++j) {
    // +1 branch occupies the top half after ascending sort
    auto w = evec.col(c + j);
    pcols.col(j) = std::sqrt(2.0) * (basis * w.real());
    qcols.col(j) = std::sqrt(2.0) * (basis * w.imag());
  }
}

}  // namespace

BlochMessiahResult bloch_messiah(const MatrixXd& S) {
  const auto n2 = S.rows();
  const auto n = n2 / 2;
  MatrixXd p = S * S.transpose();
  p = 0.5 * (p + p.transpose()).eval();

  VectorXd ev;
  MatrixXd evec;
  eigh_real(p, ev, evec);

  const double tol = 1e-10;
  std::vector<int> squeezed;  // eigenvalues lambda^2 > 1 + tol, descending
  std::vector<int> unit;
  for (int i = static_cast<int>(n2) - 1; i >= 0; --i) {
    if (ev[i] > 1.0 + tol)
      squeezed.push_back(i);
    else if (ev[i] >= 1.0 / (1.0 + tol))
      unit.push_back(i);
  }
  if (static_cast<int>(squeezed.size()) > n)
    throw std::invalid_argument("bloch_messiah: input not symplectic");
  const int ns = static_cast<int>(squeezed.size());
  const int nu = static_cast<int>(unit.size());
  if (ns + nu / 2 != n || nu % 2 != 0)
    throw std::invalid_argument("bloch_messiah: eigenvalue pairing failed (input not symplectic?)");

  MatrixXd o_out(n2, n2);
  VectorXd r(n);
  // squeezed pairs: p-column is the eigenvector v at lambda^2, q-column is
  // Omega v (eigenvector at lambda^-2)
  for (int j = 0; j < ns; ++j) {
    VectorXd v = evec.col(squeezed[j]);
    r[j] = 0.5 * std::log(ev[squeezed[j]]);
    o_out.col(n + j) = v;
    o_out.col(j) = omega_times(v);
  }
  if (nu > 0) {
    MatrixXd basis(n2, nu);
    for (int j = 0; j < nu; ++j) basis.col(j) = evec.col(unit[j]);
    MatrixXd qc, pc;
    pair_unit_subspace(basis, qc, pc);
    for (int j = 0; j < nu / 2; ++j) {
      r[ns + j] = 0.0;
      o_out.col(ns + j) = qc.col(j);
      o_out.col(n + ns + j) = pc.col(j);
    }
  }

  BlochMessiahResult res;
  res.r = r;
  res.o_out = o_out;
  VectorXd lam_inv(n2);
  lam_inv.head(n) = r.array().exp();         // 1/e^{-r}
  lam_inv.tail(n) = (-r.array()).exp();      // 1/e^{+r}
  res.o_in = lam_inv.asDiagonal() * o_out.transpose() * S;
  return res;
}

SupermodeDecomposition decompose(const MatrixXd& sigma, double tol) {
  const auto n = sigma.rows() / 2;
  WilliamsonResult w = williamson(sigma, tol);
  BlochMessiahResult bm = bloch_messiah(w.S);

  MatrixXd st = bm.o_out.transpose() * sigma * bm.o_out;
  VectorXd var_q = st.diagonal().head(n);
  VectorXd var_p = st.diagonal().tail(n);

  MatrixXd rot = bm.o_out.transpose();  // [[X, -Y], [Y, X]]
  MatrixXd x = rot.topLeftCorner(n, n);
  MatrixXd y = -rot.topRightCorner(n, n);
  MatrixXcd u = x.cast<complexd>() + complexd(0.0, 1.0) * y.cast<complexd>();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  VectorXd anti(n), sq(n);
  for (int i = 0; i < n; ++i) {
    double vmax = std::max(var_q[i], var_p[i]);
    double vmin = std::min(var_q[i], var_p[i]);
    anti[i] = 10.0 * std::log10(2.0 * vmax);
    sq[i] = -10.0 * std::log10(2.0 * vmin);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return anti[a] > anti[b]; });

  SupermodeDecomposition out;
  out.U.resize(n, n);
  out.r.resize(n);
  out.squeeze_db.resize(n);
  out.antisqueeze_db.resize(n);
  for (int i = 0; i < n; ++i) {
    out.U.row(i) = u.row(order[i]);
    out.r[i] = bm.r[order[i]];
    out.squeeze_db[i] = sq[order[i]];
    out.antisqueeze_db[i] = anti[order[i]];
  }
  out.n_th = (w.d.array() - 0.5).cwiseMax(0.0);
  return out;
}

// propagated states carry truncation-level closure error, so the vacuum
// guard is relaxed to the integration tolerance scale
SupermodeDecomposition decompose(const GaussianEnvelopeState& s) {
  return decompose(to_quadrature_covariance(s), 1e-3);
}

SupermodeDecomposition decompose(const TwoEnvelopeState& s) {
  return decompose(to_quadrature_covariance(s), 1e-3);
}

}  // namespace gssf

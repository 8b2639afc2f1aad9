#include "gssf/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gssf {

FieldGrid FieldGrid::make(int M, double window) {
  if (M < 2 || M % 2 != 0) throw std::invalid_argument("grid: M must be even and >= 2");
  if (!(window > 0.0)) throw std::invalid_argument("grid: window must be positive");
  FieldGrid g;
  g.modes = M;
  g.window = window;
  g.dz = window / M;
  g.dk = 2.0 * M_PI / window;
  return g;
}

int FieldGrid::phys_index(int storage) const {
  return storage < modes / 2 ? storage : storage - modes;
}

int FieldGrid::storage_index(int phys) const {
  return phys >= 0 ? phys : phys + modes;
}

namespace {

// Plans are created once per size with FFTW_UNALIGNED so the new-array
// execute interface works on any buffer. FFTW_ESTIMATE keeps planning
// deterministic across runs.
struct PlanSet {
  fftw_plan vec_fwd, vec_bwd;
  fftw_plan cols_fwd, cols_bwd;  // contiguous length-M transforms, M of them
  fftw_plan rows_fwd, rows_bwd;  // strided transforms along the other axis
};

PlanSet& plans_for(int M) {
  static std::map<int, PlanSet> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;

  std::vector<std::complex<double>> buf(static_cast<size_t>(M) * M);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanSet ps;
  ps.vec_fwd = fftw_plan_dft_1d(M, p, p, FFTW_FORWARD, flags);
  ps.vec_bwd = fftw_plan_dft_1d(M, p, p, FFTW_BACKWARD, flags);
  int n = M;
  ps.cols_fwd = fftw_plan_many_dft(1, &n, M, p, nullptr, 1, M, p, nullptr, 1, M, FFTW_FORWARD, flags);
  ps.cols_bwd = fftw_plan_many_dft(1, &n, M, p, nullptr, 1, M, p, nullptr, 1, M, FFTW_BACKWARD, flags);
  ps.rows_fwd = fftw_plan_many_dft(1, &n, M, p, nullptr, M, 1, p, nullptr, M, 1, FFTW_FORWARD, flags);
  ps.rows_bwd = fftw_plan_many_dft(1, &n, M, p, nullptr, M, 1, p, nullptr, M, 1, FFTW_BACKWARD, flags);
  return cache.emplace(M, ps).first->second;
}

inline fftw_complex* raw(VectorXcd& v) { return reinterpret_cast<fftw_complex*>(v.data()); }
inline fftw_complex* raw(MatrixXcd& m) { return reinterpret_cast<fftw_complex*>(m.data()); }

void exec_vec(fftw_plan plan, VectorXcd& v) {
  fftw_execute_dft(plan, raw(v), raw(v));
  v *= 1.0 / std::sqrt(static_cast<double>(v.size()));
}

void exec_mat(fftw_plan plan, MatrixXcd& m) {
  fftw_execute_dft(plan, raw(m), raw(m));
  m *= 1.0 / std::sqrt(static_cast<double>(m.rows()));
}

}  // namespace

void dft_mean_to_k(VectorXcd& v) { exec_vec(plans_for(static_cast<int>(v.size())).vec_fwd, v); }
void dft_mean_to_z(VectorXcd& v) { exec_vec(plans_for(static_cast<int>(v.size())).vec_bwd, v); }

// Eigen matrices are column-major: a "cols" plan transforms the row index
// (left multiplication by the kernel), a "rows" plan the column index
// (right multiplication by its transpose).
void dft_cov_to_k(MatrixXcd& cp, MatrixXcd& cm) {
  if (cp.rows() != cp.cols() || cm.rows() != cm.cols() || cp.rows() != cm.rows())
    throw std::invalid_argument("dft_cov: shape mismatch");
  auto& ps = plans_for(static_cast<int>(cp.rows()));
  exec_mat(ps.cols_fwd, cp);  // F Cp
  exec_mat(ps.rows_fwd, cp);  // (F Cp) F^T
  exec_mat(ps.cols_bwd, cm);  // conj(F) Cm
  exec_mat(ps.rows_fwd, cm);  // ... F^T
}

void dft_cov_to_z(MatrixXcd& cp, MatrixXcd& cm) {
  if (cp.rows() != cp.cols() || cm.rows() != cm.cols() || cp.rows() != cm.rows())
    throw std::invalid_argument("dft_cov: shape mismatch");
  auto& ps = plans_for(static_cast<int>(cp.rows()));
  exec_mat(ps.cols_bwd, cp);
  exec_mat(ps.rows_bwd, cp);
  exec_mat(ps.cols_fwd, cm);
  exec_mat(ps.rows_bwd, cm);
}

void dft_cross_to_k(MatrixXcd& cp_ab, MatrixXcd& cm_ab) {
  auto& ps = plans_for(static_cast<int>(cp_ab.rows()));
  exec_mat(ps.cols_fwd, cp_ab);
  exec_mat(ps.rows_fwd, cp_ab);
  exec_mat(ps.cols_bwd, cm_ab);
  exec_mat(ps.rows_fwd, cm_ab);
}

void dft_cross_to_z(MatrixXcd& cp_ab, MatrixXcd& cm_ab) {
  auto& ps = plans_for(static_cast<int>(cp_ab.rows()));
  exec_mat(ps.cols_bwd, cp_ab);
  exec_mat(ps.rows_bwd, cp_ab);
  exec_mat(ps.cols_fwd, cm_ab);
  exec_mat(ps.rows_bwd, cm_ab);
}

VectorXcd to_physical_order(const FieldGrid& g, const VectorXcd& v) {
  VectorXcd out(v.size());
  for (int s = 0; s < g.modes; ++s) out[g.phys_index(s) + g.modes / 2] = v[s];
  return out;
}

MatrixXcd to_physical_order(const FieldGrid& g, const MatrixXcd& m) {
  MatrixXcd out(m.rows(), m.cols());
  for (int sj = 0; sj < g.modes; ++sj)
    for (int si = 0; si < g.modes; ++si)
      out(g.phys_index(si) + g.modes / 2, g.phys_index(sj) + g.modes / 2) = m(si, sj);
  return out;
}

}  // namespace gssf

#pragma once

#include <complex>
#include <Eigen/Dense>

namespace gssf {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using complexd = std::complex<double>;

// Comoving temporal window discretized into M bins. Storage uses FFT-standard
// mode ordering (0, 1, ..., M/2-1, -M/2, ..., -1); helpers map to physical
// (ascending) order for I/O.
struct FieldGrid {
  int modes = 0;        // M
  double window = 0.0;  // total window length (local pulse time, s)
  double dz = 0.0;      // bin size, window/M
  double dk = 0.0;      // angular-frequency bin, 2*pi/window

  static FieldGrid make(int M, double window);

  // physical mode index in [-M/2, M/2) for a storage index
  int phys_index(int storage) const;
  int storage_index(int phys) const;

  double z_at(int storage) const { return phys_index(storage) * dz; }
  double k_at(int storage) const { return phys_index(storage) * dk; }

  bool operator==(const FieldGrid&) const = default;
};

// Unitary DFT A_m = (1/sqrt(M)) sum_i exp(-2*pi*i*m*i/M) a_i and the induced
// congruence transforms of the covariance blocks. FFTW-backed; plans are
// cached per size.
void dft_mean_to_k(VectorXcd& v);
void dft_mean_to_z(VectorXcd& v);

// Cp -> F Cp F^T, Cm -> conj(F) Cm F^T (and inverses).
void dft_cov_to_k(MatrixXcd& cp, MatrixXcd& cm);
void dft_cov_to_z(MatrixXcd& cp, MatrixXcd& cm);

// Cross blocks of two-envelope states: Cp_ab -> F Cp_ab F^T,
// Cm_ab -> conj(F) Cm_ab F^T (same kernels as the same-envelope blocks).
void dft_cross_to_k(MatrixXcd& cp_ab, MatrixXcd& cm_ab);
void dft_cross_to_z(MatrixXcd& cp_ab, MatrixXcd& cm_ab);

// reorder between FFT-standard storage and physical ascending-frequency order
VectorXcd to_physical_order(const FieldGrid& g, const VectorXcd& v);
MatrixXcd to_physical_order(const FieldGrid& g, const MatrixXcd& m);

}  // namespace gssf

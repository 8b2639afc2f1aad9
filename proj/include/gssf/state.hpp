#pragma once

#include <string>

#include "gssf/grid.hpp"

namespace gssf {

namespace phys {
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c_light = 299792458.0;       // m/s
}  // namespace phys

enum class Domain { Z, K };

// Gaussian state of a single envelope: mean plus normal-ordered covariances
// cp = <da da> (symmetric) and cm = <da^dag da> (Hermitian). Vacuum is all
// zeros; the symmetric quadrature form is derived on demand.
struct GaussianEnvelopeState {
  FieldGrid grid;
  Domain domain = Domain::Z;
  VectorXcd mu;
  MatrixXcd cp, cm;

  static GaussianEnvelopeState vacuum(const FieldGrid& g);

  void to_k();
  void to_z();

  // cp <- (cp + cp^T)/2, cm <- (cm + cm^dag)/2; drift control after stepping
  void symmetrize();

  // self += a * other, used by the RK4 drivers
  void add_scaled(const GaussianEnvelopeState& other, double a);

  // residuals of the symmetry/Hermiticity invariants (max abs)
  double structure_residual() const;
};

// Two coupled envelopes (fundamental = a, second harmonic = b) with six
// covariance blocks. cp_ab = <d_a d_b>, cm_ab = <d_a^dag d_b>.
struct TwoEnvelopeState {
  FieldGrid grid;
  Domain domain = Domain::Z;
  VectorXcd mu_a, mu_b;
  MatrixXcd cp_aa, cm_aa, cp_bb, cm_bb, cp_ab, cm_ab;

  static TwoEnvelopeState vacuum(const FieldGrid& g);

  void to_k();
  void to_z();
  void symmetrize();
  void add_scaled(const TwoEnvelopeState& other, double a);
  double structure_residual() const;
};

struct PulseSpec {
  double energy = 0.0;              // J
  double fwhm = 0.0;                // s, FWHM of the sech^2 intensity profile
  double carrier_wavelength = 0.0;  // m
  double delay = 0.0;               // s
  double phase = 0.0;               // rad
};

// Coherent sech pulse with total photon number energy/(h*nu). Throws if the
// pulse does not fit the window (edge amplitude >= 1e-6 of peak).
GaussianEnvelopeState coherent_pulse(const FieldGrid& g, const PulseSpec& spec);
VectorXcd coherent_pulse_mean(const FieldGrid& g, const PulseSpec& spec);

double photon_number(const GaussianEnvelopeState& s);
double photon_number_a(const TwoEnvelopeState& s);
double photon_number_b(const TwoEnvelopeState& s);
double manley_rowe(const TwoEnvelopeState& s);

// diag of cm in k-space (photons per bin mode), FFT-standard order
VectorXd fluorescence_spectrum(const GaussianEnvelopeState& s);

// Real symmetric 2Nx2N covariance of z = (q_1..q_N, p_1..p_N), vacuum = I/2.
// N = M for one envelope; N = 2M (a stacked before b) for two envelopes.
MatrixXd to_quadrature_covariance(const GaussianEnvelopeState& s);
MatrixXd to_quadrature_covariance(const TwoEnvelopeState& s);
MatrixXd quadrature_covariance_from_blocks(const MatrixXcd& cp, const MatrixXcd& cm);

// Minimum eigenvalue of Sigma + (i/2) Omega; >= -1e-8 for physical states.
double physicality_margin(const MatrixXd& sigma);

// Raw little-endian complex128 blocks with a JSON sidecar ("<path>.json").
// Vectors and matrices are written in physical (ascending frequency) order.
void save_state(const GaussianEnvelopeState& s, const std::string& path);
void save_state(const TwoEnvelopeState& s, const std::string& path);
GaussianEnvelopeState load_envelope_state(const std::string& path);
TwoEnvelopeState load_two_envelope_state(const std::string& path);
bool is_two_envelope_file(const std::string& path);

}  // namespace gssf

#pragma once

#include "gssf/chi3.hpp"

namespace gssf {

struct Chi2Params {
  double eps_bin = 0.0;  // discretized three-wave rate, eps/sqrt(dz)
  DispersionSpec disp_a;  // fundamental
  DispersionSpec disp_b;  // second harmonic (includes phase mismatch + GVM)
  double length = 0.0;    // m
  int steps = 0;
  Scheme scheme = Scheme::Rk4ip;
  bool opg_reduced = false;
};

// Full two-envelope nonlinear derivative in z-space.
void chi2_nl_rhs(const TwoEnvelopeState& s, double eps_bin, TwoEnvelopeState& deriv);

// Vacuum-seeded parametric generation: only the pump mean and the signal
// covariances evolve; all other blocks stay identically zero.
void opg_rhs(const VectorXcd& mu_b, const MatrixXcd& cp_aa, const MatrixXcd& cm_aa,
             double eps_bin, VectorXcd& dmu_b, MatrixXcd& dcp_aa, MatrixXcd& dcm_aa);

void chi2_linear_step(TwoEnvelopeState& s, const DispersionSpec& disp_a,
                      const DispersionSpec& disp_b, double dt);

std::vector<TwoEnvelopeState> chi2_propagate(TwoEnvelopeState state, const Chi2Params& p,
                                             std::vector<int> checkpoint_steps);

// Continuum coupling rate from the normalized CW SHG efficiency
// (undepleted limit P_SH = eta0 L^2 P_FH^2), eta0 in 1/(W cm^2) -> sqrt(s)/m.
double epsilon_from_shg_efficiency(double eta0_per_W_cm2, double lambda_fh_m);

// Frequency-dependent FH field loss (1/m): flat floor below the cutoff
// wavelength, half-cosine ramp of the dB value over ramp_m, ceiling above.
VectorXd fh_loss_profile(const FieldGrid& g, double lambda_fh_m, double floor_db_per_m = 30.0,
                         double ceil_db_per_m = 2000.0, double cutoff_m = 2.9e-6,
                         double ramp_m = 50e-9);

}  // namespace gssf

#pragma once

#include "gssf/state.hpp"
#include "gssf/stepper.hpp"

namespace gssf {

// Linear propagation data per grid mode (FFT-standard order): phase rate
// omega (rad per unit evolution parameter) and field loss kappa (>= 0).
struct DispersionSpec {
  VectorXd omega;
  VectorXd kappa;

  // beta0 + gvm*w + (1/2)*gvd*w^2 + (1/6)*tod*w^3 evaluated at the grid
  // frequencies, lossless
  static DispersionSpec from_polynomial(const FieldGrid& g, double beta0, double gvm, double gvd,
                                        double tod);
  void validate(const FieldGrid& g) const;
};

struct Chi3Params {
  double g = 0.0;  // continuum nonlinear rate; per-bin rate is g/dz
  DispersionSpec disp;
  double t_final = 0.0;
  int steps = 0;
  Scheme scheme = Scheme::Rk4ip;
  bool linearized = false;  // drop covariance feedback on the mean and the
                            // covariance corrections in the shorthands
};

// Nonlinear derivative in z-space; writes into deriv (same shape).
void chi3_nl_rhs(const GaussianEnvelopeState& s, double g_bin, bool linearized,
                 GaussianEnvelopeState& deriv);

// Exact linear step in k-space: means pick up e^{(-i*omega-kappa)dt}; cp gets
// sum frequencies, cm difference frequencies, both with additive decay.
void chi3_linear_step(GaussianEnvelopeState& s, const DispersionSpec& disp, double dt);

// Coherent sech soliton of the focusing regime (g*gvd < 0); total photon
// number equals n_bar exactly.
GaussianEnvelopeState soliton_state(const FieldGrid& g, double n_bar, double g_rate, double gvd);
double soliton_width(double n_bar, double g_rate, double gvd);    // z_nbar
double soliton_period(double n_bar, double g_rate, double gvd);   // t_nbar

// Split-step trajectory; returns states (z-space) at the requested
// checkpoint step indices (0..steps, ascending).
std::vector<GaussianEnvelopeState> chi3_propagate(GaussianEnvelopeState state,
                                                  const Chi3Params& p,
                                                  std::vector<int> checkpoint_steps);

}  // namespace gssf

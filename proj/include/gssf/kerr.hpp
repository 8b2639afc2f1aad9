#pragma once

#include <vector>

#include "gssf/grid.hpp"

namespace gssf {

// Single-mode Kerr oscillator H = (1/2) hbar g a^dag^2 a^2 with optional
// linear field decay kappa. Time is measured in units of 1/g (all rates
// entering the ODEs are kappa/g).
struct KerrParams {
  double g = 1.0;      // Kerr rate, 1/s
  double kappa = 0.0;  // field decay rate, 1/s
  complexd alpha0;     // initial coherent amplitude
};

struct KerrMoments {
  complexd mean;    // <a>
  complexd var_a;   // <da da>
  double cov_na;    // <da^dag da>
};

enum class KerrModel { Linearized, Nlg };

// Lossless linearized closed form at tau = |alpha0|^2 g t.
KerrMoments linearized_moments(complexd alpha0, double tau);

// Derivatives with respect to gt; kappa enters as the ratio kappa/g.
KerrMoments linearized_rhs(const KerrMoments& m, const KerrParams& p);
KerrMoments nlg_rhs(const KerrMoments& m, const KerrParams& p);

struct KerrSample {
  double gt;
  KerrMoments m;
};

// Fixed-step RK4 from the coherent initial condition, sampled at every step.
std::vector<KerrSample> kerr_evolve(KerrModel model, const KerrParams& p, double gt_final,
                                    int steps);

double kerr_photon_number(const KerrMoments& m);

// Eigenvalues of the 2x2 symmetric quadrature covariance (vacuum = 1/2).
std::pair<double, double> kerr_quad_variances(const KerrMoments& m);

}  // namespace gssf

#pragma once

#include "gssf/chi2.hpp"
#include "gssf/chi3.hpp"
#include "gssf/config.hpp"
#include "gssf/heterodyne.hpp"

namespace gssf {

struct RunOptions {
  bool convergence_check = false;
  int checkpoint_every = 0;  // 0 = scenario default
  int threads = 1;
};

// Normalized-unit sech soliton study: gvd = 1, g = -2/n_bar so that the
// soliton width is 1 and the soliton period is pi/2.
struct SolitonScenario {
  Chi3Params params;
  GaussianEnvelopeState initial;
  double z_nbar = 1.0;
  double t_nbar = M_PI / 2.0;
};

SolitonScenario make_soliton_scenario(const Config& cfg);

// Pulsed chi^2 devices built from the tabulated waveguide parameters.
struct Chi2Scenario {
  Chi2Params params;
  TwoEnvelopeState initial;
  double lambda_fh = 0.0;          // m
  double photon_energy_fh = 0.0;   // J
  double photon_energy_sh = 0.0;   // J
  CombSpec comb;                   // for beat-note analysis of SCG output
};

Config default_opg_config();
Config default_scg_config();
Chi2Scenario make_chi2_scenario(const Config& cfg);

// Dispatches on cfg key "scenario"; writes checkpoints, spectra, supermode
// tables and a manifest into out_dir. Throws ConfigError for bad configs and
// runtime_error for numerical failures.
void run_scenario(const Config& cfg, const std::string& out_dir, const RunOptions& opts);

// per-step wall time of a chi^3 split step at size M (used by `bench`)
double bench_step_seconds(int M, int reps);

}  // namespace gssf

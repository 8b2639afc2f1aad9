#include "gssf/chi3.hpp"

#include <cmath>
#include <stdexcept>

namespace gssf {

namespace {
const complexd I(0.0, 1.0);
}

DispersionSpec DispersionSpec::from_polynomial(const FieldGrid& g, double beta0, double gvm,
                                               double gvd, double tod) {
  DispersionSpec d;
  d.omega.resize(g.modes);
  d.kappa = VectorXd::Zero(g.modes);
  for (int s = 0; s < g.modes; ++s) {
    double w = g.k_at(s);
    d.omega[s] = beta0 + gvm * w + 0.5 * gvd * w * w + tod * w * w * w / 6.0;
  }
  return d;
}

void DispersionSpec::validate(const FieldGrid& g) const {
  if (omega.size() != g.modes || kappa.size() != g.modes)
    throw std::invalid_argument("dispersion: size mismatch with grid");
  if (!omega.allFinite() || !kappa.allFinite())
    throw std::invalid_argument("dispersion: non-finite entries");
  if (kappa.minCoeff() < 0.0) throw std::invalid_argument("dispersion: negative loss");
}

void chi3_nl_rhs(const GaussianEnvelopeState& s, double g_bin, bool linearized,
                 GaussianEnvelopeState& deriv) {
  if (s.domain != Domain::Z) throw std::invalid_argument("chi3_nl_rhs: state must be in z-space");
  const int m = s.grid.modes;
  deriv.grid = s.grid;
  deriv.domain = Domain::Z;

  VectorXcd s2(m);   // <psi^2> per bin
  VectorXd n(m);     // <psi^dag psi> per bin
  for (int i = 0; i < m; ++i) {
    complexd mu = s.mu[i];
    s2[i] = mu * mu;
    n[i] = std::norm(mu);
    if (!linearized) {
      s2[i] += s.cp(i, i);
      n[i] += s.cm(i, i).real();
    }
  }

  deriv.mu.resize(m);
  for (int i = 0; i < m; ++i) {
    complexd mu = s.mu[i];
    complexd rhs = linearized ? std::norm(mu) * mu
                              : mu * (std::norm(mu) + 2.0 * s.cm(i, i).real()) +
                                    std::conj(mu) * s.cp(i, i);
    deriv.mu[i] = -I * g_bin * rhs;
  }

  deriv.cp.resize(m, m);
  deriv.cm.resize(m, m);
  const complexd mig = -I * g_bin;
  for (int j = 0; j < m; ++j) {
    auto cpj = s.cp.col(j).array();
    auto cmj = s.cm.col(j).array();
    deriv.cp.col(j).array() =
        mig * (s2.array() * cmj + s2[j] * cmj.conjugate() +
               2.0 * (n.array() + n[j]).cast<complexd>() * cpj);
    deriv.cp(j, j) += mig * s2[j];  // Kronecker delta from the commutator
    deriv.cm.col(j).array() =
        mig * (-s2.array().conjugate() * cpj + s2[j] * cpj.conjugate() -
               2.0 * (n.array() - n[j]).cast<complexd>() * cmj);
  }
}

void chi3_linear_step(GaussianEnvelopeState& s, const DispersionSpec& disp, double dt) {
  if (s.domain != Domain::K) throw std::invalid_argument("chi3_linear_step: state must be in k-space");
  if (dt < 0.0) throw std::invalid_argument("chi3_linear_step: dt must be >= 0");
  const int m = s.grid.modes;
  VectorXcd f(m);
  for (int i = 0; i < m; ++i)
    f[i] = std::exp(complexd(-disp.kappa[i] * dt, -disp.omega[i] * dt));
  s.mu.array() *= f.array();
  // cp_mn *= f_m f_n ; cm_mn *= conj(f_m) f_n
  s.cp = f.asDiagonal() * s.cp * f.asDiagonal();
  s.cm = f.conjugate().asDiagonal() * s.cm * f.asDiagonal();
}

double soliton_width(double n_bar, double g_rate, double gvd) {
  return -2.0 * gvd / (g_rate * n_bar);
}

double soliton_period(double n_bar, double g_rate, double gvd) {
  return 2.0 * M_PI * std::abs(gvd) / (g_rate * g_rate * n_bar * n_bar);
}

GaussianEnvelopeState soliton_state(const FieldGrid& g, double n_bar, double g_rate, double gvd) {
  if (!(g_rate * gvd < 0.0))
    throw std::invalid_argument("soliton: requires g*gvd < 0 (modulation instability regime)");
  double zn = soliton_width(n_bar, g_rate, gvd);
  if (g.window < 20.0 * zn) throw std::invalid_argument("soliton: window below 20 soliton widths");
  auto s = GaussianEnvelopeState::vacuum(g);
  double amp = std::sqrt(n_bar * g.dz / (2.0 * zn));
  for (int i = 0; i < g.modes; ++i) s.mu[i] = amp / std::cosh(g.z_at(i) / zn);
  s.mu *= std::sqrt(n_bar / s.mu.squaredNorm());
  return s;
}

std::vector<GaussianEnvelopeState> chi3_propagate(GaussianEnvelopeState state,
                                                  const Chi3Params& p,
                                                  std::vector<int> checkpoint_steps) {
  if (state.domain != Domain::Z) state.to_z();
  p.disp.validate(state.grid);
  StepPlan plan = StepPlan::make(p.t_final, p.steps, p.scheme);
  plan.checkpoint_steps = std::move(checkpoint_steps);
  double g_bin = p.g / state.grid.dz;

  auto nl = [&](const GaussianEnvelopeState& x, GaussianEnvelopeState& d) {
    chi3_nl_rhs(x, g_bin, p.linearized, d);
  };
  auto lin = [&](GaussianEnvelopeState& x, double dt) {
    x.to_k();
    chi3_linear_step(x, p.disp, dt);
    x.to_z();
  };

  std::vector<GaussianEnvelopeState> traj;
  std::function<void(int, GaussianEnvelopeState&)> cb = [&](int, GaussianEnvelopeState& x) {
    if (!x.mu.allFinite()) throw std::runtime_error("chi3_propagate: non-finite state");
    traj.push_back(x);
  };
  propagate(state, plan, nl, lin, cb);
  return traj;
}

}  // namespace gssf

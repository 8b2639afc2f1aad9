#include "gssf/chi2.hpp"

#include <cmath>
#include <stdexcept>

namespace gssf {

void chi2_nl_rhs(const TwoEnvelopeState& s, double eps_bin, TwoEnvelopeState& deriv) {
  if (s.domain != Domain::Z) throw std::invalid_argument("chi2_nl_rhs: state must be in z-space");
  const int m = s.grid.modes;
  deriv.grid = s.grid;
  deriv.domain = Domain::Z;
  const double e = eps_bin;

  const VectorXcd& muf = s.mu_a;
  const VectorXcd& mus = s.mu_b;
  VectorXcd mufc = muf.conjugate();
  VectorXcd musc = mus.conjugate();
  MatrixXcd pab_t = s.cp_ab.transpose();
  MatrixXcd mab_t = s.cm_ab.transpose();

  deriv.mu_a = e * (mus.array() * mufc.array() + s.cm_ab.diagonal().array()).matrix();
  deriv.mu_b =
      -0.5 * e * (muf.array().square() + s.cp_aa.diagonal().array()).matrix();

  deriv.cp_aa.resize(m, m);
  deriv.cm_aa.resize(m, m);
  deriv.cp_bb.resize(m, m);
  deriv.cm_bb.resize(m, m);
  deriv.cp_ab.resize(m, m);
  deriv.cm_ab.resize(m, m);

  for (int j = 0; j < m; ++j) {
    auto paa = s.cp_aa.col(j).array();
    auto maa = s.cm_aa.col(j).array();
    auto pbb = s.cp_bb.col(j).array();
    auto mbb = s.cm_bb.col(j).array();
    auto pab = s.cp_ab.col(j).array();
    auto mab = s.cm_ab.col(j).array();
    auto pabt = pab_t.col(j).array();
    auto mabt = mab_t.col(j).array();

    deriv.cp_aa.col(j).array() =
        e * (mufc.array() * pabt + mus.array() * maa + std::conj(muf[j]) * pab +
             mus[j] * maa.conjugate());
    deriv.cp_aa(j, j) += e * mus[j];  // spontaneous term from the commutator

    deriv.cm_aa.col(j).array() =
        e * (musc.array() * paa + muf.array() * mabt.conjugate() + mus[j] * paa.conjugate() +
             std::conj(muf[j]) * mab);

    deriv.cp_bb.col(j).array() = -e * (muf.array() * pab + muf[j] * pabt);

    deriv.cm_bb.col(j).array() = -e * (mufc.array() * mab + muf[j] * mabt.conjugate());

    deriv.cp_ab.col(j).array() =
        e * (mus.array() * mab + mufc.array() * pbb - muf[j] * paa);

    deriv.cm_ab.col(j).array() =
        e * (musc.array() * pab + muf.array() * mbb - muf[j] * maa);
  }
}

void opg_rhs(const VectorXcd& mu_b, const MatrixXcd& cp_aa, const MatrixXcd& cm_aa,
             double eps_bin, VectorXcd& dmu_b, MatrixXcd& dcp_aa, MatrixXcd& dcm_aa) {
  const auto m = mu_b.size();
  const double e = eps_bin;
  dmu_b = -0.5 * e * cp_aa.diagonal();
  dcp_aa.resize(m, m);
  dcm_aa.resize(m, m);
  for (int j = 0; j < m; ++j) {
    auto paa = cp_aa.col(j).array();
    auto maa = cm_aa.col(j).array();
    dcp_aa.col(j).array() = e * (mu_b.array() * maa + mu_b[j] * maa.conjugate());
    dcp_aa(j, j) += e * mu_b[j];
    dcm_aa.col(j).array() = e * (mu_b.conjugate().array() * paa + mu_b[j] * paa.conjugate());
  }
}

void chi2_linear_step(TwoEnvelopeState& s, const DispersionSpec& disp_a,
                      const DispersionSpec& disp_b, double dt) {
  if (s.domain != Domain::K) throw std::invalid_argument("chi2_linear_step: state must be in k-space");
  if (dt < 0.0) throw std::invalid_argument("chi2_linear_step: dt must be >= 0");
  const int m = s.grid.modes;
  VectorXcd fa(m), fb(m);
  for (int i = 0; i < m; ++i) {
    fa[i] = std::exp(complexd(-disp_a.kappa[i] * dt, -disp_a.omega[i] * dt));
    fb[i] = std::exp(complexd(-disp_b.kappa[i] * dt, -disp_b.omega[i] * dt));
  }
  s.mu_a.array() *= fa.array();
  s.mu_b.array() *= fb.array();
  s.cp_aa = fa.asDiagonal() * s.cp_aa * fa.asDiagonal();
  s.cm_aa = fa.conjugate().asDiagonal() * s.cm_aa * fa.asDiagonal();
  s.cp_bb = fb.asDiagonal() * s.cp_bb * fb.asDiagonal();
  s.cm_bb = fb.conjugate().asDiagonal() * s.cm_bb * fb.asDiagonal();
  s.cp_ab = fa.asDiagonal() * s.cp_ab * fb.asDiagonal();
  s.cm_ab = fa.conjugate().asDiagonal() * s.cm_ab * fb.asDiagonal();
}

namespace {

// reduced container for vacuum-seeded runs: pump mean + signal covariances
struct OpgState {
  FieldGrid grid;
  Domain domain = Domain::Z;
  VectorXcd mu_b;
  MatrixXcd cp_aa, cm_aa;

  void add_scaled(const OpgState& o, double a) {
    mu_b += a * o.mu_b;
    cp_aa += a * o.cp_aa;
    cm_aa += a * o.cm_aa;
  }
  void symmetrize() {
    cp_aa = 0.5 * (cp_aa + cp_aa.transpose()).eval();
    cm_aa = 0.5 * (cm_aa + cm_aa.adjoint()).eval();
  }
};

}  // namespace

std::vector<TwoEnvelopeState> chi2_propagate(TwoEnvelopeState state, const Chi2Params& p,
                                             std::vector<int> checkpoint_steps) {
  if (state.domain != Domain::Z) state.to_z();
  p.disp_a.validate(state.grid);
  p.disp_b.validate(state.grid);
  StepPlan plan = StepPlan::make(p.length, p.steps, p.scheme);
  plan.checkpoint_steps = std::move(checkpoint_steps);

  std::vector<TwoEnvelopeState> traj;

  if (p.opg_reduced) {
    if (state.mu_a.cwiseAbs().maxCoeff() > 0.0)
      throw std::invalid_argument("chi2_propagate: opg mode requires vacuum signal mean");
    OpgState r{state.grid, Domain::Z, state.mu_b, state.cp_aa, state.cm_aa};
    auto nl = [&](const OpgState& x, OpgState& d) {
      opg_rhs(x.mu_b, x.cp_aa, x.cm_aa, p.eps_bin, d.mu_b, d.cp_aa, d.cm_aa);
    };
    auto lin = [&](OpgState& x, double dt) {
      dft_mean_to_k(x.mu_b);
      dft_cov_to_k(x.cp_aa, x.cm_aa);
      const int m = x.grid.modes;
      VectorXcd fa(m), fb(m);
      for (int i = 0; i < m; ++i) {
        fa[i] = std::exp(complexd(-p.disp_a.kappa[i] * dt, -p.disp_a.omega[i] * dt));
        fb[i] = std::exp(complexd(-p.disp_b.kappa[i] * dt, -p.disp_b.omega[i] * dt));
      }
      x.mu_b.array() *= fb.array();
      x.cp_aa = fa.asDiagonal() * x.cp_aa * fa.asDiagonal();
      x.cm_aa = fa.conjugate().asDiagonal() * x.cm_aa * fa.asDiagonal();
      dft_mean_to_z(x.mu_b);
      dft_cov_to_z(x.cp_aa, x.cm_aa);
    };
    std::function<void(int, OpgState&)> cb = [&](int, OpgState& x) {
      if (!x.mu_b.allFinite()) throw std::runtime_error("chi2_propagate: non-finite state");
      TwoEnvelopeState full = state;
      full.mu_b = x.mu_b;
      full.cp_aa = x.cp_aa;
      full.cm_aa = x.cm_aa;
      traj.push_back(std::move(full));
    };
    propagate(r, plan, nl, lin, cb);
    return traj;
  }

  auto nl = [&](const TwoEnvelopeState& x, TwoEnvelopeState& d) {
    chi2_nl_rhs(x, p.eps_bin, d);
  };
  auto lin = [&](TwoEnvelopeState& x, double dt) {
    x.to_k();
    chi2_linear_step(x, p.disp_a, p.disp_b, dt);
    x.to_z();
  };
  std::function<void(int, TwoEnvelopeState&)> cb = [&](int, TwoEnvelopeState& x) {
    if (!x.mu_a.allFinite() || !x.mu_b.allFinite())
      throw std::runtime_error("chi2_propagate: non-finite state");
    traj.push_back(x);
  };
  propagate(state, plan, nl, lin, cb);
  return traj;
}

double epsilon_from_shg_efficiency(double eta0_per_W_cm2, double lambda_fh_m) {
  if (eta0_per_W_cm2 < 0.0 || lambda_fh_m <= 0.0)
    throw std::invalid_argument("epsilon calibration: bad arguments");
  double eta0_si = eta0_per_W_cm2 * 1e4;  // 1/(W cm^2) -> 1/(W m^2)
  double omega1 = 2.0 * M_PI * phys::c_light / lambda_fh_m;
  return std::sqrt(2.0 * phys::hbar * omega1 * eta0_si);
}

VectorXd fh_loss_profile(const FieldGrid& g, double lambda_fh_m, double floor_db_per_m,
                         double ceil_db_per_m, double cutoff_m, double ramp_m) {
  double nu0 = phys::c_light / lambda_fh_m;
  VectorXd kappa(g.modes);
  const double db_to_field = std::log(10.0) / 20.0;
  for (int s = 0; s < g.modes; ++s) {
    double nu = nu0 + g.k_at(s) / (2.0 * M_PI);
    double db;
    if (nu <= 0.0) {
      db = ceil_db_per_m;
    } else {
      double lam = phys::c_light / nu;
      if (lam <= cutoff_m) {
        db = floor_db_per_m;
      } else if (lam >= cutoff_m + ramp_m) {
        db = ceil_db_per_m;
      } else {
        double x = (lam - cutoff_m) / ramp_m;  // 0..1
        db = floor_db_per_m + (ceil_db_per_m - floor_db_per_m) * 0.5 * (1.0 - std::cos(M_PI * x));
      }
    }
    kappa[s] = db * db_to_field;
  }
  return kappa;
}

}  // namespace gssf

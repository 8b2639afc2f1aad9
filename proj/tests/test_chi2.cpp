#include "doctest.h"

#include <cmath>
#include <random>

#include "gssf/chi2.hpp"
#include "gssf/fock.hpp"

using namespace gssf;

namespace {

std::mt19937 rng(90210);

TwoEnvelopeState random_state(const FieldGrid& g) {
  std::normal_distribution<double> nd;
  auto s = TwoEnvelopeState::vacuum(g);
  auto fill_v = [&](VectorXcd& v) {
    for (int i = 0; i < g.modes; ++i) v[i] = complexd(nd(rng), nd(rng));
  };
  auto fill_m = [&](MatrixXcd& m) {
    for (int j = 0; j < g.modes; ++j)
      for (int i = 0; i < g.modes; ++i) m(i, j) = complexd(nd(rng), nd(rng));
  };
  fill_v(s.mu_a);
  fill_v(s.mu_b);
  fill_m(s.cp_aa);
  fill_m(s.cm_aa);
  fill_m(s.cp_bb);
  fill_m(s.cm_bb);
  fill_m(s.cp_ab);
  fill_m(s.cm_ab);
  s.symmetrize();
  return s;
}

DispersionSpec flat(const FieldGrid& g) {
  return DispersionSpec::from_polynomial(g, 0.0, 0.0, 0.0, 0.0);
}

}  // namespace

TEST_CASE("dark input is an exact fixed point") {
  FieldGrid g = FieldGrid::make(8, 2.0);
  auto s = TwoEnvelopeState::vacuum(g);
  TwoEnvelopeState d = s;
  chi2_nl_rhs(s, 2.3, d);
  CHECK(d.mu_a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.mu_b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.cp_aa.cwiseAbs().maxCoeff() == 0.0);
  CHECK(d.cm_ab.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("derivative preserves covariance structure") {
  FieldGrid g = FieldGrid::make(10, 2.0);
  auto s = random_state(g);
  TwoEnvelopeState d = s;
  chi2_nl_rhs(s, 1.4, d);
  CHECK((d.cp_aa - d.cp_aa.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((d.cm_aa - d.cm_aa.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((d.cp_bb - d.cp_bb.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((d.cm_bb - d.cm_bb.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("single bin matches the dense Fock reference") {
  FieldGrid g1{1, 1.0, 1.0, 2.0 * M_PI};
  complexd alpha_a(0.6, 0.2), beta_b(1.5, 0.0);
  double eps = 0.4, t = 0.5;

  auto s = TwoEnvelopeState::vacuum(g1);
  s.mu_a[0] = alpha_a;
  s.mu_b[0] = beta_b;
  Chi2Params p;
  p.eps_bin = eps;
  p.disp_a = flat(g1);
  p.disp_b = flat(g1);
  p.length = t / eps;
  p.steps = 800;
  p.scheme = Scheme::Rk4ip;
  auto out = chi2_propagate(s, p, {p.steps}).back();

  auto fock = chi2_single_bin_evolve(alpha_a, beta_b, 35, 30, {t}).front();
  // moderate interaction strength: the Gaussian closure tracks the exact
  // state at the few-percent level here
  CHECK(std::abs(out.mu_a[0] - fock.mu_a) < 0.05 * std::abs(fock.mu_a));
  CHECK(std::abs(out.mu_b[0] - fock.mu_b) < 0.05 * std::abs(fock.mu_b));
  CHECK(std::abs(out.cm_aa(0, 0) - fock.cm_aa) < 0.05 * (1.0 + std::abs(fock.cm_aa)));
  CHECK(std::abs(out.cp_aa(0, 0) - fock.cp_aa) < 0.05 * (1.0 + std::abs(fock.cp_aa)));
  CHECK(std::abs(out.cm_ab(0, 0) - fock.cm_ab) < 0.05 * (1.0 + std::abs(fock.cm_ab)));
}

TEST_CASE("lossless propagation conserves the weighted photon number") {
  FieldGrid g = FieldGrid::make(16, 1e-12);
  auto s = TwoEnvelopeState::vacuum(g);
  PulseSpec pump;
  pump.energy = 1e-13;
  pump.fwhm = 40e-15;
  pump.carrier_wavelength = 1045e-9;
  s.mu_b = coherent_pulse_mean(g, pump);

  Chi2Params p;
  p.eps_bin = epsilon_from_shg_efficiency(10.0, 2090e-9) / std::sqrt(g.dz);
  p.disp_a = DispersionSpec::from_polynomial(g, 0.0, 2e-12, 1e-26, 0.0);
  p.disp_b = DispersionSpec::from_polynomial(g, 5.0, 0.0, 1e-25, 0.0);
  p.length = 2e-3;
  p.steps = 400;
  p.scheme = Scheme::StrangRk4;
  auto traj = chi2_propagate(s, p, {0, 200, 400});
  double inv0 = manley_rowe(traj.front());
  for (const auto& t : traj) CHECK(std::abs(manley_rowe(t) - inv0) / inv0 < 1e-8);
}

TEST_CASE("vacuum-seeded runs: reduced and full models agree, other blocks stay dark") {
  FieldGrid g = FieldGrid::make(12, 1e-12);
  auto s = TwoEnvelopeState::vacuum(g);
  PulseSpec pump;
  pump.energy = 2e-14;
  pump.fwhm = 40e-15;
  pump.carrier_wavelength = 1045e-9;
  s.mu_b = coherent_pulse_mean(g, pump);

  Chi2Params p;
  p.eps_bin = epsilon_from_shg_efficiency(10.0, 2090e-9) / std::sqrt(g.dz);
  p.disp_a = DispersionSpec::from_polynomial(g, 0.0, 2e-12, 1e-26, 0.0);
  p.disp_b = DispersionSpec::from_polynomial(g, 0.0, 0.0, 1e-25, 0.0);
  p.length = 1e-3;
  p.steps = 200;
  p.scheme = Scheme::StrangRk4;

  auto full = chi2_propagate(s, p, {p.steps}).back();
  p.opg_reduced = true;
  auto red = chi2_propagate(s, p, {p.steps}).back();

  double scale = full.cm_aa.cwiseAbs().maxCoeff();
  CHECK((full.cp_aa - red.cp_aa).cwiseAbs().maxCoeff() / scale < 1e-10);
  CHECK((full.cm_aa - red.cm_aa).cwiseAbs().maxCoeff() / scale < 1e-10);
  CHECK((full.mu_b - red.mu_b).cwiseAbs().maxCoeff() / red.mu_b.cwiseAbs().maxCoeff() < 1e-10);

  // blocks that are invariantly zero for vacuum-seeded inputs
  CHECK(full.mu_a.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(full.cp_bb.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(full.cm_bb.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(full.cp_ab.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(full.cm_ab.cwiseAbs().maxCoeff() < 1e-10);

  // reduced mode refuses a bright signal
  s.mu_a[0] = 1.0;
  CHECK_THROWS(chi2_propagate(s, p, {p.steps}));
}

TEST_CASE("undepleted CW SHG reproduces the calibration efficiency") {
  // P_SH = eta0 L^2 P_FH^2 for CW input without dispersion
  double lambda1 = 2090e-9, eta0 = 10.0;
  double window = 1e-12, p_fh = 1.0, length = 1e-4;
  FieldGrid g = FieldGrid::make(4, window);
  double omega1 = 2.0 * M_PI * phys::c_light / lambda1;
  double hnu1 = phys::hbar * omega1;

  auto s = TwoEnvelopeState::vacuum(g);
  double n_per_bin = p_fh * g.dz / hnu1;
  s.mu_a.setConstant(std::sqrt(n_per_bin));

  Chi2Params p;
  p.eps_bin = epsilon_from_shg_efficiency(eta0, lambda1) / std::sqrt(g.dz);
  p.disp_a = flat(g);
  p.disp_b = flat(g);
  p.length = length;
  p.steps = 50;
  p.scheme = Scheme::Rk4ip;
  auto out = chi2_propagate(s, p, {p.steps}).back();

  double p_sh = out.mu_b.squaredNorm() * 2.0 * hnu1 / window;
  double expect = eta0 * 1e4 * length * length * p_fh * p_fh;
  CHECK(p_sh == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("phase mismatch imprints the classical sinc envelope") {
  FieldGrid g1{1, 1.0, 1.0, 2.0 * M_PI};
  double eps = 1e-3, length = 2.0, dbeta = 4.0;
  auto s = TwoEnvelopeState::vacuum(g1);
  s.mu_a[0] = 30.0;

  Chi2Params p;
  p.eps_bin = eps;
  p.disp_a = flat(g1);
  p.disp_b = flat(g1);
  p.disp_b.omega[0] = dbeta;
  p.length = length;
  p.steps = 2000;
  p.scheme = Scheme::StrangRk4;
  auto out = chi2_propagate(s, p, {p.steps}).back();

  double x = 0.5 * dbeta * length;
  double expect = 0.5 * eps * std::norm(s.mu_a[0]) * length * std::abs(std::sin(x) / x);
  CHECK(std::abs(out.mu_b[0]) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("linear step factorizes over the envelope blocks") {
  FieldGrid g = FieldGrid::make(6, 2.0);
  auto s = random_state(g);
  s.domain = Domain::K;
  DispersionSpec da = flat(g), db = flat(g);
  for (int i = 0; i < 6; ++i) {
    da.omega[i] = 0.3 * i;
    db.omega[i] = -0.2 * i * i;
    da.kappa[i] = 0.05 * i;
  }
  double dt = 0.7;
  VectorXcd fa(6), fb(6);
  for (int i = 0; i < 6; ++i) {
    fa[i] = std::exp(complexd(-da.kappa[i] * dt, -da.omega[i] * dt));
    fb[i] = std::exp(complexd(0.0, -db.omega[i] * dt));
  }
  TwoEnvelopeState out = s;
  chi2_linear_step(out, da, db, dt);
  CHECK((out.mu_a - (fa.array() * s.mu_a.array()).matrix()).cwiseAbs().maxCoeff() < 1e-13);
  MatrixXcd ref = fa.conjugate().asDiagonal() * s.cm_ab * fb.asDiagonal();
  CHECK((out.cm_ab - ref).cwiseAbs().maxCoeff() < 1e-13);
  ref = fa.asDiagonal() * s.cp_ab * fb.asDiagonal();
  CHECK((out.cp_ab - ref).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("loss ramp: floor at the carrier, ceiling past the cutoff") {
  const double db_to_field = std::log(10.0) / 20.0;
  // narrow grid around 2090 nm: everything sits on the floor
  FieldGrid g = FieldGrid::make(64, 2e-12);
  VectorXd kap = fh_loss_profile(g, 2090e-9);
  CHECK(kap.minCoeff() == doctest::Approx(30.0 * db_to_field));
  CHECK(kap.maxCoeff() == doctest::Approx(30.0 * db_to_field));

  // very wide grid: some bins land beyond the ramp or at negative frequency
  FieldGrid w = FieldGrid::make(256, 2e-14);
  VectorXd kw = fh_loss_profile(w, 2090e-9);
  CHECK(kw.maxCoeff() == doctest::Approx(2000.0 * db_to_field));
  CHECK(kw.minCoeff() == doctest::Approx(30.0 * db_to_field));
  for (int i = 0; i < 256; ++i) {
    CHECK(kw[i] >= 30.0 * db_to_field - 1e-12);
    CHECK(kw[i] <= 2000.0 * db_to_field + 1e-12);
  }
}

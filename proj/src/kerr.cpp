#include "gssf/kerr.hpp"

#include <cmath>
#include <stdexcept>

namespace gssf {

namespace {
const complexd I(0.0, 1.0);

KerrMoments scaled(const KerrMoments& m, double a) {
  return {a * m.mean, a * m.var_a, a * m.cov_na};
}

KerrMoments plus(const KerrMoments& x, const KerrMoments& y) {
  return {x.mean + y.mean, x.var_a + y.var_a, x.cov_na + y.cov_na};
}
}  // namespace

KerrMoments linearized_moments(complexd alpha0, double tau) {
  KerrMoments m;
  m.mean = alpha0 * std::exp(-I * tau);
  complexd phase2 = alpha0 == 0.0 ? complexd(1.0) : alpha0 * alpha0 / std::norm(alpha0);
  m.var_a = -phase2 * std::exp(-2.0 * I * tau) * (tau * tau + I * tau);
  m.cov_na = tau * tau;
  return m;
}

KerrMoments linearized_rhs(const KerrMoments& m, const KerrParams& p) {
  double kr = p.kappa / p.g;
  double n = std::norm(m.mean);
  KerrMoments d;
  // fluctuations driven by the classically evolving mean
  d.mean = -I * n * m.mean - kr * m.mean;
  d.var_a = -I * (m.mean * m.mean * (2.0 * m.cov_na + 1.0) + 4.0 * n * m.var_a) - 2.0 * kr * m.var_a;
  complexd dc = -I * (m.mean * m.mean * std::conj(m.var_a) -
                      std::conj(m.mean * m.mean) * m.var_a);
  d.cov_na = dc.real() - 2.0 * kr * m.cov_na;
  return d;
}

KerrMoments nlg_rhs(const KerrMoments& m, const KerrParams& p) {
  double kr = p.kappa / p.g;
  complexd a2 = m.mean * m.mean + m.var_a;            // <a^2>
  double nn = std::norm(m.mean) + m.cov_na;           // <a^dag a>
  KerrMoments d;
  d.mean = -I * (std::conj(m.mean) * m.mean * m.mean + 2.0 * m.mean * m.cov_na +
                 std::conj(m.mean) * m.var_a) -
           kr * m.mean;
  d.var_a = -I * (a2 * (2.0 * m.cov_na + 1.0) + 4.0 * nn * m.var_a) - 2.0 * kr * m.var_a;
  complexd dc = -I * (a2 * std::conj(m.var_a) - std::conj(a2) * m.var_a);
  d.cov_na = dc.real() - 2.0 * kr * m.cov_na;
  return d;
}

std::vector<KerrSample> kerr_evolve(KerrModel model, const KerrParams& p, double gt_final,
                                    int steps) {
  if (steps < 1) throw std::invalid_argument("kerr_evolve: steps must be >= 1");
  auto rhs = model == KerrModel::Linearized ? linearized_rhs : nlg_rhs;
  double h = gt_final / steps;
  KerrMoments m{p.alpha0, 0.0, 0.0};
  std::vector<KerrSample> out;
  out.reserve(steps + 1);
  out.push_back({0.0, m});
  for (int s = 0; s < steps; ++s) {
    KerrMoments k1 = rhs(m, p);
    KerrMoments k2 = rhs(plus(m, scaled(k1, 0.5 * h)), p);
    KerrMoments k3 = rhs(plus(m, scaled(k2, 0.5 * h)), p);
    KerrMoments k4 = rhs(plus(m, scaled(k3, h)), p);
    m = plus(m, scaled(plus(plus(k1, k4), scaled(plus(k2, k3), 2.0)), h / 6.0));
    if (!std::isfinite(m.mean.real()) || !std::isfinite(std::abs(m.var_a)) ||
        !std::isfinite(m.cov_na))
      throw std::runtime_error("kerr_evolve: non-finite state at gt=" + std::to_string((s + 1) * h));
    out.push_back({(s + 1) * h, m});
  }
  return out;
}

double kerr_photon_number(const KerrMoments& m) { return std::norm(m.mean) + m.cov_na; }

std::pair<double, double> kerr_quad_variances(const KerrMoments& m) {
  double base = 0.5 + m.cov_na;
  double off = std::abs(m.var_a);
  return {base + off, base - off};
}

}  // namespace gssf

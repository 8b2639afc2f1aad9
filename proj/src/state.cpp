#include "gssf/state.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gssf {

GaussianEnvelopeState GaussianEnvelopeState::vacuum(const FieldGrid& g) {
  GaussianEnvelopeState s;
  s.grid = g;
  s.domain = Domain::Z;
  s.mu = VectorXcd::Zero(g.modes);
  s.cp = MatrixXcd::Zero(g.modes, g.modes);
  s.cm = MatrixXcd::Zero(g.modes, g.modes);
  return s;
}

void GaussianEnvelopeState::to_k() {
  if (domain == Domain::K) return;
  dft_mean_to_k(mu);
  dft_cov_to_k(cp, cm);
  domain = Domain::K;
}

void GaussianEnvelopeState::to_z() {
  if (domain == Domain::Z) return;
  dft_mean_to_z(mu);
  dft_cov_to_z(cp, cm);
  domain = Domain::Z;
}

void GaussianEnvelopeState::symmetrize() {
  cp = 0.5 * (cp + cp.transpose()).eval();
  cm = 0.5 * (cm + cm.adjoint()).eval();
}

void GaussianEnvelopeState::add_scaled(const GaussianEnvelopeState& o, double a) {
  mu += a * o.mu;
  cp += a * o.cp;
  cm += a * o.cm;
}

double GaussianEnvelopeState::structure_residual() const {
  double r1 = (cp - cp.transpose()).cwiseAbs().maxCoeff();
  double r2 = (cm - cm.adjoint()).cwiseAbs().maxCoeff();
  return std::max(r1, r2);
}

TwoEnvelopeState TwoEnvelopeState::vacuum(const FieldGrid& g) {
  TwoEnvelopeState s;
  s.grid = g;
  s.domain = Domain::Z;
  s.mu_a = VectorXcd::Zero(g.modes);
  s.mu_b = VectorXcd::Zero(g.modes);
  s.cp_aa = MatrixXcd::Zero(g.modes, g.modes);
  s.cm_aa = MatrixXcd::Zero(g.modes, g.modes);
  s.cp_bb = MatrixXcd::Zero(g.modes, g.modes);
  s.cm_bb = MatrixXcd::Zero(g.modes, g.modes);
  s.cp_ab = MatrixXcd::Zero(g.modes, g.modes);
  s.cm_ab = MatrixXcd::Zero(g.modes, g.modes);
  return s;
}

void TwoEnvelopeState::to_k() {
  if (domain == Domain::K) return;
  dft_mean_to_k(mu_a);
  dft_mean_to_k(mu_b);
  dft_cov_to_k(cp_aa, cm_aa);
  dft_cov_to_k(cp_bb, cm_bb);
  dft_cross_to_k(cp_ab, cm_ab);
  domain = Domain::K;
}

void TwoEnvelopeState::to_z() {
  if (domain == Domain::Z) return;
  dft_mean_to_z(mu_a);
  dft_mean_to_z(mu_b);
  dft_cov_to_z(cp_aa, cm_aa);
  dft_cov_to_z(cp_bb, cm_bb);
  dft_cross_to_z(cp_ab, cm_ab);
  domain = Domain::Z;
}

void TwoEnvelopeState::symmetrize() {
  cp_aa = 0.5 * (cp_aa + cp_aa.transpose()).eval();
  cm_aa = 0.5 * (cm_aa + cm_aa.adjoint()).eval();
  cp_bb = 0.5 * (cp_bb + cp_bb.transpose()).eval();
  cm_bb = 0.5 * (cm_bb + cm_bb.adjoint()).eval();
}

void TwoEnvelopeState::add_scaled(const TwoEnvelopeState& o, double a) {
  mu_a += a * o.mu_a;
  mu_b += a * o.mu_b;
  cp_aa += a * o.cp_aa;
  cm_aa += a * o.cm_aa;
  cp_bb += a * o.cp_bb;
  cm_bb += a * o.cm_bb;
  cp_ab += a * o.cp_ab;
  cm_ab += a * o.cm_ab;
}

double TwoEnvelopeState::structure_residual() const {
  double r = (cp_aa - cp_aa.transpose()).cwiseAbs().maxCoeff();
  r = std::max(r, (cm_aa - cm_aa.adjoint()).cwiseAbs().maxCoeff());
  r = std::max(r, (cp_bb - cp_bb.transpose()).cwiseAbs().maxCoeff());
  r = std::max(r, (cm_bb - cm_bb.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

VectorXcd coherent_pulse_mean(const FieldGrid& g, const PulseSpec& spec) {
  if (spec.energy < 0.0) throw std::invalid_argument("pulse: negative energy");
  VectorXcd mu = VectorXcd::Zero(g.modes);
  if (spec.energy == 0.0) return mu;
  if (!(spec.fwhm > 0.0) || !(spec.carrier_wavelength > 0.0))
    throw std::invalid_argument("pulse: fwhm and carrier_wavelength must be positive");

  double nu = phys::c_light / spec.carrier_wavelength;
  double n_total = spec.energy / (phys::h_planck * nu);
  // sech^2 intensity FWHM = 2*acosh(sqrt(2))*tau0
  double tau0 = spec.fwhm / (2.0 * std::acosh(std::sqrt(2.0)));
  complexd ph = std::exp(complexd(0.0, spec.phase));
  // |mu_i|^2 = n_total * dz/(2 tau0) sech^2((z_i-delay)/tau0), sum -> n_total
  double peak = std::sqrt(n_total * g.dz / (2.0 * tau0));
  for (int s = 0; s < g.modes; ++s)
    mu[s] = peak / std::cosh((g.z_at(s) - spec.delay) / tau0) * ph;

  double edge = std::max(std::abs(mu[g.storage_index(-g.modes / 2)]),
                         std::abs(mu[g.storage_index(g.modes / 2 - 1)]));
  if (edge >= 1e-6 * peak) throw std::invalid_argument("pulse: too wide for window");
  return mu;
}

GaussianEnvelopeState coherent_pulse(const FieldGrid& g, const PulseSpec& spec) {
  auto s = GaussianEnvelopeState::vacuum(g);
  s.mu = coherent_pulse_mean(g, spec);
  return s;
}

double photon_number(const GaussianEnvelopeState& s) {
  return s.mu.squaredNorm() + s.cm.diagonal().real().sum();
}

double photon_number_a(const TwoEnvelopeState& s) {
  return s.mu_a.squaredNorm() + s.cm_aa.diagonal().real().sum();
}

double photon_number_b(const TwoEnvelopeState& s) {
  return s.mu_b.squaredNorm() + s.cm_bb.diagonal().real().sum();
}

double manley_rowe(const TwoEnvelopeState& s) {
  return photon_number_a(s) + 2.0 * photon_number_b(s);
}

VectorXd fluorescence_spectrum(const GaussianEnvelopeState& s) {
  if (s.domain == Domain::K) return s.cm.diagonal().real();
  GaussianEnvelopeState k = s;
  k.to_k();
  return k.cm.diagonal().real();
}

MatrixXd quadrature_covariance_from_blocks(const MatrixXcd& cp, const MatrixXcd& cm) {
  const auto n = cp.rows();
  if (cp.cols() != n || cm.rows() != n || cm.cols() != n)
    throw std::invalid_argument("quadrature covariance: shape mismatch");
  MatrixXd sigma(2 * n, 2 * n);
  MatrixXd re_p = cp.real(), im_p = cp.imag();
  MatrixXd re_m = cm.real(), im_m = cm.imag();
  MatrixXd half = 0.5 * MatrixXd::Identity(n, n);
  sigma.topLeftCorner(n, n) = half + re_m + re_p;
  sigma.bottomRightCorner(n, n) = half + re_m - re_p;
  sigma.topRightCorner(n, n) = im_p + im_m;
  sigma.bottomLeftCorner(n, n) = sigma.topRightCorner(n, n).transpose();
  return 0.5 * (sigma + sigma.transpose()).eval();
}

MatrixXd to_quadrature_covariance(const GaussianEnvelopeState& s) {
  if (s.structure_residual() > 1e-9) throw std::invalid_argument("state: symmetry invariant violated");
  return quadrature_covariance_from_blocks(s.cp, s.cm);
}

MatrixXd to_quadrature_covariance(const TwoEnvelopeState& s) {
  if (s.structure_residual() > 1e-9) throw std::invalid_argument("state: symmetry invariant violated");
  const auto m = s.grid.modes;
  MatrixXcd cp(2 * m, 2 * m), cm(2 * m, 2 * m);
  cp << s.cp_aa, s.cp_ab, s.cp_ab.transpose(), s.cp_bb;
  cm << s.cm_aa, s.cm_ab, s.cm_ab.adjoint(), s.cm_bb;
  return quadrature_covariance_from_blocks(cp, cm);
}

double physicality_margin(const MatrixXd& sigma) {
  const auto n2 = sigma.rows();
  const auto n = n2 / 2;
  MatrixXcd test = sigma.cast<complexd>();
  // add (i/2) Omega, Omega = [[0, I], [-I, 0]]
  for (int i = 0; i < n; ++i) {
    test(i, n + i) += complexd(0.0, 0.5);
    test(n + i, i) -= complexd(0.0, 0.5);
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(test, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

using nlohmann::json;

void write_block(std::ofstream& f, json& blocks, const std::string& name, const MatrixXcd& m) {
  blocks.push_back({{"name", name},
                    {"rows", m.rows()},
                    {"cols", m.cols()},
                    {"offset_bytes", static_cast<long long>(f.tellp())}});
  f.write(reinterpret_cast<const char*>(m.data()),
          static_cast<std::streamsize>(sizeof(complexd) * m.size()));
}

MatrixXcd read_block(std::ifstream& f, const json& blk) {
  MatrixXcd m(blk.at("rows").get<long>(), blk.at("cols").get<long>());
  f.seekg(blk.at("offset_bytes").get<long long>());
  f.read(reinterpret_cast<char*>(m.data()),
         static_cast<std::streamsize>(sizeof(complexd) * m.size()));
  if (!f) throw std::runtime_error("state file truncated");
  return m;
}

VectorXcd from_physical_vec(const FieldGrid& g, const MatrixXcd& m) {
  VectorXcd out(g.modes);
  for (int s = 0; s < g.modes; ++s) out[s] = m(g.phys_index(s) + g.modes / 2, 0);
  return out;
}

MatrixXcd from_physical_mat(const FieldGrid& g, const MatrixXcd& m) {
  MatrixXcd out(g.modes, g.modes);
  for (int sj = 0; sj < g.modes; ++sj)
    for (int si = 0; si < g.modes; ++si)
      out(si, sj) = m(g.phys_index(si) + g.modes / 2, g.phys_index(sj) + g.modes / 2);
  return out;
}

json grid_json(const FieldGrid& g, Domain d) {
  return {{"modes", g.modes},
          {"window", g.window},
          {"domain", d == Domain::Z ? "z" : "k"},
          {"ordering", "physical ascending"},
          {"dtype", "complex128 little-endian column-major"},
          {"units", "sqrt(photons) per bin mode"}};
}

void check_grid_json(const json& j) {
  if (!j.contains("modes") || !j.contains("window"))
    throw std::runtime_error("state sidecar missing grid keys");
}

}  // namespace

void save_state(const GaussianEnvelopeState& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  json meta = grid_json(s.grid, s.domain);
  meta["type"] = "envelope";
  json blocks = json::array();
  write_block(f, blocks, "mu", to_physical_order(s.grid, s.mu));
  write_block(f, blocks, "cp", to_physical_order(s.grid, s.cp));
  write_block(f, blocks, "cm", to_physical_order(s.grid, s.cm));
  meta["blocks"] = blocks;
  std::ofstream side(path + ".json", std::ios::trunc);
  side << meta.dump(2) << "\n";
}

void save_state(const TwoEnvelopeState& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  json meta = grid_json(s.grid, s.domain);
  meta["type"] = "two_envelope";
  json blocks = json::array();
  write_block(f, blocks, "mu_a", to_physical_order(s.grid, s.mu_a));
  write_block(f, blocks, "mu_b", to_physical_order(s.grid, s.mu_b));
  write_block(f, blocks, "cp_aa", to_physical_order(s.grid, s.cp_aa));
  write_block(f, blocks, "cm_aa", to_physical_order(s.grid, s.cm_aa));
  write_block(f, blocks, "cp_bb", to_physical_order(s.grid, s.cp_bb));
  write_block(f, blocks, "cm_bb", to_physical_order(s.grid, s.cm_bb));
  write_block(f, blocks, "cp_ab", to_physical_order(s.grid, s.cp_ab));
  write_block(f, blocks, "cm_ab", to_physical_order(s.grid, s.cm_ab));
  meta["blocks"] = blocks;
  std::ofstream side(path + ".json", std::ios::trunc);
  side << meta.dump(2) << "\n";
}

namespace {

json load_sidecar(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw std::runtime_error("missing sidecar " + path + ".json");
  json meta = json::parse(side);
  check_grid_json(meta);
  return meta;
}

const json& find_block(const json& meta, const std::string& name) {
  for (const auto& b : meta.at("blocks"))
    if (b.at("name") == name) return b;
  throw std::runtime_error("state file missing block " + name);
}

}  // namespace

bool is_two_envelope_file(const std::string& path) {
  return load_sidecar(path).at("type") == "two_envelope";
}

GaussianEnvelopeState load_envelope_state(const std::string& path) {
  json meta = load_sidecar(path);
  FieldGrid g = FieldGrid::make(meta.at("modes"), meta.at("window"));
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  GaussianEnvelopeState s = GaussianEnvelopeState::vacuum(g);
  s.domain = meta.at("domain") == "k" ? Domain::K : Domain::Z;
  s.mu = from_physical_vec(g, read_block(f, find_block(meta, "mu")));
  s.cp = from_physical_mat(g, read_block(f, find_block(meta, "cp")));
  s.cm = from_physical_mat(g, read_block(f, find_block(meta, "cm")));
  return s;
}

TwoEnvelopeState load_two_envelope_state(const std::string& path) {
  json meta = load_sidecar(path);
  FieldGrid g = FieldGrid::make(meta.at("modes"), meta.at("window"));
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  TwoEnvelopeState s = TwoEnvelopeState::vacuum(g);
  s.domain = meta.at("domain") == "k" ? Domain::K : Domain::Z;
  s.mu_a = from_physical_vec(g, read_block(f, find_block(meta, "mu_a")));
  s.mu_b = from_physical_vec(g, read_block(f, find_block(meta, "mu_b")));
  s.cp_aa = from_physical_mat(g, read_block(f, find_block(meta, "cp_aa")));
  s.cm_aa = from_physical_mat(g, read_block(f, find_block(meta, "cm_aa")));
  s.cp_bb = from_physical_mat(g, read_block(f, find_block(meta, "cp_bb")));
  s.cm_bb = from_physical_mat(g, read_block(f, find_block(meta, "cm_bb")));
  s.cp_ab = from_physical_mat(g, read_block(f, find_block(meta, "cp_ab")));
  s.cm_ab = from_physical_mat(g, read_block(f, find_block(meta, "cm_ab")));
  return s;
}

}  // namespace gssf

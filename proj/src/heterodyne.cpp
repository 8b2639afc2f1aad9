#include "gssf/heterodyne.hpp"

#include <cmath>
#include <stdexcept>

namespace gssf {

double CombSpec::phi_ceo() const { return 2.0 * M_PI * f_ceo / f_rep; }

void CombSpec::validate() const {
  if (!(f_rep > 0.0)) throw std::invalid_argument("comb: f_rep must be positive");
  if (!(f_ceo > 0.0 && f_ceo < f_rep))
    throw std::invalid_argument("comb: f_ceo must lie in (0, f_rep)");
}

namespace {

bool in_range(const FieldGrid& g, int m) { return m >= -g.modes / 2 && m < g.modes / 2; }

complexd mean_of(const TwoEnvelopeState& s, const ModeLabel& l) {
  if (!in_range(s.grid, l.m)) return 0.0;
  int i = s.grid.storage_index(l.m);
  complexd v = l.envelope == 0 ? s.mu_a[i] : s.mu_b[i];
  return l.dag ? std::conj(v) : v;
}

// order-respecting second central moment <dL1 dL2>
complexd cov_of(const TwoEnvelopeState& s, const ModeLabel& l1, const ModeLabel& l2) {
  if (!in_range(s.grid, l1.m) || !in_range(s.grid, l2.m)) return 0.0;
  if (l1.envelope == l2.envelope) {
    const MatrixXcd& cp = l1.envelope == 0 ? s.cp_aa : s.cp_bb;
    const MatrixXcd& cm = l1.envelope == 0 ? s.cm_aa : s.cm_bb;
    int i = s.grid.storage_index(l1.m), j = s.grid.storage_index(l2.m);
    if (!l1.dag && !l2.dag) return cp(i, j);
    if (l1.dag && l2.dag) return std::conj(cp(i, j));
    if (l1.dag && !l2.dag) return cm(i, j);
    // <da da^dag> = conj(cm) + delta
    return std::conj(cm(i, j)) + (l1.m == l2.m ? 1.0 : 0.0);
  }
  // cross-envelope operators commute; normalize to (a, b) order
  const ModeLabel& a = l1.envelope == 0 ? l1 : l2;
  const ModeLabel& b = l1.envelope == 0 ? l2 : l1;
  int i = s.grid.storage_index(a.m), j = s.grid.storage_index(b.m);
  if (!a.dag && !b.dag) return s.cp_ab(i, j);
  if (a.dag && !b.dag) return s.cm_ab(i, j);
  if (!a.dag && b.dag) return std::conj(s.cm_ab(i, j));
  return std::conj(s.cp_ab(i, j));
}

}  // namespace

complexd fourth_moment_reduced(const TwoEnvelopeState& s, const std::array<ModeLabel, 4>& labels) {
  if (s.domain != Domain::K)
    throw std::invalid_argument("fourth_moment_reduced: state must be in k-space");
  const ModeLabel &x = labels[0], &u = labels[1], &v = labels[2], &y = labels[3];
  complexd mx = mean_of(s, x), mu = mean_of(s, u), mv = mean_of(s, v), my = mean_of(s, y);
  complexd cxu = cov_of(s, x, u), cvy = cov_of(s, v, y);
  complexd cxv = cov_of(s, x, v), cuy = cov_of(s, u, y);
  return (mx * mu + cxu) * cvy + mv * my * cxu + (mx * mv + cxv) * cuy + mu * my * cxv;
}

VectorXd ceo_signal(const TwoEnvelopeState& s, const CombSpec& comb, double* total) {
  if (s.domain != Domain::K) throw std::invalid_argument("ceo_signal: state must be in k-space");
  comb.validate();
  const int half = s.grid.modes / 2;
  VectorXd out(s.grid.modes);
  for (int m = -half; m < half; ++m) {
    int q = m - comb.m0;
    double v = 0.0;
    if (in_range(s.grid, q)) {
      int i = s.grid.storage_index(m), j = s.grid.storage_index(q);
      v = (std::conj(s.mu_a[i]) * s.mu_b[j] + s.cm_ab(i, j)).real();
    }
    out[m + half] = v;
  }
  if (total) *total = comb.f_rep * out.sum();
  return out;
}

HeterodyneReport ceo_noise(const TwoEnvelopeState& s, const CombSpec& comb) {
  if (s.domain != Domain::K) throw std::invalid_argument("ceo_noise: state must be in k-space");
  comb.validate();
  const int mm = s.grid.modes;
  const int half = mm / 2;

  HeterodyneReport rep;
  rep.s = ceo_signal(s, comb, &rep.total_signal);

  double phi = comb.phi_ceo();
  for (double edge = 0.5 * M_PI; edge < 2.0 * M_PI + 1e-9; edge += 0.5 * M_PI)
    if (std::abs(phi - edge) < 1e-6) rep.edge_case = true;
  double sc = std::sin(phi) / phi;
  rep.sinc_sq = sc * sc;

  rep.n_shot.resize(mm);
  rep.n_para.resize(mm);
  rep.n1.resize(mm, mm);
  rep.n2.resize(mm, mm);

  for (int mp = -half; mp < half; ++mp) {
    int qp = mp - comb.m0;
    for (int m = -half; m < half; ++m) {
      int q = m - comb.m0;
      std::array<ModeLabel, 4> l1{{{0, m, true}, {0, mp, true}, {1, qp, false}, {1, q, false}}};
      std::array<ModeLabel, 4> l2{{{0, m, true}, {0, mp, false}, {1, qp, true}, {1, q, false}}};
      rep.n1(m + half, mp + half) = fourth_moment_reduced(s, l1).real();
      rep.n2(m + half, mp + half) = fourth_moment_reduced(s, l2).real();
    }
  }

  double n0_sum = 0.0;
  for (int m = -half; m < half; ++m) {
    int i = s.grid.storage_index(m);
    n0_sum += std::norm(s.mu_a[i]) + s.cm_aa(i, i).real() + std::norm(s.mu_b[i]) +
              s.cm_bb(i, i).real();
    int q = m - comb.m0;
    double shot = std::norm(s.mu_a[i]);
    double para = s.cm_aa(i, i).real();
    if (in_range(s.grid, q)) {
      int j = s.grid.storage_index(q);
      shot += std::norm(s.mu_b[j]);
      para += s.cm_bb(j, j).real();
    }
    para += rep.n1(m + half, m + half) + rep.n2(m + half, m + half);
    rep.n_shot[m + half] = shot;
    rep.n_para[m + half] = para;
  }

  rep.total_variance =
      n0_sum + 0.5 * rep.n1.sum() + 0.5 * rep.n2.sum() * (1.0 + rep.sinc_sq);
  return rep;
}

}  // namespace gssf

#pragma once

#include <array>

#include "gssf/state.hpp"

namespace gssf {

struct CombSpec {
  double f_rep = 0.0;  // Hz
  double f_ceo = 0.0;  // Hz, in (0, f_rep)
  int m0 = 0;          // central FH comb index; SH partner of line m is q = m - m0

  double phi_ceo() const;
  void validate() const;
};

struct HeterodyneReport {
  VectorXd s;            // per-line signal, FH physical index order
  VectorXd n_shot;       // |<A_m>|^2 + |<B_q(m)>|^2
  VectorXd n_para;       // fluorescence + diagonal N1 + N2
  MatrixXd n1, n2;       // cross-line correlations
  double total_signal = 0.0;    // f_rep * sum S
  double total_variance = 0.0;  // <dI^2>/f_rep^2
  double sinc_sq = 0.0;         // sinc^2(phi_ceo), sinc(x) = sin(x)/x
  bool edge_case = false;       // phi_ceo within 1e-6 of pi/2, pi, ...
};

// Mode reference for moment evaluation; m is a physical comb index of the
// given envelope (0 = FH, 1 = SH). Out-of-range indices contribute vacuum.
struct ModeLabel {
  int envelope = 0;
  int m = 0;
  bool dag = false;
};

// <L0 L1 L2 L3> - <L0 L3><L1 L2>, reduced to second moments; exact for
// Gaussian states. State must be in k-space.
complexd fourth_moment_reduced(const TwoEnvelopeState& s, const std::array<ModeLabel, 4>& labels);

// per-line beat signal S(m) = Re<A_m^dag B_q(m)> and its total
VectorXd ceo_signal(const TwoEnvelopeState& s, const CombSpec& comb, double* total = nullptr);

HeterodyneReport ceo_noise(const TwoEnvelopeState& s, const CombSpec& comb);

}  // namespace gssf

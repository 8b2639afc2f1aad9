#pragma once

#include <array>
#include <vector>

#include "gssf/grid.hpp"
#include "gssf/kerr.hpp"

namespace gssf {

// Dense truncated-Fock reference simulators, independent of the Gaussian
// machinery. Single-mode Kerr uses the full master equation; the lossless
// single-bin three-wave system evolves a pure state.

// Moments of a two-mode Gaussian state (modes a, b).
struct TwoModeMoments {
  complexd mu_a, mu_b;
  complexd cp_aa, cm_aa, cp_bb, cm_bb;  // <da da>, <da^dag da> per mode
  complexd cp_ab, cm_ab;                // <da db>, <da^dag db>
};

struct FockLabel {
  int mode = 0;  // 0 = a, 1 = b
  bool dag = false;
};

// Master-equation evolution of H = (1/2) a^dag^2 a^2 (units of g) with decay
// kappa_over_g, from coherent alpha0. Throws if the top Fock level
// accumulates more than 1e-6 population.
std::vector<KerrMoments> kerr_master_evolve(complexd alpha0, double kappa_over_g, int D,
                                            const std::vector<double>& gt_grid);

// Pure-state evolution of H = (1/2)(i b a^dag^2 - i b^dag a^2) (units of eps)
// from a product of coherent states; returns moments on the given eps*t grid.
std::vector<TwoModeMoments> chi2_single_bin_evolve(complexd alpha_a, complexd beta_b, int Da,
                                                   int Db, const std::vector<double>& t_grid);

// Quadratic two-mode Hamiltonian for preparing exactly Gaussian test states:
// H = det_a a^dag a + det_b b^dag b + Re-part squeezers + beamsplitter +
// two-mode squeezer.
struct QuadraticTwoModeSpec {
  complexd disp_a, disp_b;        // initial coherent amplitudes
  complexd squeeze_a, squeeze_b;  // (1/2)(xi a^dag^2 + conj(xi) a^2)
  complexd beamsplit;             // th a^dag b + conj(th) a b^dag
  complexd pair;                  // ze a^dag b^dag + conj(ze) a b
  double detune_a = 0.0, detune_b = 0.0;
  double time = 0.0;
};

using FockWavefunction = MatrixXcd;  // psi(na, nb)

FockWavefunction prepare_gaussian_two_mode(const QuadraticTwoModeSpec& spec, int Da, int Db);

TwoModeMoments fock_moments(const FockWavefunction& psi);

// <L0 L1 L2 L3> in the given operator order.
complexd fock_fourth_moment(const FockWavefunction& psi, const std::array<FockLabel, 4>& labels);

}  // namespace gssf

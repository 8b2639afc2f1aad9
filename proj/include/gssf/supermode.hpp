#pragma once

#include "gssf/state.hpp"

namespace gssf {

struct WilliamsonResult {
  MatrixXd S;   // symplectic, Sigma = S * diag(d, d) * S^T
  VectorXd d;   // symplectic eigenvalues, descending, >= 1/2 for physical states
};

struct BlochMessiahResult {
  MatrixXd o_out, o_in;  // orthogonal symplectic
  VectorXd r;            // squeezing parameters >= 0; Lambda = diag(e^-r, e^+r)
};

struct SupermodeDecomposition {
  MatrixXcd U;              // unitary supermode map, row i = supermode i
  VectorXd r;               // per supermode
  VectorXd n_th;            // thermal populations (descending, own ordering)
  VectorXd squeeze_db;      // -10 log10(2 var_min)
  VectorXd antisqueeze_db;  // +10 log10(2 var_max)
};

// Sigma = S diag(d, d) S^T with S symplectic; Sigma must be symmetric
// positive definite and physical (symplectic eigenvalues >= 1/2 - 1e-6).
WilliamsonResult williamson(const MatrixXd& sigma, double tol = 1e-6);

// S = O_out diag(e^-r, e^+r) O_in with orthogonal symplectic factors,
// r sorted descending.
BlochMessiahResult bloch_messiah(const MatrixXd& S);

SupermodeDecomposition decompose(const MatrixXd& sigma, double tol = 1e-6);
SupermodeDecomposition decompose(const GaussianEnvelopeState& s);
SupermodeDecomposition decompose(const TwoEnvelopeState& s);

// dense symmetric/Hermitian eigensolvers (ascending eigenvalues)
void eigh_real(const MatrixXd& a, VectorXd& evals, MatrixXd& evecs);
void eigh_complex(const MatrixXcd& a, VectorXd& evals, MatrixXcd& evecs);

MatrixXd symplectic_form(int n);  // [[0, I], [-I, 0]]

}  // namespace gssf

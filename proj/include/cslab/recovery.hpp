#pragma once

#include <vector>

#include "cslab/numkit.hpp"

namespace cslab {

/// Support/value representation of a vector in C^N with few nonzeros.
struct SparseSignal {
  std::size_t N = 0;
  std::vector<std::pair<std::size_t, Complex>> entries;  // strictly increasing indices

  ComplexVector dense() const;
};

/// Weights w_j >= 1 for the weighted l1/l0 norms.
struct WeightVector {
  RealVector w;

  explicit WeightVector(RealVector weights);
  static WeightVector ones(std::size_t N);
};

struct RecoveryOutcome {
  ComplexVector estimate;
  std::vector<std::size_t> support;
  double residual_l2 = 0.0;
  std::size_t iterations = 0;
  double objective = 0.0;  // l1 or weighted-l1 value where applicable
  bool converged = true;
  bool degenerate = false;  // zero columns excluded, rank deficiency, ...
};

/// Orthogonal matching pursuit, exactly k greedy iterations on the
/// column-normalized matrix B = A R; final estimate de-normalized.
/// Ties in the selection rule break toward the lowest index.
RecoveryOutcome omp(const ComplexMatrix& A, const ComplexVector& y,
                    std::size_t k);

/// min ||z||_1  s.t.  ||A z - y||_2 <= zeta. Near-optimality certified by a
/// duality gap below tol; iteration cap leaves converged = false.
RecoveryOutcome basis_pursuit(const ComplexMatrix& A, const ComplexVector& y,
                              double zeta, double tol = 1e-8);

/// min sum_j w_j |z_j|  s.t.  ||A z - y||_2 <= zeta.
RecoveryOutcome weighted_basis_pursuit(const ComplexMatrix& A,
                                       const ComplexVector& y,
                                       const WeightVector& w, double zeta,
                                       double tol = 1e-8);

/// Keep the s largest-magnitude entries; ties to the lowest index.
SparseSignal best_s_term(const ComplexVector& x, std::size_t s);

/// (sum_j w_j |x_j|, sum_{x_j != 0} w_j^2)
std::pair<double, double> weighted_norms(const ComplexVector& x,
                                         const WeightVector& w);

}  // namespace cslab

#pragma once

#include <functional>
#include <vector>

#include "cslab/numkit.hpp"

namespace cslab {

/// Evaluatable family (psi_j)_{j<N} on a sample space S with a probability
/// measure mu, uniformly bounded by K_psi and with Riesz constants
/// c_psi <= C_psi (both 1 for orthonormal systems).
struct FunctionSystem {
  std::size_t N = 0;
  double K_psi = 1.0;
  double c_psi = 1.0;
  double C_psi = 1.0;
  std::function<Complex(std::size_t j, double omega)> evaluate;
  std::function<double(RandomStream&)> sampler;
  std::string name;
};

/// An m x N sampled matrix together with the metadata needed to replay it.
struct MeasurementEnsemble {
  ComplexMatrix matrix;  // m x N, scaling already applied
  std::size_t m = 0;
  std::size_t N = 0;
  double scaling = 1.0;  // factor applied to raw rows, e.g. 1/sqrt(m*C)
  std::vector<double> draws;             // continuous sample points
  std::vector<std::size_t> row_draws;    // discrete row indices
  std::vector<double> probabilities;     // discrete density, if applicable
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

struct CoherenceProfile {
  RealVector nu;
  double nu_l1 = 0.0;
};

/// psi_j(w) = exp(2 pi i j w) on [0,1) with uniform measure.
FunctionSystem fourier_system(std::size_t N);

/// xi_q(x) = sqrt(2) sin(q pi x)/(q pi), orthonormal in H^1_0(0,1).
FunctionSystem sine_h10_system(std::size_t N);

/// H^1_0-normalized hierarchical hat basis on dyadic nodes; N = 2^levels - 1.
FunctionSystem hat_hierarchical_system(int levels);

/// Hat-basis geometry: level (1-based), node and support endpoints,
/// normalized slope of the rising edge.
struct HatGeometry {
  int level;
  double left, mid, right;
  double slope;  // +slope on [left,mid], -slope on [mid,right]
};
HatGeometry hat_geometry(std::size_t j);

/// A_ij = psi_j(w_i)/sqrt(m C_psi) with w_i i.i.d. from mu.
MeasurementEnsemble sample_riesz_matrix(const FunctionSystem& sys, std::size_t m,
                                        RandomStream& rng);

/// Tight local coherence nu_j = max_n |B_jn|^2.
CoherenceProfile local_coherence(const ComplexMatrix& B);

/// Row sampler of Sec. coherence-based construction:
/// rows drawn with probability nu_j/||nu||_1 and rescaled by
/// sqrt(||nu||_1/nu_j); final matrix scaled by 1/sqrt(m C_B).
MeasurementEnsemble coherence_sampler(const ComplexMatrix& B,
                                      const CoherenceProfile& profile,
                                      double C_B, std::size_t m,
                                      RandomStream& rng);

/// Exact min/max s-sparse eigenvalues of B^H B by support enumeration.
/// Refuses when C(N,s) exceeds the enumeration cap.
std::pair<double, double> sparse_eigen_bounds(const ComplexMatrix& B,
                                              std::size_t s);

/// Brute-force support enumeration cap shared by the exact verifiers.
inline constexpr std::uint64_t kEnumerationCap = 2'000'000;

/// Number of size-s subsets of [n], saturating at cap+1.
std::uint64_t binomial_capped(std::size_t n, std::size_t s,
                              std::uint64_t cap = kEnumerationCap);

/// Visit all size-s subsets of [0,n) in lexicographic order.
void for_each_support(std::size_t n, std::size_t s,
                      const std::function<void(const std::vector<std::size_t>&)>& fn);

}  // namespace cslab

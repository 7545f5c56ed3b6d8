#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cslab/recovery.hpp"
#include "cslab/systems.hpp"

namespace cslab {

struct RipReport {
  std::size_t s = 0;
  double epsilon_s = 0.0;
  std::vector<std::size_t> extremal_support;
  std::string method;  // "exact" | "monte_carlo"
  std::size_t trials = 0;
  std::uint64_t supports_enumerated = 0;
  bool degenerate = false;  // e.g. empty admissible support family
};

/// epsilon_s = max over |S| = s of ||(A_S)^H A_S - I||_2.
RipReport rip_exact(const ComplexMatrix& A, std::size_t s);

/// Lower bound from random unit s-sparse probes; always <= exact.
RipReport rip_monte_carlo(const ComplexMatrix& A, std::size_t s,
                          std::size_t trials, RandomStream& rng);

/// Weighted RIP over D_{s,N}(w): enumeration of maximal supports with
/// sum_{j in S} w_j^2 <= s.
RipReport weighted_rip_exact(const ComplexMatrix& A, double s,
                             const WeightVector& w);

/// sup over unit s-sparse f of |(1/m) sum |<f,X_i>|^2 - f^H Cov f|,
/// with the rows X_i recovered from the ensemble (scaling undone) and Cov
/// the covariance Gram E[X X^H].
double empirical_process_sup(const MeasurementEnsemble& ensemble,
                             const ComplexMatrix& covariance_gram,
                             std::size_t s);

struct NspEstimate {
  double inf_norm = 0.0;  // Monte Carlo inf of ||Az|| over the cone probe set
  double tau = 0.0;
  bool infinite = false;  // inf hit (numerical) zero
  bool certified = false;  // always false: heuristic lower bound only
  std::size_t trials = 0;
};

/// Monte Carlo estimate of inf ||Az||_2 over unit vectors in
/// (2 + 1/alpha) sqrt(s) B_1; returns tau = 1/inf, flagged non-certified.
NspEstimate nsp_lower_bound(const ComplexMatrix& A, std::size_t s, double alpha,
                            std::size_t trials, RandomStream& rng);

enum class ComplexityRegime { Main, RieszRip, CoherenceRip, CorsingRip };

struct ComplexityInputs {
  double s = 1;
  double N = 1;
  double K = 1.0;       // uniform coordinate bound (regime main / riesz)
  double delta = 0.1;   // regime main
  double eps = 0.5;     // target RIP constant (riesz / coherence / corsing)
  double c_lo = 1.0;    // c_psi or c_B
  double C_hi = 1.0;    // C_psi or C_B
  double nu_l1 = 1.0;   // coherence / corsing
  double gamma = 0.5;   // corsing truncation parameter
  double kappa = 1.0;   // corsing condition number
  double norm_min = 1.0;  // corsing: min{1, C_phi^2 C_xi^2 beta^4}
};

struct ComplexityBound {
  ComplexityRegime regime;
  double m_required = 0.0;
  double failure_probability = 0.0;  // evaluated at m_required
  double eta = 0.0;                  // where applicable
  double admissible_lo = 0.0, admissible_hi = 0.0;  // interval for delta/eps
  std::string note;
};

/// Evaluates the displayed sample-complexity lower bound for the regime.
/// Natural logarithms throughout.
ComplexityBound sample_complexity(ComplexityRegime regime,
                                  const ComplexityInputs& in);

struct PaperConstants {
  double kappa;               // (10 - 7 sqrt 2)/28
  double c0;                  // 1600 (99 + 70 sqrt 2)
  double c1;                  // 492
  double K_bar;               // 12
  double C_omp;               // 49
  double eps_star_normalized; // 1/6
  double eps_star;            // 1/13
  double kappa_cond_limit;    // 13/12
};
PaperConstants paper_constants();

struct WeakCoverEntry {
  std::size_t net_index = 0;
  std::vector<std::size_t> exceptions;  // indices i with overshoot > rho
  double width = 0.0;                   // max over non-exceptions
  bool ok = false;
  std::size_t attempts = 0;
};

struct WeakCover {
  std::vector<ComplexVector> net_points;
  std::vector<WeakCoverEntry> per_target;
  double rho = 0.0;
  double M_cap = 0.0;
  std::size_t L = 0;
  double K = 0.0;  // coordinate bound of the rows, recorded for verification
};

/// Maurey sparsification: each target (a convex combination of the vertex set
/// {+-sqrt(s) e_j, +-sqrt(s) i e_j}) is replaced by an average of L i.i.d.
/// vertex draws, retried until the exception set is within the cap.
WeakCover maurey_weak_cover(const std::vector<ComplexVector>& targets,
                            const ComplexMatrix& X_rows, double s, double rho,
                            double delta, RandomStream& rng);

struct WeakCoverReport {
  bool pass = true;
  std::vector<std::size_t> failed_targets;
};

/// Recomputes every exception set and width independently of the stored ones.
WeakCoverReport verify_weak_cover(const WeakCover& cover,
                                  const std::vector<ComplexVector>& targets,
                                  const ComplexMatrix& X_rows);

}  // namespace cslab

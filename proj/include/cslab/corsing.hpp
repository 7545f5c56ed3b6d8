#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cslab/analysis.hpp"
#include "cslab/recovery.hpp"
#include "cslab/systems.hpp"

namespace cslab {

/// 1D advection-diffusion-reaction data on (0,1):
///   a(u,v) = int mu u'v' + beta_adv u'v + rho_reac u v dx,  F(v) = int f v.
/// Constant coefficients take closed-form assembly; callables fall back to
/// panel quadrature.
struct AdrProblem {
  std::function<double(double)> mu;
  std::function<double(double)> beta_adv;
  std::function<double(double)> rho_reac;
  std::function<double(double)> forcing;
  bool constant_coefficients = false;
  double mu_c = 1.0, beta_c = 0.0, rho_c = 0.0;
  bool constant_forcing = false;
  double forcing_c = 1.0;

  static AdrProblem constant(double mu, double beta_adv, double rho_reac,
                             double forcing);

  /// Ellipticity spot check: min sampled mu must stay positive.
  void validate() const;
};

enum class BasisKind { SineH10, HatHierarchical };

struct PgBasis {
  BasisKind kind = BasisKind::SineH10;
  std::size_t N = 0;   // number of basis functions
  int levels = 0;      // hat basis only

  FunctionSystem system() const;
};

struct PetrovGalerkinSetup {
  PgBasis trial;
  PgBasis test;   // test.N acts as the truncation cap M_max
  double c_phi = 1.0, C_phi = 1.0;
  double c_xi = 1.0, C_xi = 1.0;
  double alpha_infsup = 0.0;
  double beta_cont = 0.0;
};

/// Closed-form inf-sup/continuity constants for constant-coefficient ADR on
/// H^1_0(0,1) (Poincare constant 1/pi):
///   alpha = mu + min(0, rho)/pi^2,  beta = mu + |beta_adv|/pi + |rho|/pi^2.
PetrovGalerkinSetup make_setup(const PgBasis& trial, const PgBasis& test,
                               const AdrProblem& problem);

struct CorsingConfig {
  std::size_t s = 4;
  std::size_t N = 0;          // trial dimension (0: take trial.N)
  double gamma = 0.5;
  std::size_t m = 0;          // 0: ceil(4 s ln N)
  std::uint64_t seed = 0;
  std::size_t omp_iterations = 0;  // 0: K_bar * s (clamped to min(m, N))
  double L_bound = 0.0;       // 0: 10 ||c||_2 / alpha
};

struct CorsingSolution {
  SparseSignal x_hat;
  std::vector<std::size_t> drawn_tests;  // tau_1..tau_m (0-based)
  std::size_t M_used = 0;
  double kappa = 0.0;
  bool kappa_warning = false;  // kappa >= 13/12: outside the OMP guarantee
  double residual_l2 = 0.0;
  double L_bound = 0.0;
  bool truncated = false;
  std::size_t omp_iterations = 0;  // after clamping
  bool omp_degenerate = false;
  double nu_l1 = 0.0;

  /// u_hat(x) = sum_j xhat_j phi_j(x)
  std::function<double(double)> u_hat;
};

/// Full Petrov-Galerkin system B_qj = a(phi_j, xi_q), c_q = F(xi_q).
void assemble_full(const PetrovGalerkinSetup& setup, const AdrProblem& problem,
                   std::size_t N, std::size_t M, ComplexMatrix& B,
                   ComplexVector& c);

/// mu_q^N = sup_j |a(phi_j, xi_q)|^2 from assembled entries (tight profile).
std::pair<RealVector, CoherenceProfile> local_a_coherence(
    const ComplexMatrix& B);

/// Smallest M with sum_{q > M} mu_q <= alpha^2 gamma c_phi c_xi / s.
/// Errors when only the cap itself would satisfy the condition.
std::size_t choose_truncation(const RealVector& mu_tail, double s, double gamma,
                              double alpha_infsup, double c_phi, double c_xi);

/// kappa = C_phi C_xi beta^2 / (c_phi c_xi alpha^2); >= 13/12 is outside the
/// OMP recovery guarantee (warning, not error).
double condition_number_kappa(const PetrovGalerkinSetup& setup);

CorsingSolution corsing_solve(const PetrovGalerkinSetup& setup,
                              const AdrProblem& problem,
                              const CorsingConfig& config);

/// ||sum_j (xhat_j - xref_j) phi_j||_U via the trial Gram.
double h1_error(const ComplexVector& u_hat_coeffs,
                const ComplexVector& reference_coeffs, const PgBasis& trial);

/// RIP prediction inputs for the CORSING matrix at a target eps.
ComplexityBound corsing_rip_inputs(const PetrovGalerkinSetup& setup,
                                   const AdrProblem& problem,
                                   const CorsingConfig& config, double eps);

/// H^1_0 Gram matrix of a basis (identity for the built-in orthonormal ones,
/// computed exactly rather than assumed).
Eigen::MatrixXd basis_gram(const PgBasis& basis, std::size_t N);

}  // namespace cslab

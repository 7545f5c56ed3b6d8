#include "cslab/corsing.hpp"

#include <algorithm>
#include <cmath>

namespace cslab {

namespace {

constexpr double kPi = M_PI;
constexpr double kKbar = 12.0;

// 16-point Gauss-Legendre rule on [-1, 1] (symmetric halves).
constexpr double kGlX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double gl16(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i)
    acc += kGlW[i] * (f(c - h * kGlX[i]) + f(c + h * kGlX[i]));
  return acc * h;
}

double composite_gl16(const std::function<double(double)>& f, double a,
                      double b, std::size_t panels) {
  double acc = 0.0;
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p)
    acc += gl16(f, a + p * h, a + (p + 1) * h);
  return acc;
}

/// int_{x0}^{x1} (p x + r) sin(w x) dx, exact.
double lin_sin_integral(double p, double r, double x0, double x1, double w) {
  auto F = [&](double x) {
    return -(p * x + r) * std::cos(w * x) / w + p * std::sin(w * x) / (w * w);
  };
  return F(x1) - F(x0);
}

struct BasisEval {
  BasisKind kind;
  double value(std::size_t j, double x) const {
    if (kind == BasisKind::SineH10) {
      const double w = (j + 1) * kPi;
      return std::sqrt(2.0) * std::sin(w * x) / w;
    }
    const HatGeometry g = hat_geometry(j);
    if (x <= g.left || x >= g.right) return 0.0;
    return g.slope * (x <= g.mid ? x - g.left : g.right - x);
  }
  double deriv(std::size_t j, double x) const {
    if (kind == BasisKind::SineH10)
      return std::sqrt(2.0) * std::cos((j + 1) * kPi * x);
    const HatGeometry g = hat_geometry(j);
    if (x <= g.left || x >= g.right) return 0.0;
    return x < g.mid ? g.slope : -g.slope;
  }
  std::vector<double> breakpoints(std::size_t j) const {
    if (kind == BasisKind::SineH10) return {};
    const HatGeometry g = hat_geometry(j);
    return {g.left, g.mid, g.right};
  }
  double frequency(std::size_t j) const {
    return kind == BasisKind::SineH10 ? static_cast<double>(j + 1) : 0.0;
  }
};

/// Constant-coefficient closed forms where both factors are known shapes.
double entry_closed(const PetrovGalerkinSetup& setup, const AdrProblem& prob,
                    std::size_t j, std::size_t q) {
  const double mu = prob.mu_c, beta = prob.beta_c, rho = prob.rho_c;
  const BasisKind tk = setup.trial.kind, vk = setup.test.kind;

  if (tk == BasisKind::SineH10 && vk == BasisKind::SineH10) {
    const double jj = static_cast<double>(j + 1), qq = static_cast<double>(q + 1);
    double val = 0.0;
    if (j == q) {
      val += mu + rho / (jj * kPi * jj * kPi);
    } else {
      const bool odd = ((j + q) % 2) != 0;  // jj+qq odd <=> 1-(-1)^(jj+qq)=2
      if (odd) val += beta * 4.0 / (kPi * kPi * (qq * qq - jj * jj));
    }
    return val;
  }

  if (tk == BasisKind::HatHierarchical && vk == BasisKind::SineH10) {
    const HatGeometry g = hat_geometry(j);
    const double a = g.slope;
    const double w = (q + 1) * kPi;
    const double s2 = std::sqrt(2.0);
    double val = 0.0;
    val += mu * s2 * a / w *
           (2.0 * std::sin(w * g.mid) - std::sin(w * g.left) -
            std::sin(w * g.right));
    val += beta * s2 * a / (w * w) *
           (std::cos(w * g.left) + std::cos(w * g.right) -
            2.0 * std::cos(w * g.mid));
    if (rho != 0.0) {
      // rising edge a(x - left), falling edge a(right - x)
      const double rise =
          lin_sin_integral(a, -a * g.left, g.left, g.mid, w);
      const double fall =
          lin_sin_integral(-a, a * g.right, g.mid, g.right, w);
      val += rho * s2 / w * (rise + fall);
    }
    return val;
  }

  if (tk == BasisKind::HatHierarchical && vk == BasisKind::HatHierarchical) {
    // products are piecewise quadratics: Simpson per merged segment is exact
    const BasisEval T{tk}, V{vk};
    const HatGeometry gt = hat_geometry(j), gv = hat_geometry(q);
    const double lo = std::max(gt.left, gv.left);
    const double hi = std::min(gt.right, gv.right);
    if (lo >= hi) return 0.0;
    std::vector<double> bp = {lo, hi};
    for (double b : {gt.mid, gv.mid, gt.left, gt.right, gv.left, gv.right})
      if (b > lo && b < hi) bp.push_back(b);
    std::sort(bp.begin(), bp.end());
    double val = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const double x0 = bp[i], x1 = bp[i + 1], mid = 0.5 * (x0 + x1);
      if (x1 - x0 < 1e-15) continue;
      const double dT = T.deriv(j, mid), dV = V.deriv(q, mid);
      val += mu * dT * dV * (x1 - x0);
      auto fv = [&](double x) { return V.value(q, x); };
      val += beta * dT * (x1 - x0) / 6.0 *
             (fv(x0) + 4.0 * fv(mid) + fv(x1));
      auto fvv = [&](double x) { return T.value(j, x) * V.value(q, x); };
      val += rho * (x1 - x0) / 6.0 * (fvv(x0) + 4.0 * fvv(mid) + fvv(x1));
    }
    return val;
  }

  // sine trial / hat test: the test derivative is piecewise constant and the
  // trial is smooth; exact via the same linear x trig primitives
  const HatGeometry g = hat_geometry(q);
  const double a = g.slope;
  const double w = (j + 1) * kPi;
  const double s2 = std::sqrt(2.0);
  double val = 0.0;
  // mu int phi' xi' = mu s2 cos(wx) * (+-a)
  val += mu * s2 * a / w *
         (2.0 * std::sin(w * g.mid) - std::sin(w * g.left) -
          std::sin(w * g.right));
  if (beta != 0.0) {
    // beta int s2 cos(wx) xi(x): integrate cos against the linear edges
    auto lin_cos = [&](double p, double r, double x0, double x1) {
      auto F = [&](double x) {
        return (p * x + r) * std::sin(w * x) / w + p * std::cos(w * x) / (w * w);
      };
      return F(x1) - F(x0);
    };
    const double rise = lin_cos(a, -a * g.left, g.left, g.mid);
    const double fall = lin_cos(-a, a * g.right, g.mid, g.right);
    val += beta * s2 * (rise + fall);
  }
  if (rho != 0.0) {
    const double rise = lin_sin_integral(a, -a * g.left, g.left, g.mid, w);
    const double fall = lin_sin_integral(-a, a * g.right, g.mid, g.right, w);
    val += rho * s2 / w * (rise + fall);
  }
  return val;
}

/// Quadrature fallback for variable coefficients: composite GL16 on panels
/// aligned to the hat breakpoints, refined with the sine frequency.
double entry_quadrature(const PetrovGalerkinSetup& setup,
                        const AdrProblem& prob, std::size_t j, std::size_t q) {
  const BasisEval T{setup.trial.kind}, V{setup.test.kind};
  std::vector<double> bp = {0.0, 1.0};
  for (double b : T.breakpoints(j))
    if (b > 0.0 && b < 1.0) bp.push_back(b);
  for (double b : V.breakpoints(q))
    if (b > 0.0 && b < 1.0) bp.push_back(b);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  const double freq = std::max(T.frequency(j), V.frequency(q));
  auto integrand = [&](double x) {
    return prob.mu(x) * T.deriv(j, x) * V.deriv(q, x) +
           prob.beta_adv(x) * T.deriv(j, x) * V.value(q, x) +
           prob.rho_reac(x) * T.value(j, x) * V.value(q, x);
  };
  double val = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double len = bp[i + 1] - bp[i];
    if (len < 1e-15) continue;
    const std::size_t panels = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(512.0 * len)),
        static_cast<std::size_t>(std::ceil(2.0 * freq * len)) + 1);
    val += composite_gl16(integrand, bp[i], bp[i + 1], panels);
  }
  if (!std::isfinite(val))
    throw NumericalError("assemble_full: quadrature failure at entry (" +
                         std::to_string(q) + "," + std::to_string(j) + ")");
  return val;
}

double forcing_entry(const PetrovGalerkinSetup& setup, const AdrProblem& prob,
                     std::size_t q) {
  const BasisEval V{setup.test.kind};
  if (prob.constant_forcing) {
    if (setup.test.kind == BasisKind::SineH10) {
      const double qq = static_cast<double>(q + 1);
      const bool odd = (q % 2) == 0;  // frequency q+1 odd
      return odd ? prob.forcing_c * 2.0 * std::sqrt(2.0) / (qq * qq * kPi * kPi)
                 : 0.0;
    }
    const HatGeometry g = hat_geometry(q);
    const double half = 0.5 * (g.right - g.left);
    return prob.forcing_c * g.slope * half * half;
  }
  std::vector<double> bp = {0.0, 1.0};
  for (double b : V.breakpoints(q))
    if (b > 0.0 && b < 1.0) bp.push_back(b);
  std::sort(bp.begin(), bp.end());
  const double freq = V.frequency(q);
  auto integrand = [&](double x) { return prob.forcing(x) * V.value(q, x); };
  double val = 0.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double len = bp[i + 1] - bp[i];
    const std::size_t panels = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(512.0 * len)),
        static_cast<std::size_t>(std::ceil(2.0 * freq * len)) + 1);
    val += composite_gl16(integrand, bp[i], bp[i + 1], panels);
  }
  return val;
}

}  // namespace

AdrProblem AdrProblem::constant(double mu, double beta_adv, double rho_reac,
                                double forcing) {
  AdrProblem p;
  p.constant_coefficients = true;
  p.constant_forcing = true;
  p.mu_c = mu;
  p.beta_c = beta_adv;
  p.rho_c = rho_reac;
  p.forcing_c = forcing;
  p.mu = [mu](double) { return mu; };
  p.beta_adv = [beta_adv](double) { return beta_adv; };
  p.rho_reac = [rho_reac](double) { return rho_reac; };
  p.forcing = [forcing](double) { return forcing; };
  return p;
}

void AdrProblem::validate() const {
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) mn = std::min(mn, mu(i / 200.0));
  if (!(mn > 0.0))
    throw std::invalid_argument(
        "AdrProblem: diffusion coefficient must be positive on (0,1)");
}

FunctionSystem PgBasis::system() const {
  if (kind == BasisKind::SineH10) return sine_h10_system(N);
  return hat_hierarchical_system(levels);
}

PetrovGalerkinSetup make_setup(const PgBasis& trial, const PgBasis& test,
                               const AdrProblem& problem) {
  problem.validate();
  PetrovGalerkinSetup s;
  s.trial = trial;
  s.test = test;
  double mu_min, mu_max, b_max, r_min, r_max;
  if (problem.constant_coefficients) {
    mu_min = mu_max = problem.mu_c;
    b_max = std::abs(problem.beta_c);
    r_min = r_max = problem.rho_c;
  } else {
    mu_min = r_min = std::numeric_limits<double>::infinity();
    mu_max = b_max = 0.0;
    r_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      mu_min = std::min(mu_min, problem.mu(x));
      mu_max = std::max(mu_max, problem.mu(x));
      b_max = std::max(b_max, std::abs(problem.beta_adv(x)));
      r_min = std::min(r_min, problem.rho_reac(x));
      r_max = std::max(r_max, problem.rho_reac(x));
    }
  }
  // Poincare constant 1/pi on (0,1); for constant advection the transport
  // term is skew and drops out of the coercivity bound.
  s.alpha_infsup = mu_min + std::min(0.0, r_min) / (kPi * kPi);
  if (!problem.constant_coefficients || problem.beta_c != 0.0) {
    // keep the conservative bound when advection cannot be integrated away
    if (!(problem.constant_coefficients))
      s.alpha_infsup -= b_max / kPi;
  }
  s.beta_cont = mu_max + b_max / kPi +
                std::max(std::abs(r_min), std::abs(r_max)) / (kPi * kPi);
  if (!(s.alpha_infsup > 0.0))
    throw std::invalid_argument("make_setup: inf-sup constant not positive");
  return s;
}

void assemble_full(const PetrovGalerkinSetup& setup, const AdrProblem& problem,
                   std::size_t N, std::size_t M, ComplexMatrix& B,
                   ComplexVector& c) {
  if (N == 0 || M == 0) throw DimensionError("assemble_full: empty system");
  B.resize(M, N);
  c.resize(M);
  for (std::size_t q = 0; q < M; ++q) {
    for (std::size_t j = 0; j < N; ++j) {
      const double v = problem.constant_coefficients
                           ? entry_closed(setup, problem, j, q)
                           : entry_quadrature(setup, problem, j, q);
      B(q, j) = Complex(v, 0.0);
    }
    c(q) = Complex(forcing_entry(setup, problem, q), 0.0);
  }
  if (!B.allFinite() || !c.allFinite())
    throw NumericalError("assemble_full: non-finite entries");
}

std::pair<RealVector, CoherenceProfile> local_a_coherence(
    const ComplexMatrix& B) {
  CoherenceProfile p = local_coherence(B);
  return {p.nu, p};
}

std::size_t choose_truncation(const RealVector& mu_tail, double s, double gamma,
                              double alpha_infsup, double c_phi, double c_xi) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("choose_truncation: gamma in (0,1) required");
  const std::size_t cap = static_cast<std::size_t>(mu_tail.size());
  if (cap == 0) throw DimensionError("choose_truncation: empty profile");
  const double threshold =
      alpha_infsup * alpha_infsup * gamma * c_phi * c_xi / s;
  // suffix sums: tail(M) = sum_{q > M} mu_q, M in [0, cap]
  std::vector<double> tail(cap + 1, 0.0);
  for (std::size_t q = cap; q > 0; --q)
    tail[q - 1] = tail[q] + mu_tail(q - 1);
  for (std::size_t M = 1; M <= cap; ++M) {
    if (tail[M] <= threshold) {
      if (M == cap)
        throw std::invalid_argument(
            "choose_truncation: test-basis cap insufficient (achieved tail " +
            std::to_string(tail[cap - 1]) + " > threshold " +
            std::to_string(threshold) + " at cap-1)");
      return M;
    }
  }
  throw std::invalid_argument(
      "choose_truncation: condition unreachable within cap (achieved tail " +
      std::to_string(tail[cap]) + ")");
}

double condition_number_kappa(const PetrovGalerkinSetup& setup) {
  if (!(setup.c_phi > 0.0 && setup.c_xi > 0.0 && setup.alpha_infsup > 0.0 &&
        setup.C_phi > 0.0 && setup.C_xi > 0.0 && setup.beta_cont > 0.0))
    throw std::invalid_argument(
        "condition_number_kappa: all constants must be positive");
  return setup.C_phi * setup.C_xi * setup.beta_cont * setup.beta_cont /
         (setup.c_phi * setup.c_xi * setup.alpha_infsup * setup.alpha_infsup);
}

Eigen::MatrixXd basis_gram(const PgBasis& basis, std::size_t N) {
  Eigen::MatrixXd G(N, N);
  if (basis.kind == BasisKind::SineH10) {
    G.setIdentity();
    return G;
  }
  const BasisEval E{basis.kind};
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      const HatGeometry gi = hat_geometry(i), gj = hat_geometry(j);
      const double lo = std::max(gi.left, gj.left);
      const double hi = std::min(gi.right, gj.right);
      double val = 0.0;
      if (lo < hi) {
        std::vector<double> bp = {lo, hi};
        for (double b : {gi.mid, gj.mid})
          if (b > lo && b < hi) bp.push_back(b);
        std::sort(bp.begin(), bp.end());
        for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
          const double mid = 0.5 * (bp[k] + bp[k + 1]);
          val += E.deriv(i, mid) * E.deriv(j, mid) * (bp[k + 1] - bp[k]);
        }
      }
      G(i, j) = G(j, i) = val;
    }
  }
  return G;
}

CorsingSolution corsing_solve(const PetrovGalerkinSetup& setup,
                              const AdrProblem& problem,
                              const CorsingConfig& config) {
  const std::size_t N = config.N ? config.N : setup.trial.N;
  const std::size_t s = config.s;
  if (s == 0 || s > N)
    throw std::invalid_argument("corsing_solve: s in [1, N] required");
  if (!(config.gamma > 0.0 && config.gamma < 1.0))
    throw std::invalid_argument("corsing_solve: gamma in (0,1) required");
  const std::size_t m =
      config.m ? config.m
               : static_cast<std::size_t>(
                     std::ceil(4.0 * s * std::log(static_cast<double>(N))));
  const std::size_t cap = setup.test.N;

  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, problem, N, cap, B, c);

  auto [mu_vec, profile] = local_a_coherence(B);
  const std::size_t M =
      choose_truncation(mu_vec, (kKbar + 1.0) * s, config.gamma,
                        setup.alpha_infsup, setup.c_phi, setup.c_xi);

  RealVector nu = mu_vec.head(M);
  const double nu_l1 = nu.sum();
  if (nu_l1 <= 0.0)
    throw NumericalError("corsing_solve: zero local a-coherence profile");
  std::vector<double> cumulative(M);
  double acc = 0.0;
  for (std::size_t q = 0; q < M; ++q) {
    acc += nu(q) / nu_l1;
    cumulative[q] = acc;
  }
  cumulative.back() = 1.0;

  RandomStream rng(config.seed, 0);
  std::vector<std::size_t> taus(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform();
    taus[i] = std::upper_bound(cumulative.begin(), cumulative.end(), u) -
              cumulative.begin();
  }

  ComplexMatrix DA(m, N);
  ComplexVector Dy(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = nu(taus[i]) / nu_l1;
    const double d = 1.0 / std::sqrt(static_cast<double>(m) * p);
    DA.row(i) = d * B.row(taus[i]);
    Dy(i) = d * c(taus[i]);
  }

  std::size_t k = config.omp_iterations
                      ? config.omp_iterations
                      : static_cast<std::size_t>(kKbar) * s;
  k = std::min({k, m, N});

  RecoveryOutcome rec = omp(DA, Dy, k);

  CorsingSolution sol;
  sol.drawn_tests = std::move(taus);
  sol.M_used = M;
  sol.nu_l1 = nu_l1;
  sol.omp_iterations = k;
  sol.omp_degenerate = rec.degenerate;
  sol.kappa = condition_number_kappa(setup);
  sol.kappa_warning = sol.kappa >= 13.0 / 12.0;

  // Truncation T_L in the U-norm (trial Gram; identity for the built-ins).
  const Eigen::MatrixXd G = basis_gram(setup.trial, N);
  ComplexVector xhat = rec.estimate;
  const double unorm =
      std::sqrt(std::real(xhat.dot(G.cast<Complex>() * xhat)));
  sol.L_bound = config.L_bound > 0.0
                    ? config.L_bound
                    : 10.0 * c.norm() / setup.alpha_infsup;
  if (unorm > sol.L_bound) {
    xhat *= sol.L_bound / unorm;
    sol.truncated = true;
  }
  sol.residual_l2 = (DA * xhat - Dy).norm();

  sol.x_hat.N = N;
  for (std::size_t j = 0; j < N; ++j)
    if (xhat(j) != Complex(0.0)) sol.x_hat.entries.emplace_back(j, xhat(j));

  const FunctionSystem trial_sys = setup.trial.system();
  auto entries = sol.x_hat.entries;
  sol.u_hat = [entries, trial_sys](double x) {
    double v = 0.0;
    for (const auto& [j, val] : entries)
      v += std::real(val * trial_sys.evaluate(j, x));
    return v;
  };
  return sol;
}

double h1_error(const ComplexVector& u_hat_coeffs,
                const ComplexVector& reference_coeffs, const PgBasis& trial) {
  if (u_hat_coeffs.size() != reference_coeffs.size())
    throw DimensionError("h1_error: coefficient length mismatch");
  const Eigen::MatrixXd G =
      basis_gram(trial, static_cast<std::size_t>(u_hat_coeffs.size()));
  const ComplexVector d = u_hat_coeffs - reference_coeffs;
  return std::sqrt(std::real(d.dot(G.cast<Complex>() * d)));
}

ComplexityBound corsing_rip_inputs(const PetrovGalerkinSetup& setup,
                                   const AdrProblem& problem,
                                   const CorsingConfig& config, double eps) {
  const std::size_t N = config.N ? config.N : setup.trial.N;
  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, problem, N, setup.test.N, B, c);
  auto [mu_vec, profile] = local_a_coherence(B);
  const std::size_t M =
      choose_truncation(mu_vec, (kKbar + 1.0) * config.s, config.gamma,
                        setup.alpha_infsup, setup.c_phi, setup.c_xi);

  ComplexityInputs in;
  in.s = static_cast<double>(config.s);
  in.N = static_cast<double>(N);
  in.eps = eps;
  in.gamma = config.gamma;
  in.kappa = condition_number_kappa(setup);
  in.nu_l1 = mu_vec.head(M).sum();
  const double b2 = setup.beta_cont * setup.beta_cont;
  in.norm_min =
      std::min(1.0, setup.C_phi * setup.C_phi * setup.C_xi * setup.C_xi * b2 * b2);
  return sample_complexity(ComplexityRegime::CorsingRip, in);
}

}  // namespace cslab

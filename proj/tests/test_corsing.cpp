#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cslab/corsing.hpp"

using namespace cslab;

namespace {

// High-resolution quadrature oracle for a(phi_j, xi_q): composite Simpson
// aligned with the hat breakpoints (the integrand is smooth per segment).
double entry_oracle(const AdrProblem& p, BasisKind trial_kind, std::size_t j,
                    std::size_t q) {
  auto value = [](BasisKind kind, std::size_t idx, double x) {
    if (kind == BasisKind::SineH10) {
      const double w = (idx + 1) * M_PI;
      return std::sqrt(2.0) * std::sin(w * x) / w;
    }
    const HatGeometry g = hat_geometry(idx);
    if (x <= g.left || x >= g.right) return 0.0;
    return g.slope * (x <= g.mid ? x - g.left : g.right - x);
  };
  // The hat derivative is discontinuous at the breakpoints; `branch` (a point
  // interior to the current panel) decides which side a node on a panel
  // boundary belongs to, so Simpson never samples the wrong branch.
  auto deriv = [](BasisKind kind, std::size_t idx, double x, double branch) {
    if (kind == BasisKind::SineH10)
      return std::sqrt(2.0) * std::cos((idx + 1) * M_PI * x);
    const HatGeometry g = hat_geometry(idx);
    if (branch <= g.left || branch >= g.right) return 0.0;
    return branch < g.mid ? g.slope : -g.slope;
  };
  std::vector<double> bp = {0.0, 1.0};
  if (trial_kind == BasisKind::HatHierarchical) {
    const HatGeometry g = hat_geometry(j);
    bp = {g.left, g.mid, g.right};  // integrand vanishes outside the support
  }
  auto f = [&](double x, double branch) {
    return p.mu(x) * deriv(trial_kind, j, x, branch) *
               deriv(BasisKind::SineH10, q, x, branch) +
           p.beta_adv(x) * deriv(trial_kind, j, x, branch) *
               value(BasisKind::SineH10, q, x) +
           p.rho_reac(x) * value(trial_kind, j, x) *
               value(BasisKind::SineH10, q, x);
  };
  double acc = 0.0;
  for (std::size_t seg = 0; seg + 1 < bp.size(); ++seg) {
    const std::size_t panels = 4000;
    const double h = (bp[seg + 1] - bp[seg]) / panels;
    for (std::size_t i = 0; i < panels; ++i) {
      const double a = bp[seg] + i * h, c = a + 0.5 * h;
      acc += h / 6.0 * (f(a, c) + 4.0 * f(c, c) + f(a + h, c));
    }
  }
  return acc;
}

PetrovGalerkinSetup sine_setup(std::size_t N, std::size_t cap,
                               const AdrProblem& p) {
  PgBasis trial{BasisKind::SineH10, N, 0};
  PgBasis test{BasisKind::SineH10, cap, 0};
  return make_setup(trial, test, p);
}

}  // namespace

TEST_CASE("assemble_full: sine/sine pure diffusion is the identity") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 0.0);
  PetrovGalerkinSetup setup = sine_setup(8, 16, p);
  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, p, 8, 16, B, c);
  for (std::size_t q = 0; q < 16; ++q)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(std::abs(B(q, j) - (q == j ? Complex(1.0) : Complex(0.0))) <
            1e-12);
  CHECK(c.norm() == doctest::Approx(0.0));  // F = 0 gives c = 0
}

TEST_CASE("assemble_full: closed forms match the quadrature oracle") {
  AdrProblem p = AdrProblem::constant(1.3, 0.7, 2.0, 1.0);

  SUBCASE("sine trial") {
    PetrovGalerkinSetup setup = sine_setup(6, 12, p);
    ComplexMatrix B;
    ComplexVector c;
    assemble_full(setup, p, 6, 12, B, c);
    for (std::size_t q = 0; q < 12; ++q)
      for (std::size_t j = 0; j < 6; ++j)
        CHECK(std::abs(B(q, j).real() -
                       entry_oracle(p, BasisKind::SineH10, j, q)) < 1e-8);
  }

  SUBCASE("hat trial, levels = 3, M = 16") {
    PgBasis trial{BasisKind::HatHierarchical, 7, 3};
    PgBasis test{BasisKind::SineH10, 16, 0};
    PetrovGalerkinSetup setup = make_setup(trial, test, p);
    ComplexMatrix B;
    ComplexVector c;
    assemble_full(setup, p, 7, 16, B, c);
    for (std::size_t q = 0; q < 16; ++q)
      for (std::size_t j = 0; j < 7; ++j)
        CHECK(std::abs(B(q, j).real() -
                       entry_oracle(p, BasisKind::HatHierarchical, j, q)) <
              1e-8);
  }

  SUBCASE("variable-coefficient quadrature agrees with the closed forms") {
    AdrProblem v;
    v.mu = [](double) { return 1.3; };
    v.beta_adv = [](double) { return 0.7; };
    v.rho_reac = [](double) { return 2.0; };
    v.forcing = [](double) { return 1.0; };
    PgBasis trial{BasisKind::HatHierarchical, 7, 3};
    PgBasis test{BasisKind::SineH10, 12, 0};
    PetrovGalerkinSetup sc = make_setup(trial, test, p);
    ComplexMatrix Bc, Bv;
    ComplexVector cc, cv;
    assemble_full(sc, p, 7, 12, Bc, cc);
    PetrovGalerkinSetup sv = make_setup(trial, test, v);
    assemble_full(sv, v, 7, 12, Bv, cv);
    CHECK((Bc - Bv).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((cc - cv).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("forcing entries") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
  PetrovGalerkinSetup setup = sine_setup(4, 8, p);
  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, p, 4, 8, B, c);
  for (std::size_t q = 0; q < 8; ++q) {
    const double qq = q + 1.0;
    const double expect =
        (q % 2 == 0) ? 2.0 * std::sqrt(2.0) / (qq * qq * M_PI * M_PI) : 0.0;
    CHECK(c(q).real() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("local_a_coherence identity and scaling") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
  PetrovGalerkinSetup setup = sine_setup(8, 16, p);
  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, p, 8, 16, B, c);
  auto [mu, profile] = local_a_coherence(B);
  for (std::size_t q = 0; q < 16; ++q)
    CHECK(mu(q) == doctest::Approx(q < 8 ? 1.0 : 0.0));

  auto [mu3, p3] = local_a_coherence(ComplexMatrix(3.0 * B));
  for (std::size_t q = 0; q < 16; ++q)
    CHECK(mu3(q) == doctest::Approx(9.0 * mu(q)));
}

TEST_CASE("hat/sine coherence tail decays") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
  PgBasis trial{BasisKind::HatHierarchical, 7, 3};
  PgBasis test{BasisKind::SineH10, 256, 0};
  PetrovGalerkinSetup setup = make_setup(trial, test, p);
  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, p, 7, 256, B, c);
  auto [mu, profile] = local_a_coherence(B);
  // tail sums are monotone decreasing by construction; check actual decay
  double t64 = 0.0, t128 = 0.0;
  for (std::size_t q = 64; q < 256; ++q) t64 += mu(q);
  for (std::size_t q = 128; q < 256; ++q) t128 += mu(q);
  CHECK(t128 < t64);
  CHECK(t64 < mu.sum());
}

TEST_CASE("choose_truncation minimality") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
  PetrovGalerkinSetup setup = sine_setup(8, 16, p);
  ComplexMatrix B;
  ComplexVector c;
  assemble_full(setup, p, 8, 16, B, c);
  auto [mu, profile] = local_a_coherence(B);
  // identity: tail is exactly N - M for M < N, so M = N is minimal
  const std::size_t M = choose_truncation(mu, 1.0, 0.5, 1.0, 1.0, 1.0);
  CHECK(M == 8);
  // minimality: M - 1 violates the truncation condition
  double tail = 0.0;
  for (std::size_t q = M - 1; q < 16; ++q) tail += mu(q);
  CHECK(tail > 0.5 * 1.0 * 1.0 * 1.0 / 1.0);

  // monotone: larger gamma / smaller s can only shrink M
  const std::size_t M2 = choose_truncation(mu, 2.0, 0.5, 1.0, 1.0, 1.0);
  CHECK(M2 >= M);

  // cap insufficient
  RealVector heavy = RealVector::Constant(4, 1.0);
  CHECK_THROWS_AS(choose_truncation(heavy, 1.0, 0.5, 1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("condition_number_kappa") {
  PetrovGalerkinSetup s;
  s.c_phi = s.C_phi = s.c_xi = s.C_xi = 1.0;
  s.alpha_infsup = 1.0;
  s.beta_cont = 1.0;
  CHECK(condition_number_kappa(s) == doctest::Approx(1.0));
  s.beta_cont = 2.0;
  CHECK(condition_number_kappa(s) == doctest::Approx(4.0));
  s.alpha_infsup = 0.0;
  CHECK_THROWS_AS(condition_number_kappa(s), std::invalid_argument);
}

TEST_CASE("basis_gram is the identity for both orthonormal bases") {
  Eigen::MatrixXd Gs = basis_gram(PgBasis{BasisKind::SineH10, 6, 0}, 6);
  CHECK((Gs - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
  Eigen::MatrixXd Gh =
      basis_gram(PgBasis{BasisKind::HatHierarchical, 7, 3}, 7);
  CHECK((Gh - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-9);
}

TEST_CASE("h1_error") {
  PgBasis sine{BasisKind::SineH10, 5, 0};
  ComplexVector a(5), b(5);
  a << 1.0, 2.0, 3.0, 4.0, 5.0;
  b = a;
  CHECK(h1_error(a, b, sine) == doctest::Approx(0.0));
  b(0) -= 1.0;
  CHECK(h1_error(a, b, sine) == doctest::Approx(1.0));

  // hat basis: compare with an aligned midpoint oracle of the H^1 seminorm
  PgBasis hat{BasisKind::HatHierarchical, 7, 3};
  RandomStream rng(3, 0);
  ComplexVector d(7);
  for (int i = 0; i < 7; ++i) d(i) = rng.cnormal();
  ComplexVector zero = ComplexVector::Zero(7);
  const double err = h1_error(d, zero, hat);
  const std::size_t panels = 1024;
  double acc = 0.0;
  for (std::size_t pnl = 0; pnl < panels; ++pnl) {
    const double x = (pnl + 0.5) / panels;
    Complex du(0.0);
    for (std::size_t j = 0; j < 7; ++j) {
      const HatGeometry g = hat_geometry(j);
      if (x > g.left && x < g.right)
        du += d(j) * (x < g.mid ? g.slope : -g.slope);
    }
    acc += std::norm(du) / panels;
  }
  CHECK(err == doctest::Approx(std::sqrt(acc)).epsilon(1e-9));

  ComplexVector wrong(6);
  CHECK_THROWS_AS(h1_error(a, wrong, sine), DimensionError);
}

TEST_CASE("corsing_solve replays a sparse truth on the identity system") {
  // Forcing chosen so that c_q = a(u, xi_q) = x_q for a 3-sparse truth:
  // F = sum_q x_q sqrt(2) q pi sin(q pi x) since -phi_q'' has that form.
  const std::vector<std::size_t> supp = {2, 9, 17};  // frequencies 3, 10, 18
  const std::vector<double> vals = {1.0, -0.6, 0.4};
  AdrProblem p;
  p.constant_coefficients = true;  // mu=1, beta=0, rho=0 closed forms apply
  p.mu_c = 1.0;
  p.mu = [](double) { return 1.0; };
  p.beta_adv = [](double) { return 0.0; };
  p.rho_reac = [](double) { return 0.0; };
  p.constant_forcing = false;
  p.forcing = [&](double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < supp.size(); ++i) {
      const double q = supp[i] + 1.0;
      acc += vals[i] * std::sqrt(2.0) * q * M_PI * std::sin(q * M_PI * x);
    }
    return acc;
  };
  PetrovGalerkinSetup setup = sine_setup(32, 64, p);
  CorsingConfig cfg;
  cfg.s = 3;
  cfg.seed = 5;
  cfg.m = 200;
  cfg.omp_iterations = 3;
  CorsingSolution sol = corsing_solve(setup, p, cfg);
  CHECK(sol.kappa == doctest::Approx(1.0));
  CHECK_FALSE(sol.kappa_warning);
  CHECK(sol.M_used == 32);
  CHECK(sol.drawn_tests.size() == 200);

  bool all_drawn = true;
  for (std::size_t j : supp)
    if (std::find(sol.drawn_tests.begin(), sol.drawn_tests.end(), j) ==
        sol.drawn_tests.end())
      all_drawn = false;
  REQUIRE(all_drawn);  // with m = 200 of M = 32 this is essentially certain
  ComplexVector xhat = sol.x_hat.dense();
  for (std::size_t i = 0; i < supp.size(); ++i)
    CHECK(std::abs(xhat(supp[i]) - Complex(vals[i])) < 1e-8);
  CHECK(sol.residual_l2 < 1e-8);
  // evaluator matches the coefficients
  const double x0 = 0.3;
  double expect = 0.0;
  for (std::size_t i = 0; i < supp.size(); ++i) {
    const double q = supp[i] + 1.0;
    expect += vals[i] * std::sqrt(2.0) * std::sin(q * M_PI * x0) / (q * M_PI);
  }
  CHECK(sol.u_hat(x0) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("corsing_solve is deterministic and honors T_L") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
  PetrovGalerkinSetup setup = sine_setup(31, 128, p);
  CorsingConfig cfg;
  cfg.s = 4;
  cfg.seed = 9;
  CorsingSolution a = corsing_solve(setup, p, cfg);
  CorsingSolution b = corsing_solve(setup, p, cfg);
  CHECK(a.drawn_tests == b.drawn_tests);
  REQUIRE(a.x_hat.entries.size() == b.x_hat.entries.size());
  for (std::size_t i = 0; i < a.x_hat.entries.size(); ++i) {
    CHECK(a.x_hat.entries[i].first == b.x_hat.entries[i].first);
    CHECK(a.x_hat.entries[i].second == b.x_hat.entries[i].second);
  }

  cfg.L_bound = 1e-6;
  CorsingSolution t = corsing_solve(setup, p, cfg);
  CHECK(t.truncated);
  CHECK(t.x_hat.dense().norm() <= 1e-6 * (1 + 1e-9));

  // kappa warning fires for an advection-dominated setup
  AdrProblem adv = AdrProblem::constant(1.0, 1.0, 0.0, 1.0);
  PetrovGalerkinSetup s2 = sine_setup(15, 64, adv);
  CorsingConfig c2;
  c2.s = 2;
  c2.seed = 1;
  CorsingSolution w = corsing_solve(s2, adv, c2);
  CHECK(w.kappa >= 13.0 / 12.0);
  CHECK(w.kappa_warning);
}

TEST_CASE("corsing_rip_inputs") {
  AdrProblem p = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
  PetrovGalerkinSetup setup = sine_setup(16, 64, p);
  CorsingConfig cfg;
  cfg.s = 2;
  cfg.gamma = 0.5;
  ComplexityBound b = corsing_rip_inputs(setup, p, cfg, 0.8);
  CHECK(b.admissible_lo == doctest::Approx(0.5));  // 1 - (1-gamma)/kappa
  CHECK(b.eta == doctest::Approx(0.3));
  CHECK(b.m_required > 0.0);
  CHECK(std::isfinite(b.failure_probability));

  CHECK_THROWS_AS(corsing_rip_inputs(setup, p, cfg, 0.4), std::out_of_range);
}

TEST_CASE("make_setup validates ellipticity") {
  AdrProblem bad;
  bad.mu = [](double) { return -1.0; };
  bad.beta_adv = [](double) { return 0.0; };
  bad.rho_reac = [](double) { return 0.0; };
  bad.forcing = [](double) { return 1.0; };
  PgBasis trial{BasisKind::SineH10, 4, 0};
  PgBasis test{BasisKind::SineH10, 8, 0};
  CHECK_THROWS_AS(make_setup(trial, test, bad), std::invalid_argument);
}

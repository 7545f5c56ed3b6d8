// corsing_lab: batch CLI for RIP analysis, sparse recovery, CORSING solves,
// Maurey coverings, and multi-seed sweeps.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cslab/analysis.hpp"
#include "cslab/corsing.hpp"
#include "cslab/numkit.hpp"
#include "cslab/recovery.hpp"
#include "cslab/systems.hpp"

using nlohmann::json;
using namespace cslab;

namespace {

constexpr const char* kVersion = "corsing_lab 0.1.0";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << text;
}

/// Deterministic task pool: results land in a preallocated slot per task, so
/// output is independent of the worker count.
void run_parallel(std::size_t tasks, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, tasks));
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= tasks) return;
        try {
          fn(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

FunctionSystem make_system(const std::string& name, std::size_t N, int levels) {
  if (name == "fourier") return fourier_system(N);
  if (name == "sine") return sine_h10_system(N);
  if (name == "hat") return hat_hierarchical_system(levels);
  throw std::invalid_argument("unknown system: " + name +
                              " (expected fourier|sine|hat)");
}

std::function<double(double)> named_profile(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "linear") return [](double x) { return 1.0 + 0.5 * x; };
  if (name == "sine_bump")
    return [](double x) { return 1.0 + 0.5 * std::sin(2.0 * M_PI * x); };
  if (name == "hat_mid")
    return [](double x) { return x < 0.5 ? x : 1.0 - x; };
  throw std::invalid_argument("unknown coefficient profile: " + name);
}

struct ProblemFile {
  AdrProblem problem;
  PgBasis trial, test;
  CorsingConfig config;
};

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("problem file is not valid JSON (" + path +
                             "): " + e.what());
  }
  ProblemFile pf;
  auto coeff = [&](const char* key, double dflt, double& const_slot,
                   std::function<double(double)>& fn_slot, bool& is_const) {
    if (!j.contains(key)) {
      const_slot = dflt;
      fn_slot = [dflt](double) { return dflt; };
      return;
    }
    if (j[key].is_number()) {
      const double v = j[key].get<double>();
      const_slot = v;
      fn_slot = [v](double) { return v; };
    } else {
      fn_slot = named_profile(j[key].get<std::string>());
      is_const = false;
    }
  };
  AdrProblem& p = pf.problem;
  p.constant_coefficients = true;
  p.constant_forcing = true;
  coeff("mu", 1.0, p.mu_c, p.mu, p.constant_coefficients);
  coeff("beta", 0.0, p.beta_c, p.beta_adv, p.constant_coefficients);
  coeff("rho", 0.0, p.rho_c, p.rho_reac, p.constant_coefficients);
  coeff("forcing", 1.0, p.forcing_c, p.forcing, p.constant_forcing);

  auto basis = [&](const char* key, std::size_t dflt_N) {
    PgBasis b;
    b.kind = BasisKind::SineH10;
    b.N = dflt_N;
    if (j.contains(key)) {
      const json& bj = j[key];
      const std::string kind = bj.value("kind", "sine");
      if (kind == "hat") {
        b.kind = BasisKind::HatHierarchical;
        b.levels = bj.value("levels", 5);
        b.N = (std::size_t{1} << b.levels) - 1;
      } else if (kind == "sine") {
        b.N = bj.value("N", bj.value("cap", dflt_N));
      } else {
        throw std::invalid_argument("unknown basis kind: " + kind);
      }
    }
    return b;
  };
  pf.trial = basis("trial", 63);
  pf.test = basis("test", 1024);

  if (j.contains("config")) {
    const json& c = j["config"];
    pf.config.s = c.value("s", std::size_t{4});
    pf.config.N = c.value("N", std::size_t{0});
    pf.config.gamma = c.value("gamma", 0.5);
    pf.config.m = c.value("m", std::size_t{0});
    pf.config.seed = c.value("seed", std::uint64_t{0});
    pf.config.omp_iterations = c.value("k", std::size_t{0});
    pf.config.L_bound = c.value("L", 0.0);
  }
  return pf;
}

json config_json(const CorsingConfig& c) {
  return {{"s", c.s},       {"N", c.N},
          {"gamma", c.gamma}, {"m", c.m},
          {"seed", c.seed}, {"k", c.omp_iterations},
          {"L", c.L_bound}};
}

ComplexVector load_vector_csv(const std::string& path) {
  ComplexMatrix M = load_matrix_csv(path);
  if (M.cols() != 1 && M.rows() != 1)
    throw std::runtime_error("expected a vector (one row or column) in " + path);
  if (M.cols() == 1) return M.col(0);
  return M.row(0).transpose();
}

// Exact H^1_0 coefficients of u(x) = x(1-x)/2 in the normalized sine basis,
// and the squared-norm tail beyond the first `upto` frequencies.
double benchmark_coeff(std::size_t q1) {  // q1 is the 1-based frequency
  if (q1 % 2 == 0) return 0.0;
  const double w = q1 * M_PI;
  return 2.0 * std::sqrt(2.0) / (w * w);
}

double benchmark_tail_sq(std::size_t upto) {
  double acc = 1.0 / 12.0;
  for (std::size_t q = 1; q <= upto; ++q) {
    const double c = benchmark_coeff(q);
    acc -= c * c;
  }
  return std::max(0.0, acc);
}

double benchmark_best_s_sq(std::size_t s) {
  // the coefficients decay in q, so the s largest are the first s odd modes
  double acc = 1.0 / 12.0;
  std::size_t q = 1;
  for (std::size_t i = 0; i < s; ++i, q += 2) {
    const double c = benchmark_coeff(q);
    acc -= c * c;
  }
  return std::max(0.0, acc);
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoull(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list option: " + text);
  return out;
}

json rip_report_json(const RipReport& r) {
  return {{"s", r.s},
          {"epsilon_s", r.epsilon_s},
          {"extremal_support", r.extremal_support},
          {"method", r.method},
          {"trials", r.trials},
          {"supports_enumerated", r.supports_enumerated},
          {"degenerate", r.degenerate}};
}

json outcome_json(const RecoveryOutcome& o) {
  std::vector<double> re(o.estimate.size()), im(o.estimate.size());
  for (Eigen::Index j = 0; j < o.estimate.size(); ++j) {
    re[j] = o.estimate(j).real();
    im[j] = o.estimate(j).imag();
  }
  return {{"estimate_re", re},
          {"estimate_im", im},
          {"support", o.support},
          {"residual_l2", o.residual_l2},
          {"iterations", o.iterations},
          {"objective", o.objective},
          {"converged", o.converged},
          {"degenerate", o.degenerate}};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------

int cmd_rip(const std::string& system, std::size_t N, std::size_t m,
            std::size_t s, std::uint64_t seed, bool exact, std::size_t trials,
            const std::string& matrix_path, const std::string& out) {
  ComplexMatrix A;
  json cfg = {{"command", "rip"}, {"s", s}, {"seed", seed},
              {"exact", exact},   {"trials", trials}};
  if (!matrix_path.empty()) {
    A = load_matrix_csv(matrix_path);
    cfg["matrix"] = matrix_path;
  } else {
    FunctionSystem sys = make_system(system, N, 0);
    RandomStream rng(seed, 0);
    A = sample_riesz_matrix(sys, m, rng).matrix;
    cfg["system"] = system;
    cfg["N"] = N;
    cfg["m"] = m;
  }
  RipReport rep;
  if (exact || trials == 0) {
    rep = rip_exact(A, s);
  } else {
    RandomStream rng(seed, 1);
    rep = rip_monte_carlo(A, s, trials, rng);
  }
  json j = {{"version", kVersion}, {"config", cfg}, {"report", rip_report_json(rep)}};
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_recover(const std::string& algo, const std::string& matrix_path,
                const std::string& rhs_path, std::size_t k, double zeta,
                const std::string& weights_path, double rescale,
                const std::string& out) {
  ComplexMatrix A = load_matrix_csv(matrix_path);
  ComplexVector y = load_vector_csv(rhs_path);
  if (rescale != 1.0) A *= rescale;
  json cfg = {{"command", "recover"}, {"algo", algo},  {"matrix", matrix_path},
              {"rhs", rhs_path},      {"k", k},        {"zeta", zeta},
              {"rescale", rescale}};
  RecoveryOutcome o;
  if (algo == "omp") {
    o = omp(A, y, k);
  } else if (algo == "bp") {
    o = basis_pursuit(A, y, zeta);
  } else if (algo == "wbp") {
    if (weights_path.empty())
      throw std::invalid_argument("wbp requires --weights");
    ComplexVector wv = load_vector_csv(weights_path);
    RealVector w = wv.real();
    o = weighted_basis_pursuit(A, y, WeightVector(w), zeta);
    cfg["weights"] = weights_path;
  } else {
    throw std::invalid_argument("unknown --algo: " + algo +
                                " (expected omp|bp|wbp)");
  }
  json j = {{"version", kVersion}, {"config", cfg}, {"result", outcome_json(o)}};
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_corsing(const std::string& problem_path, std::size_t replicas,
                std::size_t grid, std::size_t threads, const std::string& out,
                const std::string& grid_out) {
  ProblemFile pf = load_problem(problem_path);
  PetrovGalerkinSetup setup = make_setup(pf.trial, pf.test, pf.problem);
  const double kappa = condition_number_kappa(setup);
  if (kappa >= 13.0 / 12.0)
    std::cerr << "warning: kappa = " << kappa
              << " >= 13/12; outside the OMP recovery guarantee\n";

  json j = {{"version", kVersion},
            {"config", config_json(pf.config)},
            {"problem", problem_path},
            {"kappa", kappa}};

  if (replicas <= 1) {
    CorsingSolution sol = corsing_solve(setup, pf.problem, pf.config);
    std::vector<std::size_t> idx;
    std::vector<double> re, im;
    for (const auto& [i, v] : sol.x_hat.entries) {
      idx.push_back(i);
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    j["solution"] = {{"x_hat", {{"indices", idx}, {"re", re}, {"im", im}}},
                     {"drawn_tests", sol.drawn_tests},
                     {"M_used", sol.M_used},
                     {"kappa", sol.kappa},
                     {"kappa_warning", sol.kappa_warning},
                     {"residual", sol.residual_l2},
                     {"truncated", sol.truncated},
                     {"omp_iterations", sol.omp_iterations},
                     {"L_bound", sol.L_bound}};
    if (grid > 0) {
      std::ostringstream csv;
      csv << "x,u_hat\n";
      for (std::size_t g = 0; g <= grid; ++g) {
        const double x = static_cast<double>(g) / grid;
        csv << fmt(x) << ',' << fmt(sol.u_hat(x)) << '\n';
      }
      write_text(grid_out.empty() ? "corsing_grid.csv" : grid_out, csv.str());
    }
  } else {
    std::vector<json> reports(replicas);
    std::vector<double> residuals(replicas);
    run_parallel(replicas, threads, [&](std::size_t r) {
      CorsingConfig c = pf.config;
      c.seed = pf.config.seed * 1000003ull + r;
      CorsingSolution sol = corsing_solve(setup, pf.problem, c);
      residuals[r] = sol.residual_l2;
      reports[r] = {{"seed", c.seed},
                    {"M_used", sol.M_used},
                    {"residual", sol.residual_l2},
                    {"truncated", sol.truncated},
                    {"support_size", sol.x_hat.entries.size()}};
    });
    j["replicas"] = reports;
    j["median_residual"] = median(residuals);
  }
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_cover(std::size_t N, std::size_t m, std::size_t s, double delta,
              double rho, std::size_t n_targets, std::uint64_t seed,
              const std::string& out) {
  RandomStream rng(seed, 0);
  // sampling rows: unimodular entries so K = 1 (partial Fourier style)
  ComplexMatrix X(m, N);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const double phase = 2.0 * M_PI * rng.uniform();
      X(i, j) = Complex(std::cos(phase), std::sin(phase));
    }
  // random targets in sqrt(s) B_1: convex combinations of the vertex set
  std::vector<ComplexVector> targets;
  const double rs = std::sqrt(static_cast<double>(s));
  for (std::size_t t = 0; t < n_targets; ++t) {
    ComplexVector f = ComplexVector::Zero(N);
    const std::size_t terms = std::min<std::size_t>(2 * s, N);
    std::vector<double> lam(terms);
    double tot = 0.0;
    for (auto& l : lam) {
      l = -std::log(1.0 - rng.uniform());
      tot += l;
    }
    for (std::size_t i = 0; i < terms; ++i) {
      const std::size_t j = rng.uniform_index(N);
      const std::size_t kind = rng.uniform_index(4);
      const Complex dir = kind == 0   ? Complex(1, 0)
                          : kind == 1 ? Complex(-1, 0)
                          : kind == 2 ? Complex(0, 1)
                                      : Complex(0, -1);
      f(j) += lam[i] / tot * rs * dir;
    }
    targets.push_back(std::move(f));
  }
  RandomStream cover_rng = rng.split(1);
  WeakCover cover = maurey_weak_cover(targets, X, static_cast<double>(s), rho,
                                      delta, cover_rng);
  WeakCoverReport report = verify_weak_cover(cover, targets, X);

  json per = json::array();
  std::size_t max_exceptions = 0;
  for (const auto& e : cover.per_target) {
    max_exceptions = std::max(max_exceptions, e.exceptions.size());
    per.push_back({{"net_index", e.net_index},
                   {"exceptions", e.exceptions.size()},
                   {"width", e.width},
                   {"ok", e.ok},
                   {"attempts", e.attempts}});
  }
  json j = {{"version", kVersion},
            {"config",
             {{"command", "cover"}, {"N", N}, {"m", m}, {"s", s},
              {"delta", delta}, {"rho", rho}, {"targets", n_targets},
              {"seed", seed}}},
            {"L", cover.L},
            {"M_cap", cover.M_cap},
            {"net_size", cover.net_points.size()},
            {"max_exceptions", max_exceptions},
            {"per_target", per},
            {"verified", report.pass}};
  write_text(out, j.dump(2) + "\n");
  if (!report.pass) {
    std::cerr << "cover verification failed for " << report.failed_targets.size()
              << " target(s)\n";
    return 3;
  }
  return 0;
}

int cmd_constants(const std::string& out) {
  PaperConstants c = paper_constants();
  json j = {{"version", kVersion},
            {"kappa", c.kappa},
            {"c0", c.c0},
            {"c1", c.c1},
            {"K_bar", c.K_bar},
            {"C_omp", c.C_omp},
            {"eps_star_normalized", c.eps_star_normalized},
            {"eps_star", c.eps_star},
            {"kappa_cond_limit", c.kappa_cond_limit}};
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_sweep(const std::string& kind, const std::string& system, std::size_t N,
              std::size_t s, const std::string& m_list,
              const std::string& s_list, std::size_t replicas,
              std::uint64_t seed, std::size_t threads, bool timing,
              int hat_levels, const std::string& out) {
  std::ostringstream csv;
  struct Row {
    std::string text;
    double wall_ms = 0.0;
  };
  auto now_ms = [] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };

  if (kind == "rip") {
    const std::vector<std::size_t> ms = parse_list(m_list);
    const std::size_t tasks = ms.size() * replicas;
    std::vector<Row> rows(tasks);
    run_parallel(tasks, threads, [&](std::size_t t) {
      const std::size_t mi = t / replicas, r = t % replicas;
      const std::uint64_t rseed = seed * 1000003ull + r;
      const double t0 = now_ms();
      FunctionSystem sys = make_system(system, N, hat_levels);
      RandomStream rng(rseed, mi);
      ComplexMatrix A = sample_riesz_matrix(sys, ms[mi], rng).matrix;
      RipReport rep = rip_exact(A, s);
      const double t1 = now_ms();
      std::ostringstream line;
      line << rseed << ',' << ms[mi] << ',' << N << ',' << s << ",exact,"
           << fmt(rep.epsilon_s);
      rows[t] = {line.str(), t1 - t0};
    });
    csv << "seed,m,N,s,method,epsilon_s" << (timing ? ",wall_ms" : "") << "\n";
    for (const auto& row : rows) {
      csv << row.text;
      if (timing) csv << ',' << fmt(row.wall_ms);
      csv << '\n';
    }
  } else if (kind == "omp") {
    const std::size_t m =
        static_cast<std::size_t>(std::ceil(8.0 * s * std::log(double(N))));
    std::vector<Row> rows(replicas);
    run_parallel(replicas, threads, [&](std::size_t r) {
      const std::uint64_t rseed = seed * 1000003ull + r;
      const double t0 = now_ms();
      FunctionSystem sys = make_system(system, N, hat_levels);
      RandomStream rng(rseed, 0);
      ComplexMatrix A = sample_riesz_matrix(sys, m, rng).matrix;
      // random s-sparse truth: distinct support, unit-ish coefficients
      RandomStream trng = rng.split(1);
      std::vector<bool> used(N, false);
      ComplexVector x = ComplexVector::Zero(N);
      std::vector<std::size_t> supp;
      while (supp.size() < s) {
        const std::size_t j = trng.uniform_index(N);
        if (used[j]) continue;
        used[j] = true;
        supp.push_back(j);
        Complex v = trng.cnormal();
        while (std::abs(v) < 0.3) v = trng.cnormal();
        x(j) = v;
      }
      std::sort(supp.begin(), supp.end());
      RecoveryOutcome o = omp(A, A * x, s);
      const bool success = o.support == supp;
      const double t1 = now_ms();
      std::ostringstream line;
      line << rseed << ',' << m << ',' << N << ',' << s << ','
           << (success ? 1 : 0) << ',' << fmt(o.residual_l2);
      rows[r] = {line.str(), t1 - t0};
    });
    csv << "seed,m,N,s,success,residual_l2" << (timing ? ",wall_ms" : "")
        << "\n";
    for (const auto& row : rows) {
      csv << row.text;
      if (timing) csv << ',' << fmt(row.wall_ms);
      csv << '\n';
    }
  } else if (kind == "corsing") {
    const std::vector<std::size_t> ss =
        s_list.empty() ? std::vector<std::size_t>{s} : parse_list(s_list);
    PgBasis trial;
    if (system == "hat") {
      trial.kind = BasisKind::HatHierarchical;
      trial.levels = hat_levels;
      trial.N = (std::size_t{1} << hat_levels) - 1;
    } else {
      trial.kind = BasisKind::SineH10;
      trial.N = N;
    }
    PgBasis test;
    test.kind = BasisKind::SineH10;
    test.N = system == "hat" ? 32768 : std::max<std::size_t>(4 * N, 256);
    AdrProblem problem = AdrProblem::constant(1.0, 0.0, 0.0, 1.0);
    PetrovGalerkinSetup setup = make_setup(trial, test, problem);
    ComplexVector xref = ComplexVector::Zero(trial.N);
    double tail_sq = 1.0 / 12.0;
    if (trial.kind == BasisKind::SineH10) {
      for (std::size_t q = 0; q < trial.N; ++q) xref(q) = benchmark_coeff(q + 1);
      tail_sq = benchmark_tail_sq(trial.N);
    }
    const std::size_t tasks = ss.size() * replicas;
    std::vector<Row> rows(tasks);
    run_parallel(tasks, threads, [&](std::size_t t) {
      const std::size_t si = t / replicas, r = t % replicas;
      const std::uint64_t rseed = seed * 1000003ull + r;
      const double t0 = now_ms();
      CorsingConfig cfg;
      cfg.s = ss[si];
      cfg.seed = rseed;
      cfg.omp_iterations = 12 * ss[si];
      CorsingSolution sol = corsing_solve(setup, problem, cfg);
      double err = 0.0;
      if (trial.kind == BasisKind::SineH10) {
        const ComplexVector xh = sol.x_hat.dense();
        err = std::sqrt(std::pow(h1_error(xh, xref, trial), 2) + tail_sq);
      } else {
        err = sol.residual_l2;  // no closed-form reference in this basis
      }
      const std::size_t m = static_cast<std::size_t>(
          std::ceil(4.0 * ss[si] * std::log(double(trial.N))));
      const double t1 = now_ms();
      std::ostringstream line;
      line << rseed << ',' << ss[si] << ',' << m << ',' << trial.N << ','
           << sol.M_used << ',' << fmt(err) << ','
           << fmt(std::sqrt(benchmark_best_s_sq(ss[si])));
      rows[t] = {line.str(), t1 - t0};
    });
    csv << "seed,s,m,N,M_used,h1_error,best_s_term_error"
        << (timing ? ",wall_ms" : "") << "\n";
    for (const auto& row : rows) {
      csv << row.text;
      if (timing) csv << ',' << fmt(row.wall_ms);
      csv << '\n';
    }
  } else {
    throw std::invalid_argument("unknown sweep kind: " + kind +
                                " (expected rip|omp|corsing)");
  }
  write_text(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery and compressive Petrov-Galerkin toolbox"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::size_t threads = 1;
  if (const char* env = std::getenv("CORSING_LAB_THREADS"))
    threads = std::max(1, std::atoi(env));
  app.add_option("--threads", threads,
                 "worker threads (results are independent of this)");

  // rip
  auto* rip = app.add_subcommand("rip", "restricted isometry constants");
  std::string rip_system = "fourier", rip_matrix, rip_out = "-";
  std::size_t rip_N = 32, rip_m = 16, rip_s = 2, rip_trials = 0;
  std::uint64_t rip_seed = 0;
  bool rip_exact_flag = false;
  rip->add_option("--system", rip_system, "fourier|sine|hat");
  rip->add_option("--matrix", rip_matrix, "matrix CSV instead of a builtin system");
  rip->add_option("--N", rip_N);
  rip->add_option("--m", rip_m);
  rip->add_option("--s", rip_s);
  rip->add_option("--seed", rip_seed);
  rip->add_flag("--exact", rip_exact_flag);
  rip->add_option("--trials", rip_trials, "Monte Carlo trials (0 = exact)");
  rip->add_option("--out", rip_out);

  // recover
  auto* rec = app.add_subcommand("recover", "OMP / basis pursuit recovery");
  std::string rec_algo = "omp", rec_matrix, rec_rhs, rec_weights, rec_out = "-";
  std::size_t rec_k = 1;
  double rec_zeta = 0.0, rec_rescale = 1.0;
  rec->add_option("--algo", rec_algo, "omp|bp|wbp");
  rec->add_option("--matrix", rec_matrix)->required();
  rec->add_option("--rhs", rec_rhs)->required();
  rec->add_option("--k", rec_k, "OMP iterations");
  rec->add_option("--zeta", rec_zeta, "constraint radius for bp/wbp");
  rec->add_option("--weights", rec_weights, "weights CSV for wbp");
  rec->add_option("--rescale", rec_rescale,
                  "multiply A by this factor first (e.g. sqrt(C_psi m) to "
                  "switch between raw and rescaled constraint conventions)");
  rec->add_option("--out", rec_out);

  // corsing
  auto* cor = app.add_subcommand("corsing", "compressive Petrov-Galerkin solve");
  std::string cor_problem, cor_out = "-", cor_grid_out;
  std::size_t cor_replicas = 1, cor_grid = 0;
  cor->add_option("--problem", cor_problem, "problem definition JSON")->required();
  cor->add_option("--replicas", cor_replicas);
  cor->add_option("--grid", cor_grid, "sample u_hat on a uniform grid (CSV)");
  cor->add_option("--grid-out", cor_grid_out);
  cor->add_option("--out", cor_out);

  // cover
  auto* cov = app.add_subcommand("cover", "Maurey weak covering benchmark");
  std::size_t cov_N = 32, cov_m = 128, cov_s = 4, cov_targets = 50;
  double cov_delta = 0.25, cov_rho = 1.0;
  std::uint64_t cov_seed = 0;
  std::string cov_out = "-";
  cov->add_option("--N", cov_N);
  cov->add_option("--m", cov_m);
  cov->add_option("--s", cov_s);
  cov->add_option("--delta", cov_delta);
  cov->add_option("--rho", cov_rho);
  cov->add_option("--targets", cov_targets);
  cov->add_option("--seed", cov_seed);
  cov->add_option("--out", cov_out);

  // sweep
  auto* sw = app.add_subcommand("sweep", "multi-seed CSV sweeps");
  std::string sw_kind = "rip", sw_system = "fourier", sw_mlist = "128,512",
              sw_slist, sw_out = "-";
  std::size_t sw_N = 64, sw_s = 3, sw_replicas = 20;
  std::uint64_t sw_seed = 0;
  int sw_levels = 5;
  bool sw_timing = false;
  sw->add_option("--kind", sw_kind, "rip|omp|corsing");
  sw->add_option("--system", sw_system, "fourier|sine|hat");
  sw->add_option("--N", sw_N);
  sw->add_option("--s", sw_s);
  sw->add_option("--m-list", sw_mlist, "comma-separated m grid (rip)");
  sw->add_option("--s-list", sw_slist, "comma-separated s grid (corsing)");
  sw->add_option("--levels", sw_levels, "hat-basis levels");
  sw->add_option("--replicas", sw_replicas);
  sw->add_option("--seed", sw_seed);
  sw->add_flag("--timing", sw_timing, "append a wall_ms column (breaks byte-"
                                      "level reproducibility across runs)");
  sw->add_option("--out", sw_out);

  // constants
  auto* con = app.add_subcommand("constants", "print the recovery-theory constants");
  std::string con_out = "-";
  con->add_option("--out", con_out);

  // let global options such as --threads appear after the subcommand name
  for (CLI::App* sub : app.get_subcommands(
           [](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (rip->parsed())
      return cmd_rip(rip_system, rip_N, rip_m, rip_s, rip_seed, rip_exact_flag,
                     rip_trials, rip_matrix, rip_out);
    if (rec->parsed())
      return cmd_recover(rec_algo, rec_matrix, rec_rhs, rec_k, rec_zeta,
                         rec_weights, rec_rescale, rec_out);
    if (cor->parsed())
      return cmd_corsing(cor_problem, cor_replicas, cor_grid, threads, cor_out,
                         cor_grid_out);
    if (cov->parsed())
      return cmd_cover(cov_N, cov_m, cov_s, cov_delta, cov_rho, cov_targets,
                       cov_seed, cov_out);
    if (sw->parsed())
      return cmd_sweep(sw_kind, sw_system, sw_N, sw_s, sw_mlist, sw_slist,
                       sw_replicas, sw_seed, threads, sw_timing, sw_levels,
                       sw_out);
    if (con->parsed()) return cmd_constants(con_out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

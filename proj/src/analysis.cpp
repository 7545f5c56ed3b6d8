#include "cslab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace cslab {

namespace {

/// max_i |lambda_i(G_S) - 1| for the Hermitian submatrix G_S of the Gram.
double gram_deviation(const ComplexMatrix& G, const std::vector<std::size_t>& S,
                      ComplexMatrix& scratch) {
  const std::size_t s = S.size();
  scratch.resize(s, s);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) scratch(a, b) = G(S[a], S[b]);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(scratch);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0) - 1.0), std::abs(ev(s - 1) - 1.0));
}

}  // namespace

RipReport rip_exact(const ComplexMatrix& A, std::size_t s) {
  const std::size_t N = static_cast<std::size_t>(A.cols());
  if (N == 0 || A.rows() == 0) throw DimensionError("rip_exact: empty matrix");
  if (s == 0 || s > N)
    throw std::invalid_argument("rip_exact: s in [1, N] required");
  if (binomial_capped(N, s) > kEnumerationCap)
    throw std::invalid_argument(
        "rip_exact: C(N,s) exceeds enumeration cap; use rip_monte_carlo");

  const ComplexMatrix G = A.adjoint() * A;
  RipReport rep;
  rep.s = s;
  rep.method = "exact";
  ComplexMatrix scratch;
  for_each_support(N, s, [&](const std::vector<std::size_t>& S) {
    ++rep.supports_enumerated;
    const double dev = gram_deviation(G, S, scratch);
    if (dev > rep.epsilon_s) {
      rep.epsilon_s = dev;
      rep.extremal_support = S;
    }
  });
  return rep;
}

RipReport rip_monte_carlo(const ComplexMatrix& A, std::size_t s,
                          std::size_t trials, RandomStream& rng) {
  const std::size_t N = static_cast<std::size_t>(A.cols());
  if (N == 0 || A.rows() == 0)
    throw DimensionError("rip_monte_carlo: empty matrix");
  if (s == 0 || s > N)
    throw std::invalid_argument("rip_monte_carlo: s in [1, N] required");
  if (trials == 0)
    throw std::invalid_argument("rip_monte_carlo: trials >= 1 required");

  const ComplexMatrix G = A.adjoint() * A;
  RipReport rep;
  rep.s = s;
  rep.method = "monte_carlo";
  rep.trials = trials;

  std::vector<std::size_t> S;
  ComplexVector f(s);
  for (std::size_t t = 0; t < trials; ++t) {
    // support uniform over C(N,s): rejection until s distinct indices
    S.clear();
    while (S.size() < s) {
      const std::size_t j = rng.uniform_index(N);
      if (std::find(S.begin(), S.end(), j) == S.end()) S.push_back(j);
    }
    std::sort(S.begin(), S.end());
    for (std::size_t i = 0; i < s; ++i) f(i) = rng.cnormal();
    f /= f.norm();
    Complex q(0.0);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        q += std::conj(f(a)) * G(S[a], S[b]) * f(b);
    const double dev = std::abs(q.real() - 1.0);
    if (dev > rep.epsilon_s) {
      rep.epsilon_s = dev;
      rep.extremal_support = S;
    }
  }
  return rep;
}

RipReport weighted_rip_exact(const ComplexMatrix& A, double s,
                             const WeightVector& w) {
  const std::size_t N = static_cast<std::size_t>(A.cols());
  if (N == 0 || A.rows() == 0)
    throw DimensionError("weighted_rip_exact: empty matrix");
  if (w.w.size() != static_cast<Eigen::Index>(N))
    throw DimensionError("weighted_rip_exact: weights length != N");

  const ComplexMatrix G = A.adjoint() * A;
  RipReport rep;
  rep.s = 0;
  rep.method = "exact";
  ComplexMatrix scratch;

  double min_w2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < w.w.size(); ++j)
    min_w2 = std::min(min_w2, w.w(j) * w.w(j));
  if (s < min_w2) {
    rep.degenerate = true;  // only the empty support is admissible
    return rep;
  }

  // DFS over supports with increasing indices; evaluate maximal ones only
  // (the sup over D_{s,N}(w) is attained on a maximal admissible support).
  std::vector<std::size_t> S;
  std::uint64_t evaluated = 0;
  auto is_maximal = [&](double budget) {
    for (std::size_t j = 0; j < N; ++j) {
      if (std::binary_search(S.begin(), S.end(), j)) continue;
      if (w.w(j) * w.w(j) <= budget) return false;
    }
    return true;
  };
  std::function<void(std::size_t, double)> dfs = [&](std::size_t start,
                                                     double budget) {
    if (is_maximal(budget)) {
      if (++evaluated > kEnumerationCap)
        throw std::invalid_argument(
            "weighted_rip_exact: admissible support count exceeds cap");
      const double dev = gram_deviation(G, S, scratch);
      ++rep.supports_enumerated;
      if (dev > rep.epsilon_s) {
        rep.epsilon_s = dev;
        rep.extremal_support = S;
      }
      return;
    }
    for (std::size_t j = start; j < N; ++j) {
      const double c = w.w(j) * w.w(j);
      if (c <= budget) {
        S.push_back(j);
        dfs(j + 1, budget - c);
        S.pop_back();
      }
    }
  };
  dfs(0, s);
  return rep;
}

double empirical_process_sup(const MeasurementEnsemble& ensemble,
                             const ComplexMatrix& covariance_gram,
                             std::size_t s) {
  const std::size_t N = ensemble.N;
  if (covariance_gram.rows() != static_cast<Eigen::Index>(N) ||
      covariance_gram.cols() != static_cast<Eigen::Index>(N))
    throw DimensionError("empirical_process_sup: covariance Gram unavailable");
  if (s == 0 || s > N)
    throw std::invalid_argument("empirical_process_sup: s in [1, N] required");
  if (binomial_capped(N, s) > kEnumerationCap)
    throw std::invalid_argument("empirical_process_sup: enumeration cap exceeded");

  // Undo the ensemble scaling: matrix = scaling * (X_1 | ... | X_m)^T.
  const double c = 1.0 / (static_cast<double>(ensemble.m) *
                          ensemble.scaling * ensemble.scaling);
  ComplexMatrix D = c * (ensemble.matrix.adjoint() * ensemble.matrix) -
                    covariance_gram;
  double sup = 0.0;
  ComplexMatrix scratch;
  for_each_support(N, s, [&](const std::vector<std::size_t>& S) {
    scratch.resize(s, s);
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b) scratch(a, b) = D(S[a], S[b]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(scratch);
    const auto& ev = es.eigenvalues();
    sup = std::max({sup, std::abs(ev(0)), std::abs(ev(s - 1))});
  });
  return sup;
}

NspEstimate nsp_lower_bound(const ComplexMatrix& A, std::size_t s, double alpha,
                            std::size_t trials, RandomStream& rng) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("nsp_lower_bound: alpha in (0,1) required");
  const std::size_t N = static_cast<std::size_t>(A.cols());
  const double radius = (2.0 + 1.0 / alpha) * std::sqrt(static_cast<double>(s));

  NspEstimate est;
  est.trials = trials;
  est.inf_norm = std::numeric_limits<double>::infinity();

  ComplexVector z(N);
  for (std::size_t t = 0; t < trials; ++t) {
    z.setZero();
    // alternate sparse probes with sparse/dense mixtures; all stay inside
    // the l1 ball of radius (2 + 1/alpha) sqrt(s)
    const int mode = static_cast<int>(t % 3);
    const std::size_t nsup = mode == 0 ? s : std::min(N, 4 * s);
    for (std::size_t i = 0; i < nsup; ++i)
      z(rng.uniform_index(N)) += rng.cnormal();
    z /= z.norm();
    if (z.cwiseAbs().sum() > radius) {
      // fall back to an s-sparse probe, always admissible
      z.setZero();
      for (std::size_t i = 0; i < s; ++i) z(rng.uniform_index(N)) = rng.cnormal();
      z /= z.norm();
    }
    est.inf_norm = std::min(est.inf_norm, (A * z).norm());
  }
  if (est.inf_norm < 1e-14) {
    est.infinite = true;
    est.tau = std::numeric_limits<double>::infinity();
  } else {
    est.tau = 1.0 / est.inf_norm;
  }
  return est;
}

PaperConstants paper_constants() {
  PaperConstants c;
  c.kappa = (10.0 - 7.0 * std::sqrt(2.0)) / 28.0;
  c.c0 = 1600.0 * (99.0 + 70.0 * std::sqrt(2.0));
  c.c1 = 492.0;
  c.K_bar = 12.0;
  c.C_omp = 49.0;
  c.eps_star_normalized = 1.0 / 6.0;
  c.eps_star = 1.0 / 13.0;
  c.kappa_cond_limit = 13.0 / 12.0;
  return c;
}

ComplexityBound sample_complexity(ComplexityRegime regime,
                                  const ComplexityInputs& in) {
  const PaperConstants pc = paper_constants();
  ComplexityBound out;
  out.regime = regime;
  const double lnN = std::log(M_E * in.N);

  switch (regime) {
    case ComplexityRegime::Main: {
      out.admissible_lo = 0.0;
      out.admissible_hi = pc.kappa;
      if (!(in.delta > 0.0 && in.delta < pc.kappa))
        throw std::out_of_range(
            "sample_complexity(main): delta must lie in (0, (10-7*sqrt(2))/28)");
      const double K2 = in.K * in.K;
      const double lg = std::log(in.s * K2 / in.delta);
      out.m_required = pc.c0 * K2 / (in.delta * in.delta) * in.s * lnN * lg * lg;
      out.failure_probability =
          2.0 * std::exp(-in.delta * in.delta * out.m_required / (in.s * K2));
      break;
    }
    case ComplexityRegime::RieszRip: {
      out.admissible_lo = 1.0 - in.c_lo / in.C_hi;
      out.admissible_hi = 1.0;
      if (!(in.eps > out.admissible_lo && in.eps < 1.0))
        throw std::out_of_range(
            "sample_complexity(riesz_rip): eps must lie in (1 - c/C, 1)");
      out.eta = in.eps - 1.0 + in.c_lo / in.C_hi;
      const double F = std::max(1.0 / (in.C_hi * in.C_hi), 1.0);
      const double K2 = in.K * in.K;
      const double lg = std::log(in.s * K2 * F / (out.eta * out.eta));
      out.m_required = pc.c0 * F * K2 / (out.eta * out.eta) * in.s * lg * lg * lnN;
      out.failure_probability =
          2.0 * std::exp(-std::min(in.C_hi * in.C_hi, 1.0) * out.eta * out.eta *
                         out.m_required / (K2 * in.s));
      out.note = "absolute constants taken from the main concentration theorem";
      break;
    }
    case ComplexityRegime::CoherenceRip: {
      out.admissible_lo = 1.0 - in.c_lo / in.C_hi;
      out.admissible_hi = 1.0;
      if (!(in.eps > out.admissible_lo && in.eps < 1.0))
        throw std::out_of_range(
            "sample_complexity(coherence_rip): eps must lie in (1 - c_B/C_B, 1)");
      out.eta = in.eps - 1.0 + in.c_lo / in.C_hi;
      const double F = std::max(1.0 / (in.C_hi * in.C_hi), 1.0);
      const double lg = std::log(in.s * in.nu_l1 * F / (out.eta * out.eta));
      out.m_required =
          pc.c0 * F / (out.eta * out.eta) * in.s * in.nu_l1 * lg * lg * lnN;
      out.failure_probability =
          2.0 * std::exp(-std::min(in.C_hi * in.C_hi, 1.0) * out.eta * out.eta *
                         out.m_required / (in.nu_l1 * in.s));
      out.note = "absolute constants taken from the main concentration theorem";
      break;
    }
    case ComplexityRegime::CorsingRip: {
      out.admissible_lo = 1.0 - (1.0 - in.gamma) / in.kappa;
      out.admissible_hi = 1.0;
      if (out.admissible_lo >= 1.0)
        throw std::out_of_range(
            "sample_complexity(corsing_rip): empty admissible interval (kappa "
            "too large for this gamma)");
      if (!(in.eps > out.admissible_lo && in.eps < 1.0))
        throw std::out_of_range(
            "sample_complexity(corsing_rip): eps must lie in "
            "(1 - (1-gamma)/kappa, 1)");
      out.eta = in.eps - 1.0 + (1.0 - in.gamma) / in.kappa;
      const double Q =
          in.nu_l1 * in.nu_l1 / (in.norm_min * out.eta * out.eta);
      const double lg = std::log(in.s * Q);
      out.m_required = pc.c0 * Q * in.s * lnN * lg * lg;
      out.failure_probability =
          2.0 * std::exp(-out.eta * out.eta * out.m_required * in.norm_min /
                         (in.s * in.nu_l1 * in.nu_l1));
      out.note = "necessary condition: eps > 1 - 1/kappa";
      break;
    }
  }
  return out;
}

namespace {

/// Convex-combination weights of a target over the 4N vertex set
/// {+sqrt(s) e_j, -sqrt(s) e_j, +sqrt(s) i e_j, -sqrt(s) i e_j}; leftover
/// convex weight goes evenly onto the +-sqrt(s) e_0 pair (mean-preserving).
std::vector<double> vertex_weights(const ComplexVector& t, double sqrt_s) {
  const std::size_t N = static_cast<std::size_t>(t.size());
  std::vector<double> wts(4 * N, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double re = t(j).real(), im = t(j).imag();
    wts[4 * j + (re >= 0 ? 0 : 1)] = std::abs(re) / sqrt_s;
    wts[4 * j + (im >= 0 ? 2 : 3)] = std::abs(im) / sqrt_s;
    total += (std::abs(re) + std::abs(im)) / sqrt_s;
  }
  if (total > 1.0 + 1e-12)
    throw std::invalid_argument(
        "maurey_weak_cover: target outside the decomposable sqrt(s) l1 ball "
        "(sum |Re|+|Im| > sqrt(s))");
  const double slack = std::max(0.0, 1.0 - total);
  wts[0] += slack / 2.0;
  wts[1] += slack / 2.0;
  return wts;
}

ComplexVector vertex(std::size_t v, std::size_t N, double sqrt_s) {
  ComplexVector e = ComplexVector::Zero(N);
  const std::size_t j = v / 4;
  switch (v % 4) {
    case 0: e(j) = Complex(sqrt_s, 0.0); break;
    case 1: e(j) = Complex(-sqrt_s, 0.0); break;
    case 2: e(j) = Complex(0.0, sqrt_s); break;
    case 3: e(j) = Complex(0.0, -sqrt_s); break;
  }
  return e;
}

}  // namespace

WeakCover maurey_weak_cover(const std::vector<ComplexVector>& targets,
                            const ComplexMatrix& X_rows, double s, double rho,
                            double delta, RandomStream& rng) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("maurey_weak_cover: delta in (0,1) required");
  if (!(rho > 0.0))
    throw std::invalid_argument("maurey_weak_cover: rho > 0 required");
  const std::size_t m = static_cast<std::size_t>(X_rows.rows());
  const std::size_t N = static_cast<std::size_t>(X_rows.cols());
  const double K = X_rows.cwiseAbs().maxCoeff();
  const double sK2 = s * K * K;
  const double log2_sK2d = std::log2(sK2 / delta);
  const double sqrt_s = std::sqrt(s);

  WeakCover cover;
  cover.rho = rho;
  cover.K = K;
  cover.M_cap = 4.0 * delta * static_cast<double>(m) / (sK2 * log2_sK2d);
  cover.L = static_cast<std::size_t>(
      std::floor(sK2 / (rho * rho) * std::log2(sK2 * log2_sK2d / delta)));
  if (cover.L == 0) cover.L = 1;

  for (std::size_t t = 0; t < targets.size(); ++t) {
    const ComplexVector& target = targets[t];
    if (target.size() != static_cast<Eigen::Index>(N))
      throw DimensionError("maurey_weak_cover: target dimension mismatch");
    const std::vector<double> wts = vertex_weights(target, sqrt_s);
    std::vector<double> cumulative(wts.size());
    double acc = 0.0;
    for (std::size_t v = 0; v < wts.size(); ++v) {
      acc += wts[v];
      cumulative[v] = acc;
    }
    cumulative.back() = 1.0;

    WeakCoverEntry entry;
    for (std::size_t attempt = 0; attempt < 64; ++attempt) {
      entry.attempts = attempt + 1;
      RandomStream draw = rng.split(t * 64 + attempt);
      ComplexVector avg = ComplexVector::Zero(N);
      for (std::size_t l = 0; l < cover.L; ++l) {
        const double u = draw.uniform();
        const std::size_t v =
            std::upper_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin();
        avg += vertex(v, N, sqrt_s);
      }
      avg /= static_cast<double>(cover.L);

      ComplexVector diff = target - avg;
      entry.exceptions.clear();
      entry.width = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = std::abs(X_rows.row(i).dot(diff));
        if (d > rho)
          entry.exceptions.push_back(i);
        else
          entry.width = std::max(entry.width, d);
      }
      if (static_cast<double>(entry.exceptions.size()) <= cover.M_cap) {
        entry.ok = true;
        // dedupe identical net points (repeated targets hit the same average)
        std::size_t idx = cover.net_points.size();
        for (std::size_t p = 0; p < cover.net_points.size(); ++p)
          if (cover.net_points[p] == avg) {
            idx = p;
            break;
          }
        if (idx == cover.net_points.size()) cover.net_points.push_back(avg);
        entry.net_index = idx;
        break;
      }
    }
    cover.per_target.push_back(std::move(entry));
  }
  return cover;
}

WeakCoverReport verify_weak_cover(const WeakCover& cover,
                                  const std::vector<ComplexVector>& targets,
                                  const ComplexMatrix& X_rows) {
  WeakCoverReport rep;
  const std::size_t m = static_cast<std::size_t>(X_rows.rows());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& entry = cover.per_target.at(t);
    bool ok = entry.ok;
    if (ok) {
      const ComplexVector diff = targets[t] - cover.net_points.at(entry.net_index);
      std::size_t exceptions = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = std::abs(X_rows.row(i).dot(diff));
        if (d > cover.rho * (1.0 + 1e-12)) ++exceptions;
      }
      ok = static_cast<double>(exceptions) <= cover.M_cap;
    }
    if (!ok) {
      rep.pass = false;
      rep.failed_targets.push_back(t);
    }
  }
  return rep;
}

}  // namespace cslab

#include "cslab/systems.hpp"

#include <algorithm>
#include <cmath>

namespace cslab {

FunctionSystem fourier_system(std::size_t N) {
  if (N == 0) throw DimensionError("fourier_system: N must be positive");
  FunctionSystem sys;
  sys.N = N;
  sys.K_psi = 1.0;
  sys.c_psi = sys.C_psi = 1.0;
  sys.name = "fourier";
  sys.evaluate = [](std::size_t j, double omega) {
    const double phase = 2.0 * M_PI * static_cast<double>(j) * omega;
    return Complex(std::cos(phase), std::sin(phase));
  };
  sys.sampler = [](RandomStream& rng) { return rng.uniform(); };
  return sys;
}

FunctionSystem sine_h10_system(std::size_t N) {
  if (N == 0) throw DimensionError("sine_h10_system: N must be positive");
  FunctionSystem sys;
  sys.N = N;
  // sup_x |xi_q(x)| = sqrt(2)/(q pi), largest at q = 1.
  sys.K_psi = std::sqrt(2.0) / M_PI;
  sys.c_psi = sys.C_psi = 1.0;
  sys.name = "sine_h10";
  sys.evaluate = [](std::size_t j, double x) {
    const double q = static_cast<double>(j + 1);
    return Complex(std::sqrt(2.0) * std::sin(q * M_PI * x) / (q * M_PI), 0.0);
  };
  sys.sampler = [](RandomStream& rng) { return rng.uniform(); };
  return sys;
}

HatGeometry hat_geometry(std::size_t j) {
  // j = 0 is the single level-1 hat; level l holds 2^(l-1) hats.
  int level = 1;
  std::size_t base = 0;
  while (j - base >= (1ull << (level - 1))) {
    base += 1ull << (level - 1);
    ++level;
  }
  const std::size_t k = j - base;
  const double width = std::ldexp(1.0, 1 - level);  // 2^(1-l)
  HatGeometry g;
  g.level = level;
  g.left = static_cast<double>(k) * width;
  g.mid = g.left + width / 2.0;
  g.right = g.left + width;
  // Unnormalized slope 2^l; H^1_0 normalization divides by 2^((l+1)/2).
  g.slope = std::ldexp(1.0, level) * std::pow(2.0, -0.5 * (level + 1));
  return g;
}

FunctionSystem hat_hierarchical_system(int levels) {
  if (levels < 1) throw DimensionError("hat_hierarchical_system: levels >= 1");
  FunctionSystem sys;
  sys.N = (1ull << levels) - 1;
  sys.c_psi = sys.C_psi = 1.0;
  // Peak of the normalized level-l hat is 2^(-(l+1)/2); largest at l = 1.
  sys.K_psi = 0.5;
  sys.name = "hat_hierarchical";
  sys.evaluate = [](std::size_t j, double x) {
    const HatGeometry g = hat_geometry(j);
    double v = 0.0;
    if (x > g.left && x < g.right)
      v = g.slope * (x <= g.mid ? x - g.left : g.right - x);
    return Complex(v, 0.0);
  };
  sys.sampler = [](RandomStream& rng) { return rng.uniform(); };
  return sys;
}

MeasurementEnsemble sample_riesz_matrix(const FunctionSystem& sys, std::size_t m,
                                        RandomStream& rng) {
  if (m == 0) throw DimensionError("sample_riesz_matrix: m must be positive");
  MeasurementEnsemble e;
  e.m = m;
  e.N = sys.N;
  e.seed = rng.seed();
  e.stream_id = rng.stream_id();
  e.scaling = 1.0 / std::sqrt(static_cast<double>(m) * sys.C_psi);
  e.matrix.resize(m, sys.N);
  e.draws.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double omega = sys.sampler(rng);
    e.draws.push_back(omega);
    for (std::size_t j = 0; j < sys.N; ++j)
      e.matrix(i, j) = e.scaling * sys.evaluate(j, omega);
  }
  if (!e.matrix.allFinite())
    throw NumericalError("sample_riesz_matrix: non-finite entries");
  return e;
}

CoherenceProfile local_coherence(const ComplexMatrix& B) {
  if (B.rows() == 0 || B.cols() == 0)
    throw DimensionError("local_coherence: empty matrix");
  CoherenceProfile p;
  p.nu = B.cwiseAbs2().rowwise().maxCoeff();
  p.nu_l1 = p.nu.sum();
  return p;
}

MeasurementEnsemble coherence_sampler(const ComplexMatrix& B,
                                      const CoherenceProfile& profile,
                                      double C_B, std::size_t m,
                                      RandomStream& rng) {
  if (C_B <= 0.0) throw std::invalid_argument("coherence_sampler: C_B > 0 required");
  if (m == 0) throw DimensionError("coherence_sampler: m must be positive");
  if (profile.nu.size() != B.rows())
    throw DimensionError("coherence_sampler: profile length != rows(B)");
  const double total = profile.nu.sum();
  if (total <= 0.0)
    throw std::invalid_argument("coherence_sampler: all-zero coherence profile");

  // Rows with nu_j = 0 get probability 0 and are never drawn.
  std::vector<double> cumulative(B.rows());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < B.rows(); ++j) {
    acc += profile.nu(j) / total;
    cumulative[j] = acc;
  }
  cumulative.back() = 1.0;

  MeasurementEnsemble e;
  e.m = m;
  e.N = static_cast<std::size_t>(B.cols());
  e.seed = rng.seed();
  e.stream_id = rng.stream_id();
  e.scaling = 1.0 / std::sqrt(static_cast<double>(m) * C_B);
  e.probabilities.resize(B.rows());
  for (Eigen::Index j = 0; j < B.rows(); ++j)
    e.probabilities[j] = profile.nu(j) / total;
  e.matrix.resize(m, B.cols());
  e.row_draws.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const Eigen::Index j = it - cumulative.begin();
    e.row_draws.push_back(static_cast<std::size_t>(j));
    const double rescale = std::sqrt(total / profile.nu(j));
    e.matrix.row(i) = e.scaling * rescale * B.row(j);
  }
  return e;
}

std::uint64_t binomial_capped(std::size_t n, std::size_t s, std::uint64_t cap) {
  if (s > n) return 0;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < s; ++i) {
    // c <- c*(n-i)/(i+1), watching the cap before it overflows
    c = c * (n - i) / (i + 1);
    if (c > cap) return cap + 1;
  }
  return c;
}

void for_each_support(std::size_t n, std::size_t s,
                      const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (s > n) return;
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    // next lexicographic combination
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == n - s + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::pair<double, double> sparse_eigen_bounds(const ComplexMatrix& B,
                                              std::size_t s) {
  if (B.rows() == 0 || B.cols() == 0)
    throw DimensionError("sparse_eigen_bounds: empty matrix");
  const std::size_t N = static_cast<std::size_t>(B.cols());
  if (s == 0 || s > N)
    throw std::invalid_argument("sparse_eigen_bounds: s in [1, N] required");
  if (binomial_capped(N, s) > kEnumerationCap)
    throw std::invalid_argument(
        "sparse_eigen_bounds: C(N,s) exceeds enumeration cap; use a Monte "
        "Carlo variant");
  const ComplexMatrix G = B.adjoint() * B;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  ComplexMatrix GS(s, s);
  for_each_support(N, s, [&](const std::vector<std::size_t>& S) {
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b) GS(a, b) = G(S[a], S[b]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(GS);
    lo = std::min(lo, es.eigenvalues()(0));
    hi = std::max(hi, es.eigenvalues()(s - 1));
  });
  return {lo, hi};
}

}  // namespace cslab

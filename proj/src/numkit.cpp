#include "cslab/numkit.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cslab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  key_ = mix64(mix64(seed + kGolden) ^ mix64(stream_id * kGolden + 1));
}

std::uint64_t RandomStream::next_u64() {
  return mix64(key_ + (++counter_) * kGolden);
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RandomStream::uniform_index(std::size_t n) {
  if (n == 0) throw DimensionError("uniform_index: n must be positive");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return static_cast<std::size_t>(v % n);
}

double RandomStream::normal() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex RandomStream::cnormal() {
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

RandomStream RandomStream::split(std::uint64_t child_id) const {
  return RandomStream(key_, mix64(child_id + kGolden));
}

double spectral_norm(const ComplexMatrix& M) {
  if (M.rows() == 0 || M.cols() == 0)
    throw DimensionError("spectral_norm: empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(M);
  return svd.singularValues()(0);
}

std::pair<double, double> extremal_gram_eigs(const ComplexMatrix& M) {
  if (M.rows() == 0 || M.cols() == 0)
    throw DimensionError("extremal_gram_eigs: empty matrix");
  ComplexMatrix G = M.adjoint() * M;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(G);
  if (es.info() != Eigen::Success)
    throw NumericalError("extremal_gram_eigs: eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

LeastSquaresResult least_squares(const ComplexMatrix& M, const ComplexVector& y) {
  if (M.rows() == 0 || M.cols() == 0)
    throw DimensionError("least_squares: empty matrix");
  if (M.rows() != y.size())
    throw DimensionError("least_squares: rows(M) != len(y)");
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(M);
  LeastSquaresResult out;
  out.solution = cod.solve(y);
  out.rank_deficient = cod.rank() < M.cols();
  if (!out.solution.allFinite())
    throw NumericalError("least_squares: non-finite solution");
  return out;
}

ComplexMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix CSV: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("matrix CSV empty: " + path);
  Eigen::Index rows = 0, cols = 0;
  {
    std::istringstream hs(line);
    char comma;
    if (!(hs >> rows >> comma >> cols) || comma != ',' || rows <= 0 || cols <= 0)
      throw std::runtime_error("matrix CSV bad header (line 1): " + path);
  }
  ComplexMatrix M(rows, cols);
  Eigen::Index k = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double re, im;
    char comma;
    if (!(ls >> re >> comma >> im) || comma != ',')
      throw std::runtime_error("matrix CSV bad entry (line " +
                               std::to_string(lineno) + "): " + path);
    if (k >= rows * cols)
      throw std::runtime_error("matrix CSV has too many entries: " + path);
    M(k / cols, k % cols) = Complex(re, im);
    ++k;
  }
  if (k != rows * cols)
    throw std::runtime_error("matrix CSV has too few entries: " + path);
  if (!M.allFinite())
    throw std::runtime_error("matrix CSV contains non-finite entries: " + path);
  return M;
}

void save_matrix_csv(const ComplexMatrix& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix CSV: " + path);
  out.precision(17);
  out << M.rows() << "," << M.cols() << "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      out << M(i, j).real() << "," << M(i, j).imag() << "\n";
}

}  // namespace cslab

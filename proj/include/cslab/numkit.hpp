#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace cslab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Counter-based splittable random stream. Identical (seed, stream_id)
/// yields an identical sequence on every platform; distinct stream_ids
/// give independent streams regardless of draw order elsewhere.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform();
  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);
  /// Standard normal (Box-Muller, no state carried between calls).
  double normal();
  /// Complex Gaussian with independent N(0,1) real and imaginary parts.
  Complex cnormal();

  /// Derive an independent child stream; deterministic in (this, child_id).
  RandomStream split(std::uint64_t child_id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Largest singular value. Empty matrix -> DimensionError.
double spectral_norm(const ComplexMatrix& M);

/// Smallest and largest eigenvalues of M^H M.
std::pair<double, double> extremal_gram_eigs(const ComplexMatrix& M);

struct LeastSquaresResult {
  ComplexVector solution;
  bool rank_deficient = false;  // min-norm solution returned when set
};

/// Minimizer of ||Mz - y||_2; min-norm solution when M is rank deficient.
LeastSquaresResult least_squares(const ComplexMatrix& M, const ComplexVector& y);

/// CSV interchange: header `rows,cols`, then one `re,im` pair per entry,
/// row-major.
ComplexMatrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const ComplexMatrix& M, const std::string& path);

}  // namespace cslab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cslab/numkit.hpp"

using namespace cslab;

namespace {

ComplexMatrix seeded_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed) {
  RandomStream rng(seed, 0);
  ComplexMatrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) M(i, j) = rng.cnormal();
  return M;
}

// Independent oracle: power iteration on M^H M run to convergence.
double power_iteration_norm(const ComplexMatrix& M) {
  ComplexMatrix G = M.adjoint() * M;
  ComplexVector v = ComplexVector::Ones(G.cols());
  v /= v.norm();
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    ComplexVector w = G * v;
    const double nl = w.norm();
    if (nl == 0.0) return 0.0;
    w /= nl;
    if (std::abs(nl - lambda) < 1e-14 * std::max(1.0, nl)) {
      lambda = nl;
      break;
    }
    lambda = nl;
    v = w;
  }
  return std::sqrt(lambda);
}

}  // namespace

TEST_CASE("spectral_norm basics") {
  CHECK(spectral_norm(ComplexMatrix::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(spectral_norm(ComplexMatrix::Zero(2, 2)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(spectral_norm(ComplexMatrix(0, 0)), DimensionError);
}

TEST_CASE("spectral_norm matches a power-iteration oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ComplexMatrix M = seeded_matrix(4, 4, seed);
    CHECK(spectral_norm(M) ==
          doctest::Approx(power_iteration_norm(M)).epsilon(1e-8));
  }
}

TEST_CASE("spectral_norm scales with |c|") {
  ComplexMatrix M = seeded_matrix(5, 4, 7);
  const Complex c(1.25, -0.5);
  CHECK(spectral_norm(c * M) ==
        doctest::Approx(std::abs(c) * spectral_norm(M)).epsilon(1e-10));
}

TEST_CASE("extremal_gram_eigs basics") {
  auto [lo, hi] = extremal_gram_eigs(ComplexMatrix::Identity(3, 3));
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(1.0));
  ComplexMatrix D = ComplexMatrix::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 2.0;
  auto [lo2, hi2] = extremal_gram_eigs(D);
  CHECK(lo2 == doctest::Approx(1.0));
  CHECK(hi2 == doctest::Approx(4.0));
}

TEST_CASE("extremal_gram_eigs matches power-iteration oracles on 5x3") {
  ComplexMatrix M = seeded_matrix(5, 3, 11);
  auto [lo, hi] = extremal_gram_eigs(M);
  // oracle for the top: power iteration; for the bottom: power iteration
  // on hi*I - G (spectrum flipped)
  const double hi_oracle = power_iteration_norm(M);
  CHECK(hi == doctest::Approx(hi_oracle * hi_oracle).epsilon(1e-8));
  ComplexMatrix G = M.adjoint() * M;
  ComplexMatrix F = hi * ComplexMatrix::Identity(3, 3) - G;
  ComplexVector v = ComplexVector::Ones(3);
  v /= v.norm();
  double shift = 0.0;
  for (int it = 0; it < 20000; ++it) {
    ComplexVector w = F * v;
    shift = w.norm();
    if (shift == 0.0) break;
    v = w / shift;
  }
  CHECK(lo == doctest::Approx(hi - shift).epsilon(1e-7));
  CHECK(lo >= -1e-12);
  const double sn = spectral_norm(M);
  CHECK(hi <= sn * sn + 1e-10);
}

TEST_CASE("least_squares basics") {
  ComplexVector y(3);
  y << Complex(1, 2), Complex(0, -1), Complex(3, 0);
  auto r = least_squares(ComplexMatrix::Identity(3, 3), y);
  CHECK((r.solution - y).norm() == doctest::Approx(0.0));
  CHECK_FALSE(r.rank_deficient);

  ComplexMatrix M(2, 1);
  M << 1.0, 1.0;
  ComplexVector y2(2);
  y2 << 1.0, 0.0;
  auto r2 = least_squares(M, y2);
  CHECK(std::abs(r2.solution(0) - Complex(0.5)) < 1e-12);
}

TEST_CASE("least_squares matches the normal-equation oracle on 6x3") {
  ComplexMatrix M = seeded_matrix(6, 3, 21);
  RandomStream rng(22, 0);
  ComplexVector y(6);
  for (int i = 0; i < 6; ++i) y(i) = rng.cnormal();
  auto r = least_squares(M, y);
  ComplexVector oracle = (M.adjoint() * M).inverse() * (M.adjoint() * y);
  CHECK((r.solution - oracle).norm() < 1e-9);
  // residual orthogonal to the column space
  CHECK((M.adjoint() * (y - M * r.solution)).norm() < 1e-9 * (1 + y.norm()));
  CHECK((M * r.solution - y).norm() <= y.norm() + 1e-12);
}

TEST_CASE("least_squares flags rank deficiency, returns min-norm solution") {
  ComplexMatrix M(3, 2);
  M.col(0) << 1.0, 1.0, 1.0;
  M.col(1) = 2.0 * M.col(0);
  ComplexVector y(3);
  y << 1.0, 1.0, 1.0;
  auto r = least_squares(M, y);
  CHECK(r.rank_deficient);
  CHECK((M * r.solution - y).norm() < 1e-10);
}

TEST_CASE("RandomStream reproducibility and splitting") {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream c(42, 8);
  bool differ = false;
  RandomStream a2(42, 7);
  for (int i = 0; i < 16; ++i)
    if (a2.next_u64() != c.next_u64()) differ = true;
  CHECK(differ);

  RandomStream p(5, 0);
  RandomStream s1 = p.split(3), s2 = p.split(3);
  CHECK(s1.next_u64() == s2.next_u64());

  RandomStream u(9, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  for (int i = 0; i < 1000; ++i) CHECK(u.uniform_index(7) < 7);
}

TEST_CASE("matrix CSV round-trip and error reporting") {
  ComplexMatrix M = seeded_matrix(3, 4, 33);
  const std::string path = "nk_roundtrip.csv";
  save_matrix_csv(M, path);
  ComplexMatrix back = load_matrix_csv(path);
  CHECK((M - back).norm() < 1e-14);
  std::remove(path.c_str());

  const std::string bad = "nk_bad.csv";
  {
    std::ofstream out(bad);
    out << "2,2\n1,0\n1,0\nnot_a_number,0\n1,0\n";
  }
  CHECK_THROWS_WITH_AS(load_matrix_csv(bad),
                       doctest::Contains("line 4"), std::runtime_error);
  std::remove(bad.c_str());
}

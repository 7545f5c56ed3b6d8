#include "cslab/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cslab {

ComplexVector SparseSignal::dense() const {
  ComplexVector v = ComplexVector::Zero(N);
  for (const auto& [j, val] : entries) v(j) = val;
  return v;
}

WeightVector::WeightVector(RealVector weights) : w(std::move(weights)) {
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (!(w(j) >= 1.0))
      throw std::invalid_argument("WeightVector: every w_j >= 1 required");
}

WeightVector WeightVector::ones(std::size_t N) {
  return WeightVector(RealVector::Ones(N));
}

RecoveryOutcome omp(const ComplexMatrix& A, const ComplexVector& y,
                    std::size_t k) {
  const std::size_t m = A.rows(), N = A.cols();
  if (m == 0 || N == 0) throw DimensionError("omp: empty matrix");
  if (A.rows() != y.size()) throw DimensionError("omp: rows(A) != len(y)");
  if (k > std::min(m, N))
    throw std::invalid_argument("omp: k must not exceed min(m, N)");

  RecoveryOutcome out;
  RealVector colnorm = A.colwise().norm();
  std::vector<bool> excluded(N, false);
  bool all_zero = true;
  for (std::size_t j = 0; j < N; ++j) {
    if (colnorm(j) <= 0.0) {
      excluded[j] = true;
      out.degenerate = true;
    } else {
      all_zero = false;
    }
  }
  if (all_zero) throw std::invalid_argument("omp: all columns are zero");

  // B = A R with R_jj = 1/||a_j||_2 (excluded columns left untouched).
  ComplexMatrix B = A;
  for (std::size_t j = 0; j < N; ++j)
    if (!excluded[j]) B.col(j) /= colnorm(j);

  ComplexVector xhat = ComplexVector::Zero(N);
  std::vector<std::size_t> support;
  std::vector<bool> in_support(N, false);
  ComplexVector residual = y;

  for (std::size_t it = 0; it < k; ++it) {
    ComplexVector corr = B.adjoint() * residual;
    double best = -1.0;
    std::size_t best_j = N;
    for (std::size_t j = 0; j < N; ++j) {
      if (excluded[j] || in_support[j]) continue;
      const double c = std::abs(corr(j));
      if (c > best) {  // strict: ties break to the lowest index
        best = c;
        best_j = j;
      }
    }
    if (best_j == N) break;  // nothing selectable left
    support.push_back(best_j);
    in_support[best_j] = true;
    std::sort(support.begin(), support.end());

    ComplexMatrix BS(m, support.size());
    for (std::size_t a = 0; a < support.size(); ++a)
      BS.col(a) = B.col(support[a]);
    auto ls = least_squares(BS, y);
    if (ls.rank_deficient) out.degenerate = true;
    xhat.setZero();
    for (std::size_t a = 0; a < support.size(); ++a)
      xhat(support[a]) = ls.solution(a);
    residual = y - BS * ls.solution;
    out.iterations = it + 1;
  }

  // De-normalize: xhat <- R xhat.
  for (std::size_t j = 0; j < N; ++j)
    if (!excluded[j]) xhat(j) /= colnorm(j);

  out.estimate = xhat;
  out.support = support;
  out.residual_l2 = (A * xhat - y).norm();
  out.objective = xhat.cwiseAbs().sum();
  return out;
}

namespace {

RecoveryOutcome admm_basis_pursuit(const ComplexMatrix& A,
                                   const ComplexVector& y, const RealVector& w,
                                   double zeta, double tol) {
  const Eigen::Index m = A.rows(), N = A.cols();
  if (m == 0 || N == 0) throw DimensionError("basis_pursuit: empty matrix");
  if (m != y.size()) throw DimensionError("basis_pursuit: rows(A) != len(y)");
  if (zeta < 0.0) throw std::invalid_argument("basis_pursuit: zeta >= 0 required");
  if (w.size() != N) throw DimensionError("basis_pursuit: weights length != N");

  RecoveryOutcome out;
  const auto finish = [&](ComplexVector z, std::size_t iters, bool converged) {
    out.estimate = std::move(z);
    out.iterations = iters;
    out.converged = converged;
    out.residual_l2 = (A * out.estimate - y).norm();
    out.objective = (w.array() * out.estimate.cwiseAbs().array()).sum();
    const double scale = out.estimate.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < N; ++j)
      if (std::abs(out.estimate(j)) > 1e-8 * (1.0 + scale))
        out.support.push_back(static_cast<std::size_t>(j));
    return out;
  };

  if (y.norm() <= zeta) return finish(ComplexVector::Zero(N), 0, true);

  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> pinv(A);
  const double dist = (y - A * pinv.solve(y)).norm();
  if (dist > zeta * (1.0 + 1e-9) + 1e-9)
    throw NumericalError("basis_pursuit: infeasible (dist(y, range A) > zeta)");

  // Feasibility polish: one or two pseudo-inverse steps pull the iterate
  // back onto the constraint ball without changing the objective at first
  // order.
  const auto polish = [&](ComplexVector z) {
    for (int rep = 0; rep < 3; ++rep) {
      ComplexVector v = A * z - y;
      const double nv = v.norm();
      if (nv <= zeta * (1.0 + 1e-10) + 1e-13) break;
      const double target = zeta > 0.0 ? zeta * (1.0 - 1e-12) : 0.0;
      ComplexVector excess = v * (1.0 - target / std::max(nv, 1e-300));
      z -= pinv.solve(excess);
    }
    return z;
  };

  const auto dual_value = [&](const ComplexVector& lambda) {
    // Dual of min ||z||_{w,1} s.t. ||Az - y|| <= zeta:
    //   max -Re<lambda, y> - zeta ||lambda||  s.t. |(A^H lambda)_j| <= w_j.
    ComplexVector g = A.adjoint() * lambda;
    double viol = 0.0;
    for (Eigen::Index j = 0; j < N; ++j)
      viol = std::max(viol, std::abs(g(j)) / w(j));
    const double scalefac = viol > 1.0 ? 1.0 / viol : 1.0;
    return scalefac * (-std::real(y.dot(lambda))) -
           zeta * scalefac * lambda.norm();
  };

  double rho = 1.0;
  ComplexMatrix AhA = A.adjoint() * A;
  AhA.diagonal().array() += 1.0;
  Eigen::LDLT<ComplexMatrix> link(AhA);

  ComplexVector z = pinv.solve(y);  // feasible start
  ComplexVector x = z;
  ComplexVector r = A * z - y;
  ComplexVector u1 = ComplexVector::Zero(m);
  ComplexVector u2 = ComplexVector::Zero(N);

  const std::size_t max_iter = 100000;
  ComplexVector best = polish(z);
  double best_obj = (w.array() * best.cwiseAbs().array()).sum();

  for (std::size_t it = 1; it <= max_iter; ++it) {
    z = link.solve(A.adjoint() * (y + r - u1) + (x - u2));
    // complex soft-threshold at w_j/rho
    ComplexVector zx = z + u2;
    for (Eigen::Index j = 0; j < N; ++j) {
      const double mag = std::abs(zx(j));
      const double thr = w(j) / rho;
      x(j) = mag <= thr ? Complex(0.0) : zx(j) * ((mag - thr) / mag);
    }
    ComplexVector v = A * z - y + u1;
    const double nv = v.norm();
    r = nv <= zeta ? v : ComplexVector(v * (zeta / nv));
    u1 += A * z - y - r;
    u2 += z - x;

    if (it % 25 == 0 || it == max_iter) {
      ComplexVector cand = polish(x);
      const double obj = (w.array() * cand.cwiseAbs().array()).sum();
      if (obj < best_obj) {
        best_obj = obj;
        best = cand;
      }
      const double d = std::max(dual_value(rho * u1), dual_value(-rho * u1));
      const double gap = best_obj - d;
      if (gap <= tol * (1.0 + std::abs(best_obj)))
        return finish(best, it, true);
    }
  }
  return finish(best, max_iter, false);
}

}  // namespace

RecoveryOutcome basis_pursuit(const ComplexMatrix& A, const ComplexVector& y,
                              double zeta, double tol) {
  return admm_basis_pursuit(A, y, RealVector::Ones(A.cols()), zeta, tol);
}

RecoveryOutcome weighted_basis_pursuit(const ComplexMatrix& A,
                                       const ComplexVector& y,
                                       const WeightVector& w, double zeta,
                                       double tol) {
  return admm_basis_pursuit(A, y, w.w, zeta, tol);
}

SparseSignal best_s_term(const ComplexVector& x, std::size_t s) {
  const std::size_t N = static_cast<std::size_t>(x.size());
  if (s > N) throw std::invalid_argument("best_s_term: s <= N required");
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::abs(x(a)) > std::abs(x(b));
                   });
  std::vector<std::size_t> keep(order.begin(), order.begin() + s);
  std::sort(keep.begin(), keep.end());
  SparseSignal sig;
  sig.N = N;
  for (std::size_t j : keep)
    if (x(j) != Complex(0.0)) sig.entries.emplace_back(j, x(j));
  return sig;
}

std::pair<double, double> weighted_norms(const ComplexVector& x,
                                         const WeightVector& w) {
  if (x.size() != w.w.size())
    throw DimensionError("weighted_norms: length mismatch");
  double wl1 = 0.0, wl0 = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    wl1 += w.w(j) * std::abs(x(j));
    if (x(j) != Complex(0.0)) wl0 += w.w(j) * w.w(j);
  }
  return {wl1, wl0};
}

}  // namespace cslab

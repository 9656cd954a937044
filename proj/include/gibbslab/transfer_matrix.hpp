#pragma once

// Exact solution machinery for 1D nearest-neighbour chains: positive
// transfer matrices, their Perron eigen-data, and infinite-volume marginals.

#include <Eigen/Core>

#include <cmath>
#include <limits>

#include "gibbslab/measures.hpp"

namespace gibbslab {

template <typename Scalar>
struct TransferMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix entries;
  Scalar dominant_eigenvalue{};
  Vector left;   // left * right == 1
  Vector right;
  Scalar residual{};  // max relative eigen-residual of left and right pairs
  int iterations = 0;

  /// Runs power iteration; entries must be strictly positive.
  static TransferMatrix from_entries(Matrix entries, Scalar tolerance = Scalar(1e-14),
                                     int max_iterations = 1000000);

  int size() const { return static_cast<int>(entries.rows()); }
  Scalar log_eigenvalue() const { return std::log(dominant_eigenvalue); }
};

namespace detail {

template <typename Scalar>
struct PowerResult {
  Scalar eigenvalue;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  Scalar residual;
  int iterations;
};

template <typename Scalar>
PowerResult<Scalar> power_iteration(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                                    Scalar tolerance, int max_iterations) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector v = Vector::Constant(m.rows(), Scalar(1) / std::sqrt(Scalar(m.rows())));
  Scalar lambda = (m * v).dot(v);
  Scalar residual = std::numeric_limits<Scalar>::infinity();
  int it = 0;
  while (it < max_iterations) {
    Vector w = m * v;
    lambda = w.dot(v);
    residual = (w - lambda * v).template lpNorm<Eigen::Infinity>() / lambda;
    if (residual <= tolerance) break;
    v = w / w.norm();
    ++it;
  }
  return {lambda, v, residual, it};
}

}  // namespace detail

template <typename Scalar>
TransferMatrix<Scalar> TransferMatrix<Scalar>::from_entries(Matrix m, Scalar tolerance,
                                                            int max_iterations) {
  if (m.rows() != m.cols() || m.rows() < 1) throw Error("transfer matrix must be square");
  if (!(m.array() > Scalar(0)).all()) throw Error("transfer matrix entries must be positive");
  auto r = detail::power_iteration<Scalar>(m, tolerance, max_iterations);
  auto l = detail::power_iteration<Scalar>(m.transpose(), tolerance, max_iterations);
  if (!(r.residual <= tolerance) || !(l.residual <= tolerance)) {
    throw Error("power iteration did not reach the eigen-residual tolerance");
  }
  TransferMatrix out;
  out.entries = std::move(m);
  out.dominant_eigenvalue = r.eigenvalue;
  out.right = r.vector;
  out.left = l.vector / l.vector.dot(r.vector);
  out.residual = std::max(r.residual, l.residual);
  out.iterations = std::max(r.iterations, l.iterations);
  return out;
}

/// exp(J s s' + h (s + s') / 2) with counting a priori measure.
TransferMatrix<double> ising_transfer_matrix(double J, double h);

/// T(s,s') = sqrt(lambda(s) lambda(s')) exp(-U1(s)/2 - U1(s')/2 - U2(s,s')) for
/// a 1D potential whose shapes are {0} and/or {0,1}.
TransferMatrix<double> transfer_matrix(const Potential& U);

/// Marginal of the infinite-volume chain on a contiguous interval:
/// l(s_1) prod T(s_k, s_{k+1}) r(s_n) / lambda^(n-1).
WindowMeasure transfer_matrix_marginal(const TransferMatrix<double>& T, const Window& interval);
WindowMeasure transfer_matrix_marginal(double J, double h, const Window& interval);

struct IsingMoments {
  double magnetization;   // E[s_0]
  double pair_correlation;  // E[s_0 s_1]
};

IsingMoments ising_moments(double J, double h);
/// log of the dominant eigenvalue of the counting-measure transfer matrix.
double ising_pressure(double J, double h);

/// Coupling of the chain obtained by keeping the even sites of a zero-field
/// chain: sums out the odd spin through the squared transfer matrix.
double decimate_ising_1d(double J);

}  // namespace gibbslab

#include "gibbslab/transfer_matrix.hpp"

#include <cmath>

namespace gibbslab {

TransferMatrix<double> ising_transfer_matrix(double J, double h) {
  if (!std::isfinite(J) || !std::isfinite(h)) throw Error("Ising parameters must be finite");
  Eigen::Matrix2d m;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int s = ising_spin(a);
      const int t = ising_spin(b);
      m(a, b) = std::exp(J * s * t + h * (s + t) / 2.0);
    }
  }
  return TransferMatrix<double>::from_entries(m);
}

TransferMatrix<double> transfer_matrix(const Potential& U) {
  if (U.dimension() != 1) throw Error("transfer matrix needs a 1D potential");
  const int q = U.alphabet_size();
  Eigen::VectorXd single = Eigen::VectorXd::Zero(q);
  Eigen::MatrixXd pair = Eigen::MatrixXd::Zero(q, q);
  for (const auto& term : U.terms()) {
    if (term.shape == Window(1, {Site{0}})) {
      single += term.values;
    } else if (term.shape == Window(1, {Site{0}, Site{1}})) {
      for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) pair(a, b) += term.values[a * q + b];
      }
    } else {
      throw Error("transfer matrix supports only {0} and {0,1} interaction shapes");
    }
  }
  Eigen::MatrixXd m(q, q);
  const Eigen::VectorXd& prior = U.a_priori();
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      m(a, b) = std::sqrt(prior[a] * prior[b]) *
                std::exp(-0.5 * single[a] - 0.5 * single[b] - pair(a, b));
    }
  }
  return TransferMatrix<double>::from_entries(m);
}

WindowMeasure transfer_matrix_marginal(const TransferMatrix<double>& T, const Window& interval) {
  if (interval.dimension() != 1) throw Error("transfer matrix marginals live on 1D windows");
  const std::size_t n = interval.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (interval[k][0] != interval[k - 1][0] + 1) throw Error("window must be a contiguous interval");
  }
  const int q = T.size();
  const std::size_t count = checked_configuration_count(q, n, "transfer_matrix_marginal");
  Eigen::VectorXd w(static_cast<Eigen::Index>(count));
  if (n == 0) {
    w[0] = 1.0;
    return WindowMeasure(q, interval, w);
  }
  const Eigen::MatrixXd scaled = T.entries / T.dominant_eigenvalue;
  std::vector<int> values(n);
  for (std::size_t idx = 0; idx < count; ++idx) {
    decode_configuration(idx, q, values);
    double p = T.left[values[0]] * T.right[values[n - 1]];
    for (std::size_t k = 1; k < n; ++k) p *= scaled(values[k - 1], values[k]);
    w[static_cast<Eigen::Index>(idx)] = p;
  }
  w /= w.sum();
  return WindowMeasure(q, interval, std::move(w));
}

WindowMeasure transfer_matrix_marginal(double J, double h, const Window& interval) {
  return transfer_matrix_marginal(ising_transfer_matrix(J, h), interval);
}

IsingMoments ising_moments(double J, double h) {
  const auto T = ising_transfer_matrix(J, h);
  IsingMoments m{0.0, 0.0};
  for (int a = 0; a < 2; ++a) {
    m.magnetization += T.left[a] * T.right[a] * ising_spin(a);
    for (int b = 0; b < 2; ++b) {
      m.pair_correlation += T.left[a] * T.entries(a, b) * T.right[b] * ising_spin(a) *
                            ising_spin(b) / T.dominant_eigenvalue;
    }
  }
  return m;
}

double ising_pressure(double J, double h) { return ising_transfer_matrix(J, h).log_eigenvalue(); }

double decimate_ising_1d(double J) {
  if (!std::isfinite(J)) throw Error("coupling must be finite");
  const auto T = ising_transfer_matrix(J, 0.0);
  const Eigen::Matrix2d squared = T.entries * T.entries;
  // Labels: 1 is spin +1, 0 is spin -1.
  return 0.5 * std::log(squared(1, 1) / squared(1, 0));
}

}  // namespace gibbslab

#include "gibbslab/concentration.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace gibbslab {

double gcb_log_moment(const WindowMeasure& mu, const LocalFunction& f) {
  const Eigen::VectorXd values = evaluate_on(mu, f);
  const double mean = mu.weights.dot(values);
  const Eigen::ArrayXd centered = values.array() - mean;
  const double max_abs = centered.abs().maxCoeff();
  if (max_abs < 1.0) {
    // log1p/expm1 keep full relative precision for small beta.
    double acc = 0.0;
    for (Eigen::Index k = 0; k < centered.size(); ++k) {
      acc += mu.weights[k] * std::expm1(centered[k]);
    }
    return std::log1p(acc);
  }
  const double shift = centered.maxCoeff();
  return shift + std::log(mu.weights.dot((centered - shift).exp().matrix()));
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  const double lo = std::log(1e-3);
  const double hi = std::log(8.0);
  for (int k = 0; k < 41; ++k) {
    const double b = std::exp(lo + (hi - lo) * k / 40.0);
    grid.push_back(b);
    grid.push_back(-b);
  }
  return grid;
}

double GcbScanResult::min_residual(double C) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < betas.size(); ++k) {
    best = std::min(best, 0.5 * C * betas[k] * betas[k] * norm2sq - log_moments[k]);
  }
  return best;
}

GcbScanResult gcb_scan(const WindowMeasure& mu, const LocalFunction& f,
                       const std::vector<double>& betas, std::string function_id) {
  GcbScanResult out;
  out.function_id = std::move(function_id);
  out.norm2sq = oscillation_vector(f).l2_squared();
  if (!(out.norm2sq > 0.0)) {
    throw Error("empirical constant is undefined for a constant function");
  }
  const Eigen::VectorXd values = evaluate_on(mu, f);
  const double mean = mu.weights.dot(values);
  const double var = mu.weights.dot((values.array() - mean).square().matrix());
  out.variance_ratio = var / out.norm2sq;
  out.empirical_constant = out.variance_ratio;
  for (double beta : betas) {
    if (beta == 0.0) throw Error("beta grid must exclude 0");
    const double lm = gcb_log_moment(mu, f.scaled(beta));
    const double candidate = 2.0 * lm / (beta * beta * out.norm2sq);
    out.betas.push_back(beta);
    out.log_moments.push_back(lm);
    out.candidates.push_back(candidate);
    out.empirical_constant = std::max(out.empirical_constant, candidate);
  }
  return out;
}

double empirical_constant(const WindowMeasure& mu, const LocalFunction& f,
                          const std::vector<double>& betas) {
  return gcb_scan(mu, f, betas).empirical_constant;
}

void write_scan_csv(std::ostream& os, const std::vector<GcbScanResult>& scans) {
  os << "function_id,beta,log_moment,norm2sq,constant_candidate\n" << std::setprecision(17);
  for (const auto& s : scans) {
    for (std::size_t k = 0; k < s.betas.size(); ++k) {
      os << s.function_id << ',' << s.betas[k] << ',' << s.log_moments[k] << ',' << s.norm2sq
         << ',' << s.candidates[k] << '\n';
    }
  }
}

std::vector<LocalFunction> structured_functions(int q, int dimension) {
  Site left = origin(dimension);
  Site right = origin(dimension);
  left[0] = -1;
  right[0] = 1;
  const Window three(dimension, {left, origin(dimension), right});
  using Table = std::function<double(int, int, int)>;
  const double top = double(q - 1);
  const std::vector<Table> tables{
      [](int a, int, int) { return double(a); },
      [](int, int b, int) { return double(b); },
      [](int, int, int c) { return double(c); },
      [](int a, int b, int) { return double(a == b); },
      [](int, int b, int c) { return double(b == c); },
      [](int a, int, int c) { return double(a == c); },
      [](int a, int b, int c) { return double(a + b + c); },
      [top](int a, int b, int c) { return double(2 * ((a == top) + (b == top) + (c == top)) > 3); },
      [](int a, int b, int c) { return double((a + b + c) % 2); },
      [](int a, int b, int) { return double(a * b); },
      [](int a, int b, int c) { return double(a * b * c); },
      [](int, int b, int c) { return double(b - c); },
      [](int a, int b, int c) { return double(std::max({a, b, c})); },
      [](int a, int b, int c) { return double(std::min({a, b, c})); },
      [top](int a, int b, int c) { return double((a == top) + (b == top) + (c == top) == 2); },
      [](int a, int b, int c) { return double(a + 2 * b + 3 * c); },
      [](int, int b, int c) { return double(std::abs(b - c)); },
      [](int, int b, int) { return double(b * b); },
      [](int a, int b, int) { return std::exp(0.5 * (a + b)); },
      [](int a, int b, int c) { return std::sin(double(a + 2 * b + 3 * c)); },
  };
  std::vector<LocalFunction> out;
  for (const auto& t : tables) {
    out.push_back(LocalFunction::tabulate(
        q, three, [&t](std::span<const int> v) { return t(v[0], v[1], v[2]); }));
  }
  return out;
}

YoungReport young_check(const LocalFunction& f, const Window& sites, double tolerance) {
  const OscillationVector df = oscillation_vector(f);
  const Window target = minkowski_sum(sites, f.window());

  YoungReport out;
  out.sum_oscillation = {target, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(target.size()))};
  out.majorant = out.sum_oscillation;
  // Copy i of f sits at D_f + i. Only the copies covering j move when site j
  // changes, so delta_j of the sum is delta_j of their partial sum.
  for (std::size_t k = 0; k < target.size(); ++k) {
    const Site& j = target[k];
    std::vector<Site> covering;
    double acc = 0.0;
    for (const auto& i : sites.sites()) {
      const Site offset = subtract(j, i);
      if (f.window().contains(offset)) covering.push_back(i);
      acc += df.at(offset);
    }
    const LocalFunction partial = ergodic_sum(f, Window(f.dimension(), covering));
    out.sum_oscillation.entries[static_cast<Eigen::Index>(k)] = oscillation_vector(partial).at(j);
    out.majorant.entries[static_cast<Eigen::Index>(k)] = acc;
  }
  out.lhs = out.sum_oscillation.l2_squared();
  out.rhs = double(sites.size()) * df.l1() * df.l1();
  out.passed = out.lhs <= out.rhs + tolerance;
  out.majorant_dominates =
      ((out.sum_oscillation.entries - out.majorant.entries).array() <= tolerance).all();
  return out;
}

BoundReport quantitative_bound_check(double s_estimate, double d_estimate, double C,
                                     double tolerance, std::optional<BoundWitness> witness,
                                     bool sampled) {
  if (!(C > 0.0)) throw Error("concentration constant must be positive");
  BoundReport out;
  out.entropy = s_estimate;
  out.distance = d_estimate;
  out.constant = C;
  out.rhs = d_estimate * d_estimate / (2.0 * C);
  out.tolerance = tolerance;
  out.sampled = sampled;
  out.passed = s_estimate >= out.rhs - tolerance;
  if (witness && witness->oscillation > 0.0) {
    out.beta_star = witness->mean_gap / (C * witness->oscillation);
    out.witness_bound = witness->mean_gap * witness->mean_gap / (2.0 * C * witness->oscillation);
  }
  return out;
}

}  // namespace gibbslab

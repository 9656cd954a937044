#include "gibbslab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <random>

#include "gibbslab/transfer_matrix.hpp"

namespace gibbslab {

// --- sources ----------------------------------------------------------------

MarginalSource product_source(Eigen::VectorXd single_site, int dimension) {
  std::string name = "product(";
  for (Eigen::Index k = 0; k < single_site.size(); ++k) {
    name += (k ? "," : "") + std::to_string(single_site[k]);
  }
  name += ")";
  return {name, dimension, true,
          [law = std::move(single_site)](const Window& w) { return product_measure(w, law); }};
}

MarginalSource bernoulli_source(double p, int dimension) {
  MarginalSource s = product_source(Eigen::Vector2d(1.0 - p, p), dimension);
  s.name = "bernoulli(" + std::to_string(p) + ")";
  return s;
}

MarginalSource ising1d_source(double J, double h) {
  auto T = std::make_shared<TransferMatrix<double>>(ising_transfer_matrix(J, h));
  return {"ising1d(J=" + std::to_string(J) + ",h=" + std::to_string(h) + ")", 1, true,
          [T](const Window& w) { return transfer_matrix_marginal(*T, w); }};
}

MarginalSource potential1d_source(const Potential& U) {
  auto T = std::make_shared<TransferMatrix<double>>(transfer_matrix(U));
  return {"potential1d", 1, true, [T](const Window& w) { return transfer_matrix_marginal(*T, w); }};
}

MarginalSource torus_source(const Potential& U, int side) {
  auto torus = std::make_shared<WindowMeasure>(torus_gibbs(U, side).measure);
  return {"torus(L=" + std::to_string(side) + ")", U.dimension(), true,
          [torus, side](const Window& w) { return torus_marginal(*torus, side, w); }};
}

MarginalSource fixed_source(WindowMeasure mu, std::string name) {
  const int d = mu.window.dimension();
  return {std::move(name), d, true,
          [m = std::move(mu)](const Window& w) { return marginal(m, w); }};
}

EmpiricalMeasure empirical_measure(int q, const Window& window,
                                   const std::vector<std::size_t>& observed_indices) {
  if (observed_indices.empty()) throw Error("empirical measure needs at least one sample");
  const std::size_t n = checked_configuration_count(q, window.size(), "empirical_measure");
  EmpiricalMeasure out;
  out.counts.assign(n, 0);
  for (std::size_t idx : observed_indices) {
    if (idx >= n) throw Error("observed configuration index out of range");
    ++out.counts[idx];
  }
  out.samples = observed_indices.size();
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    w[static_cast<Eigen::Index>(k)] = double(out.counts[k]) / double(out.samples);
  }
  w /= w.sum();
  out.measure = WindowMeasure(q, window, std::move(w));
  return out;
}

// --- relative entropy -------------------------------------------------------

double relative_entropy_window(const WindowMeasure& nu, const WindowMeasure& mu) {
  if (nu.window != mu.window || nu.q != mu.q) {
    throw Error("relative entropy needs measures on a common window");
  }
  double s = 0.0;
  for (Eigen::Index k = 0; k < nu.weights.size(); ++k) {
    const double a = nu.weights[k];
    if (a == 0.0) continue;
    const double b = mu.weights[k];
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    s += a * std::log(a / b);
  }
  // Rounding can leave a tiny negative sum for nearly equal vectors.
  return std::max(s, 0.0);
}

double relative_entropy_window(const WindowMeasure& nu, const WindowMeasure& mu,
                               const Window& window) {
  return relative_entropy_window(marginal(nu, window), marginal(mu, window));
}

double variational_value(const LocalFunction& f, const WindowMeasure& nu, const WindowMeasure& mu) {
  if (nu.window != mu.window || nu.q != mu.q) {
    throw Error("variational value needs measures on a common window");
  }
  const Eigen::VectorXd values = evaluate_on(mu, f);
  const double shift = values.maxCoeff();
  const double log_mgf = shift + std::log(mu.weights.dot((values.array() - shift).exp().matrix()));
  return nu.weights.dot(values) - log_mgf;
}

LocalFunction log_ratio_function(const WindowMeasure& nu, const WindowMeasure& mu) {
  if (nu.window != mu.window || nu.q != mu.q) throw Error("log ratio needs a common window");
  if ((nu.weights.array() <= 0.0).any() || (mu.weights.array() <= 0.0).any()) {
    throw Error("log ratio needs strictly positive weights");
  }
  return LocalFunction(nu.q, nu.window, (nu.weights.array() / mu.weights.array()).log().matrix());
}

// --- densities --------------------------------------------------------------

EntropyDensityTrace entropy_density_sequence(const MarginalSource& nu, const MarginalSource& mu,
                                             int n_max, int n_min) {
  if (nu.dimension != mu.dimension) throw Error("sources have different dimensions");
  if (n_min < 0 || n_max < n_min) throw Error("invalid cube radius range");
  // Reject oversized cubes before any compute.
  const int q = mu(cube_window(0, mu.dimension)).q;
  checked_configuration_count(q, cube_window(n_max, nu.dimension).size(), "entropy_density_sequence");

  EntropyDensityTrace trace;
  trace.nu_source = nu.name;
  trace.mu_source = mu.name;
  trace.exact = nu.exact && mu.exact;
  for (int n = n_min; n <= n_max; ++n) {
    const Window cube = cube_window(n, nu.dimension);
    const double s = relative_entropy_window(nu(cube), mu(cube));
    trace.entries.push_back({n, cube.size(), s, s / double(cube.size())});
  }
  const auto& e = trace.entries;
  trace.liminf_estimate =
      e.size() >= 2 ? std::min(e[e.size() - 1].per_site, e[e.size() - 2].per_site) : e.back().per_site;
  return trace;
}

void write_entropy_trace_csv(std::ostream& os, const EntropyDensityTrace& trace) {
  os << "n,volume,s_window_nats,per_site_nats,source_flags\n" << std::setprecision(17);
  const char* flag = trace.exact ? "exact" : "sampled";
  for (const auto& e : trace.entries) {
    os << e.n << ',' << e.volume << ',' << e.window_entropy << ',' << e.per_site << ',' << flag << '\n';
  }
}

double ising_entropy_density_exact(IsingParams nu, IsingParams mu) {
  const IsingMoments m = ising_moments(nu.J, nu.h);
  const double s = ising_pressure(mu.J, mu.h) - ising_pressure(nu.J, nu.h) +
                   (nu.J - mu.J) * m.pair_correlation + (nu.h - mu.h) * m.magnetization;
  return std::max(s, 0.0);
}

double bootstrap_stderr(const EmpiricalMeasure& empirical,
                        const std::function<double(const WindowMeasure&)>& statistic,
                        int replicates, std::uint64_t seed) {
  if (replicates < 2) throw Error("bootstrap needs at least two replicates");
  std::mt19937_64 rng(seed);
  const auto& p = empirical.measure.weights;
  const Eigen::Index cells = p.size();
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(replicates));
  for (int b = 0; b < replicates; ++b) {
    // Sequential conditional binomials draw one multinomial sample.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(cells);
    std::uint64_t remaining = empirical.samples;
    double mass = 1.0;
    for (Eigen::Index k = 0; k < cells && remaining > 0; ++k) {
      std::uint64_t c = remaining;
      if (k + 1 < cells) {
        const double prob = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(remaining, prob);
        c = draw(rng);
      }
      w[k] = double(c) / double(empirical.samples);
      remaining -= c;
      mass -= p[k];
    }
    w /= w.sum();
    stats.push_back(statistic(WindowMeasure(empirical.measure.q, empirical.measure.window, w)));
  }
  double mean = 0.0;
  for (double s : stats) mean += s;
  mean /= double(stats.size());
  double var = 0.0;
  for (double s : stats) var += (s - mean) * (s - mean);
  return std::sqrt(var / double(stats.size() - 1));
}

}  // namespace gibbslab

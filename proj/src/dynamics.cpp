#include "gibbslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "compiled_energy.hpp"
#include "gibbslab/metric.hpp"
#include "gibbslab/parallel.hpp"
#include "gibbslab/rng.hpp"

namespace gibbslab {

namespace {

std::size_t torus_size(int side, int dimension) {
  std::size_t n = 1;
  for (int k = 0; k < dimension; ++k) n *= static_cast<std::size_t>(side);
  return n;
}

}  // namespace

std::size_t sample_index(const Eigen::VectorXd& weights, double u) {
  double acc = 0.0;
  const double total = weights.sum();
  for (Eigen::Index k = 0; k + 1 < weights.size(); ++k) {
    acc += weights[k];
    if (u * total < acc) return static_cast<std::size_t>(k);
  }
  return static_cast<std::size_t>(weights.size() - 1);
}

TorusState initial_state(const Eigen::VectorXd& law, int side, int dimension, std::uint64_t seed,
                         std::uint64_t replica) {
  if (law.size() < 1 || (law.array() < 0.0).any() || std::abs(law.sum() - 1.0) > 1e-12) {
    throw Error("initial single-site law must be a probability vector");
  }
  TorusState s;
  s.q = static_cast<int>(law.size());
  s.side = side;
  s.dimension = dimension;
  s.seed = seed;
  s.replica = replica;
  s.values.resize(torus_size(side, dimension));
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    s.values[k] = static_cast<int>(sample_index(law, counter_uniform(seed, replica, 0, k)));
  }
  return s;
}

TorusState state_from_index(int q, int side, int dimension, std::size_t index, std::uint64_t seed,
                            std::uint64_t replica) {
  TorusState s;
  s.q = q;
  s.side = side;
  s.dimension = dimension;
  s.seed = seed;
  s.replica = replica;
  s.values.resize(torus_size(side, dimension));
  decode_configuration(index, q, s.values);
  return s;
}

HeatBath::HeatBath(const Potential& U, int side)
    : q_(U.alphabet_size()),
      side_(side),
      dimension_(U.dimension()),
      log_prior_(U.a_priori().array().log()) {
  const detail::CompiledEnergy energy = detail::compile_torus(U, side);
  neighbours_.resize(torus_size(side, dimension_));
  for (const auto& term : energy.terms) {
    for (std::size_t p = 0; p < term.slots.size(); ++p) {
      neighbours_[static_cast<std::size_t>(term.slots[p])].push_back(
          {term.values, term.slots, static_cast<int>(p)});
    }
  }
}

Eigen::VectorXd HeatBath::conditional(const std::vector<int>& values, std::size_t site) const {
  Eigen::VectorXd logw = log_prior_;
  for (const auto& term : neighbours_[site]) {
    // Table index with the updated site set to 0, and that site's stride.
    std::size_t base = 0;
    std::size_t stride = 1;
    std::size_t position_stride = 1;
    for (std::size_t p = term.slots.size(); p-- > 0;) {
      if (static_cast<int>(p) == term.position) {
        position_stride = stride;
      } else {
        base += stride * static_cast<std::size_t>(values[static_cast<std::size_t>(term.slots[p])]);
      }
      stride *= static_cast<std::size_t>(q_);
    }
    for (int a = 0; a < q_; ++a) {
      logw[a] -= (*term.values)[static_cast<Eigen::Index>(base + position_stride * a)];
    }
  }
  const double shift = logw.maxCoeff();
  Eigen::VectorXd w = (logw.array() - shift).exp();
  return w / w.sum();
}

void HeatBath::sweep(TorusState& state) const {
  if (state.values.size() != neighbours_.size() || state.q != q_) {
    throw Error("torus state does not match the dynamics");
  }
  ++state.sweep;
  for (std::size_t k = 0; k < neighbours_.size(); ++k) {
    const double u = counter_uniform(state.seed, state.replica, state.sweep, k);
    state.values[k] = static_cast<int>(sample_index(conditional(state.values, k), u));
  }
}

TorusState heat_bath_sweep(TorusState state, const Potential& U) {
  HeatBath(U, state.side).sweep(state);
  return state;
}

DetailedBalanceReport detailed_balance_check(const Potential& U, int side, const KernelHook& hook,
                                             double tolerance) {
  const int q = U.alphabet_size();
  const std::size_t sites = torus_size(side, U.dimension());
  const std::size_t n = checked_configuration_count(q, sites, "detailed_balance_check");
  const HeatBath dynamics(U, side);
  const Eigen::VectorXd pi = torus_gibbs(U, side).measure.weights;

  auto rate = [&](const std::vector<int>& from, std::size_t from_index, std::size_t site, int to_label,
                  std::size_t to_index) {
    double c = dynamics.conditional(from, site)[to_label] / double(sites);
    if (hook) c = hook(from_index, to_index, c);
    return c;
  };

  DetailedBalanceReport out;
  out.tolerance = tolerance;
  std::vector<int> sigma(sites);
  std::vector<int> eta(sites);
  for (std::size_t s = 0; s < n; ++s) {
    decode_configuration(s, q, sigma);
    for (std::size_t i = 0; i < sites; ++i) {
      for (int a = 0; a < q; ++a) {
        if (a == sigma[i]) continue;
        eta = sigma;
        eta[i] = a;
        const std::size_t e = encode_configuration(eta, q);
        const double forward = pi[static_cast<Eigen::Index>(s)] * rate(sigma, s, i, a, e);
        const double backward = pi[static_cast<Eigen::Index>(e)] * rate(eta, e, i, sigma[i], s);
        const double violation = std::abs(forward - backward);
        ++out.transitions;
        if (violation > out.max_violation) {
          out.max_violation = violation;
          out.from = s;
          out.to = e;
          out.site = i;
        }
      }
    }
  }
  out.passed = out.max_violation <= tolerance;
  return out;
}

std::vector<std::size_t> torus_slots(const Window& window, int side) {
  std::vector<std::size_t> out;
  out.reserve(window.size());
  for (const auto& site : window.sites()) {
    std::size_t idx = 0;
    for (int c : site) {
      idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(((c % side) + side) % side);
    }
    out.push_back(idx);
  }
  return out;
}

std::size_t window_index(const TorusState& state, const std::vector<std::size_t>& slots) {
  std::size_t idx = 0;
  for (std::size_t s : slots) {
    idx = idx * static_cast<std::size_t>(state.q) + static_cast<std::size_t>(state.values[s]);
  }
  return idx;
}

std::vector<std::vector<std::size_t>> run_replicas(const HeatBath& dynamics,
                                                   const StateFactory& factory,
                                                   const std::vector<int>& checkpoints,
                                                   const Window& window, std::size_t replicas) {
  if (checkpoints.empty()) throw Error("at least one checkpoint is required");
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    if (checkpoints[c] < 0 || (c > 0 && checkpoints[c] <= checkpoints[c - 1])) {
      throw Error("checkpoints must be nonnegative and strictly increasing");
    }
  }
  if (window.dimension() != dynamics.dimension()) throw Error("window dimension mismatch");
  const std::vector<std::size_t> slots = torus_slots(window, dynamics.side());
  std::vector<std::vector<std::size_t>> obs(checkpoints.size(), std::vector<std::size_t>(replicas));
  parallel_for(
      replicas,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          TorusState state = factory(k);
          for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            while (state.sweep < static_cast<std::uint64_t>(checkpoints[c])) dynamics.sweep(state);
            obs[c][k] = window_index(state, slots);
          }
        }
      },
      1);
  return obs;
}

ConvergenceTrace convergence_experiment(const Potential& U, const Eigen::VectorXd& initial_law,
                                        const MarginalSource& target,
                                        const ConvergenceOptions& options) {
  const int q = U.alphabet_size();
  const int d = U.dimension();
  if (initial_law.size() != q) throw Error("initial law has the wrong alphabet size");
  if (target.dimension != d) throw Error("target dimension differs from the potential");
  if (options.samples < 2) throw Error("convergence experiment needs at least two samples");
  const Window window = cube_window(options.radius, d);
  checked_configuration_count(q, window.size(), "convergence_experiment");
  const HeatBath dynamics(U, options.side);
  const WindowMeasure reference = target(window);

  ConvergenceTrace trace;
  trace.side = options.side;
  trace.radius = options.radius;
  trace.target = target.name;
  trace.target_exact = target.exact;
  const double expected_min = double(options.samples) * reference.weights.minCoeff();
  if (expected_min < 10.0) {
    trace.warnings.push_back("undersampled: smallest expected window count is " +
                             std::to_string(expected_min));
  }

  const auto obs = run_replicas(
      dynamics,
      [&](std::uint64_t replica) {
        return initial_state(initial_law, options.side, d, options.seed, replica);
      },
      options.checkpoints, window, options.samples);

  const double volume = double(window.size());
  auto distance = [&](const WindowMeasure& m) { return distance_lp(m, reference).value; };
  auto entropy = [&](const WindowMeasure& m) {
    return relative_entropy_window(m, reference) / volume;
  };
  for (std::size_t c = 0; c < options.checkpoints.size(); ++c) {
    const EmpiricalMeasure emp = empirical_measure(q, window, obs[c]);
    ConvergenceEntry e;
    e.t = options.checkpoints[c];
    e.samples = emp.samples;
    e.distance = distance(emp.measure);
    e.entropy_per_site = entropy(emp.measure);
    const std::uint64_t key = mix64(options.seed ^ mix64(c));
    e.distance_stderr = bootstrap_stderr(emp, distance, options.bootstrap_replicates, key);
    e.entropy_stderr = bootstrap_stderr(emp, entropy, options.bootstrap_replicates, mix64(key));
    trace.entries.push_back(e);
  }
  return trace;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTrace& trace) {
  os << "t,d_r,d_r_stderr,entropy_per_site,entropy_stderr,samples\n" << std::setprecision(17);
  for (const auto& e : trace.entries) {
    os << e.t << ',' << e.distance << ',' << e.distance_stderr << ',' << e.entropy_per_site << ','
       << e.entropy_stderr << ',' << e.samples << '\n';
  }
}

}  // namespace gibbslab

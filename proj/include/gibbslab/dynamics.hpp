#pragma once

// Heat-bath Glauber dynamics on periodic boxes, exact detailed-balance
// checks, and replica experiments measuring convergence to a target law.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/entropy.hpp"
#include "gibbslab/measures.hpp"

namespace gibbslab {

/// Configuration on {0..L-1}^d, indexed like box_window(L, d). Sweep k draws
/// its randomness from the counter (seed, replica, k, site).
struct TorusState {
  int q = 2;
  int side = 0;
  int dimension = 1;
  std::vector<int> values;
  std::uint64_t sweep = 0;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
};

/// Product-law initial state; uses counter sweep 0.
TorusState initial_state(const Eigen::VectorXd& law, int side, int dimension, std::uint64_t seed,
                         std::uint64_t replica = 0);
/// Initial state with the given torus configuration index.
TorusState state_from_index(int q, int side, int dimension, std::size_t index, std::uint64_t seed,
                            std::uint64_t replica = 0);

/// Index of u under the cumulative sum of weights (inversion sampling).
std::size_t sample_index(const Eigen::VectorXd& weights, double u);

/// A potential resolved on the torus, with the interaction terms seen by
/// each site.
class HeatBath {
 public:
  /// Throws unless range < side / 2.
  HeatBath(const Potential& U, int side);

  int alphabet_size() const { return q_; }
  int side() const { return side_; }
  int dimension() const { return dimension_; }
  std::size_t sites() const { return neighbours_.size(); }

  /// Exact law of the spin at `site` given the others.
  Eigen::VectorXd conditional(const std::vector<int>& values, std::size_t site) const;
  /// One sequential sweep in site-index order.
  void sweep(TorusState& state) const;

 private:
  struct LocalTerm {
    const Eigen::VectorXd* values;
    std::vector<int> slots;
    int position;  // index of the updated site within slots
  };
  int q_;
  int side_;
  int dimension_;
  Eigen::VectorXd log_prior_;
  std::vector<std::vector<LocalTerm>> neighbours_;
};

TorusState heat_bath_sweep(TorusState state, const Potential& U);

struct DetailedBalanceReport {
  double max_violation = 0.0;
  double tolerance = 1e-12;
  bool passed = true;
  std::size_t transitions = 0;
  // Transition attaining the maximum.
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t site = 0;
};

/// Rate modifier applied to c(from -> to) before the check.
using KernelHook = std::function<double(std::size_t from, std::size_t to, double rate)>;

/// Random-site heat-bath kernel c(s -> s') = pi(s'_i | s_{-i}) / N against
/// the torus Gibbs weights.
DetailedBalanceReport detailed_balance_check(const Potential& U, int side,
                                             const KernelHook& hook = {},
                                             double tolerance = 1e-12);

/// Torus indices of the window sites, reduced modulo the side.
std::vector<std::size_t> torus_slots(const Window& window, int side);
/// Configuration index of the state restricted to the given slots.
std::size_t window_index(const TorusState& state, const std::vector<std::size_t>& slots);

using StateFactory = std::function<TorusState(std::uint64_t replica)>;

/// observations[c][k]: window index of replica k at checkpoints[c].
/// Replicas run concurrently; the result does not depend on the worker count.
std::vector<std::vector<std::size_t>> run_replicas(const HeatBath& dynamics,
                                                   const StateFactory& factory,
                                                   const std::vector<int>& checkpoints,
                                                   const Window& window, std::size_t replicas);

struct ConvergenceOptions {
  int side = 64;
  std::vector<int> checkpoints{0, 1, 2, 4, 8, 16};
  int radius = 1;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  int bootstrap_replicates = 200;
};

struct ConvergenceEntry {
  int t = 0;
  double distance = 0.0;
  double distance_stderr = 0.0;
  double entropy_per_site = 0.0;
  double entropy_stderr = 0.0;
  std::size_t samples = 0;
};

struct ConvergenceTrace {
  int side = 0;
  int radius = 0;
  std::string target;
  bool target_exact = true;
  std::vector<ConvergenceEntry> entries;
  std::vector<std::string> warnings;
};

ConvergenceTrace convergence_experiment(const Potential& U, const Eigen::VectorXd& initial_law,
                                        const MarginalSource& target,
                                        const ConvergenceOptions& options);

/// CSV columns t, d_r, d_r_stderr, entropy_per_site, entropy_stderr, samples.
void write_convergence_csv(std::ostream& os, const ConvergenceTrace& trace);

}  // namespace gibbslab

#pragma once

// Tabulated local functions and their oscillation vectors.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/lattice.hpp"

namespace gibbslab {

/// A local function stored as a dense table over the configurations of its
/// dependence window (mixed radix, last site fastest).
class LocalFunction {
 public:
  LocalFunction(int q, Window window, Eigen::VectorXd table);

  static LocalFunction constant(int q, int dimension, double value);
  /// Tabulates `fn` over all configurations of `window`.
  static LocalFunction tabulate(int q, Window window,
                                const std::function<double(std::span<const int>)>& fn);

  int alphabet_size() const { return q_; }
  const Window& window() const { return window_; }
  int dimension() const { return window_.dimension(); }
  const Eigen::VectorXd& table() const { return table_; }

  double at_index(std::size_t index) const { return table_[static_cast<Eigen::Index>(index)]; }
  double operator()(std::span<const int> values) const;
  /// Evaluates on any configuration whose window covers the dependence window.
  double operator()(const Configuration& sigma) const;

  LocalFunction scaled(double beta) const;
  LocalFunction shifted(double offset) const;

 private:
  int q_;
  Window window_;
  Eigen::VectorXd table_;
};

LocalFunction operator+(const LocalFunction& f, const LocalFunction& g);

/// Site indicator sigma_site (raw label value, so 0/1 for q = 2).
LocalFunction site_value(int q, const Site& site);
/// 1[sigma_a == sigma_b].
LocalFunction equality_indicator(int q, const Site& a, const Site& b);

/// Oscillation vector: one entry per site of `window`, zero elsewhere.
struct OscillationVector {
  Window window;
  Eigen::VectorXd entries;

  double at(const Site& site) const;
  double l1() const { return entries.sum(); }
  double l2_squared() const { return entries.squaredNorm(); }
  double linf() const { return entries.size() ? entries.maxCoeff() : 0.0; }
  double lp(double p) const;
};

/// How a sitewise oscillation is measured.
///
/// `diameter` is the plain sup of f(sigma) - f(eta) over pairs differing at
/// one site. `metric_quotient` divides that difference by psi(sigma_i,
/// eta_i). A custom rule can be supplied as a callable; it is the caller's job
/// to run axiom_check on it before trusting it.
class OscillationRule {
 public:
  enum class Kind { diameter, metric_quotient, custom };
  using Custom = std::function<OscillationVector(const LocalFunction&)>;

  static OscillationRule diameter();
  static OscillationRule metric_quotient(Eigen::MatrixXd psi);
  static OscillationRule custom(std::string name, Custom fn);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Eigen::MatrixXd& psi() const { return psi_; }

  OscillationVector operator()(const LocalFunction& f) const;

 private:
  OscillationRule(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  Eigen::MatrixXd psi_;
  Custom custom_;
};

OscillationVector oscillation_vector(const LocalFunction& f,
                                     const OscillationRule& rule = OscillationRule::diameter());

/// tau_i f(sigma) = f(tau_i sigma); the dependence window
/// becomes D_f - i.
LocalFunction translate_function(const LocalFunction& f, const Site& shift);

/// Sum of the copies of f placed at each i in `sites`, tabulated on
/// sites (+) D_f. Throws CapError past the tabulation cap.
LocalFunction ergodic_sum(const LocalFunction& f, const Window& sites);

/// f_{Lambda,xi}(eta) = f(eta_Lambda xi_{Lambda^c}), tabulated on D_f cap
/// Lambda. xi must cover D_f minus Lambda.
LocalFunction local_approximation(const LocalFunction& f, const Window& keep,
                                  const Configuration& xi);

/// Re-tabulates f on a larger window (extra sites are dummies).
LocalFunction extend_to(const LocalFunction& f, const Window& window);

/// True when f does not depend on the coordinate at window position k.
bool is_constant_in(const LocalFunction& f, std::size_t k, double tolerance = 0.0);

struct AxiomResult {
  std::string axiom;
  bool passed = true;
  std::size_t checks = 0;
  std::string witness;
};

struct AxiomReport {
  std::string rule;
  std::vector<AxiomResult> results;  // translation, non-degeneracy, monotonicity, homogeneity

  bool all_passed() const;
};

/// Checks the four allowed-oscillation axioms on sample functions. Random
/// choices (shifts, frozen boundaries, sub-windows) come from `seed`.
AxiomReport axiom_check(const OscillationRule& rule,
                        const std::vector<LocalFunction>& samples,
                        std::uint64_t seed = 1);

/// Random local function: table entries uniform in [-1, 1] on a random
/// window drawn inside the cube of the given radius; at most `max_sites`.
template <typename Rng>
LocalFunction random_local_function(Rng& rng, int q, int dimension,
                                    std::size_t max_sites, int radius = 1);

}  // namespace gibbslab

#include "gibbslab/funcspace_random.hpp"

#pragma once

// Relative entropy on windows, its variational form, densities along cubes.
// All entropies are in nats.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gibbslab/measures.hpp"

namespace gibbslab {

/// Supplies window marginals of a translation-invariant law.
struct MarginalSource {
  std::string name;
  int dimension = 1;
  bool exact = true;
  std::function<WindowMeasure(const Window&)> marginal;

  WindowMeasure operator()(const Window& w) const { return marginal(w); }
};

MarginalSource product_source(Eigen::VectorXd single_site, int dimension = 1);
MarginalSource bernoulli_source(double p, int dimension = 1);
/// Exact infinite-volume 1D Ising marginals from the transfer matrix.
MarginalSource ising1d_source(double J, double h);
/// Exact marginals of a 1D nearest-neighbour potential.
MarginalSource potential1d_source(const Potential& U);
/// Marginals of the torus Gibbs measure of side L (a finite-volume proxy).
MarginalSource torus_source(const Potential& U, int side);
/// Fixed measure; windows must be sub-windows of mu.window.
MarginalSource fixed_source(WindowMeasure mu, std::string name = "fixed");

/// Empirical measure from counts; sampled, so carries its sample size.
struct EmpiricalMeasure {
  WindowMeasure measure;
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
};

EmpiricalMeasure empirical_measure(int q, const Window& window,
                                   const std::vector<std::size_t>& observed_indices);

/// sum nu log(nu/mu), +inf when nu is not absolutely continuous w.r.t. mu.
double relative_entropy_window(const WindowMeasure& nu, const WindowMeasure& mu);
/// Restricts both measures to `window` first.
double relative_entropy_window(const WindowMeasure& nu, const WindowMeasure& mu,
                               const Window& window);

/// int f dnu - log int e^f dmu.
double variational_value(const LocalFunction& f, const WindowMeasure& nu, const WindowMeasure& mu);

/// log(dnu/dmu) tabulated on the common window; needs both strictly positive.
LocalFunction log_ratio_function(const WindowMeasure& nu, const WindowMeasure& mu);

struct EntropyTraceEntry {
  int n;
  std::size_t volume;
  double window_entropy;
  double per_site;
};

struct EntropyDensityTrace {
  std::string nu_source;
  std::string mu_source;
  bool exact = true;
  std::vector<EntropyTraceEntry> entries;
  /// Minimum of the last two per-site values (an estimate, not the liminf).
  double liminf_estimate = 0.0;
};

/// s_{Lambda_n}(nu|mu) / |Lambda_n| for n = n_min..n_max.
EntropyDensityTrace entropy_density_sequence(const MarginalSource& nu, const MarginalSource& mu,
                                             int n_max, int n_min = 0);

/// CSV columns n, volume, s_window_nats, per_site_nats, source_flags.
void write_entropy_trace_csv(std::ostream& os, const EntropyDensityTrace& trace);

struct IsingParams {
  double J = 0.0;
  double h = 0.0;
};

/// s_*(nu|mu) = p(mu) - p(nu) + (J'-J) E_nu[s0 s1] + (h'-h) E_nu[s0] from the
/// transfer-matrix eigen-data (nu has parameters J', h').
double ising_entropy_density_exact(IsingParams nu, IsingParams mu);

/// Bootstrap standard deviation of `statistic` under multinomial resampling
/// of the empirical measure. Deterministic given `seed`.
double bootstrap_stderr(const EmpiricalMeasure& empirical,
                        const std::function<double(const WindowMeasure&)>& statistic,
                        int replicates, std::uint64_t seed);

}  // namespace gibbslab

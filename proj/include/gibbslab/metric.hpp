#pragma once

// The oscillation-constrained distance between measures, solved exactly per
// window radius, and Hamming-cost Wasserstein distances.

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbslab/entropy.hpp"
#include "gibbslab/funcspace.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/simplex.hpp"

namespace gibbslab {

/// d_r: sup of int f dnu - int f dmu over f tabulated on Lambda_r with
/// |delta f|_1 <= 1. Nondecreasing in r; a lower bound on the full distance.
struct MetricLpSolution {
  int radius = 0;
  double value = 0.0;
  LocalFunction witness;
  OscillationVector budgets;  // t_i, sum <= 1, t_i >= delta_i witness
  LpStatus status = LpStatus::optimal;
  int iterations = 0;
  double witness_oscillation_l1 = 0.0;  // |delta witness|_1 recomputed
  double witness_objective = 0.0;       // objective recomputed from witness

  MetricLpSolution() : witness(LocalFunction::constant(2, 1, 0.0)) {}
};

/// Solves the distance LP on the common window of the two marginals.
MetricLpSolution distance_lp(const WindowMeasure& nu, const WindowMeasure& mu);
/// Marginals on Lambda_r from the sources, then the LP.
MetricLpSolution distance_lp(const MarginalSource& nu, const MarginalSource& mu, int radius);

/// JSON {radius, value, witness_function, budgets}.
std::string metric_solution_json(const MetricLpSolution& solution);

/// Default bound on the configurations per window for the coupling LP
/// (three binary sites).
inline constexpr std::size_t kWassersteinConfigurationCap = 8;

/// W_1 with cost sum_i 1[omega_i != eta_i], by the transport LP.
double wasserstein_hamming(const WindowMeasure& mu, const WindowMeasure& nu,
                           std::size_t configuration_cap = kWassersteinConfigurationCap);

}  // namespace gibbslab

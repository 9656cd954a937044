#pragma once

// Gaussian concentration: exponential-moment functional, empirical constant
// scans, the convolution bound on ergodic sums, and the entropy/metric check.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/funcspace.hpp"
#include "gibbslab/measures.hpp"

namespace gibbslab {

/// log sum mu(sigma) exp(f(sigma) - E_mu f), computed with a max shift.
double gcb_log_moment(const WindowMeasure& mu, const LocalFunction& f);

/// 41 log-spaced magnitudes in [1e-3, 8], both signs (82 points).
std::vector<double> default_beta_grid();

struct GcbScanResult {
  std::string function_id;
  double norm2sq = 0.0;
  std::vector<double> betas;
  std::vector<double> log_moments;
  std::vector<double> candidates;  // 2 L(beta) / (beta^2 |delta f|_2^2)
  double variance_ratio = 0.0;     // beta -> 0 limit, Var / |delta f|_2^2
  double empirical_constant = 0.0;

  /// min over the grid of (C/2) beta^2 |delta f|^2 - L(beta).
  double min_residual(double C) const;
};

/// Throws when f is constant (zero oscillation norm) or the grid contains 0.
GcbScanResult gcb_scan(const WindowMeasure& mu, const LocalFunction& f,
                       const std::vector<double>& betas = default_beta_grid(),
                       std::string function_id = "");

/// Lower bound on any valid GCB constant for mu: sup over the grid and the
/// small-beta variance ratio.
double empirical_constant(const WindowMeasure& mu, const LocalFunction& f,
                          const std::vector<double>& betas = default_beta_grid());

/// CSV rows function_id, beta, log_moment, norm2sq, constant_candidate.
void write_scan_csv(std::ostream& os, const std::vector<GcbScanResult>& scans);

/// Twenty fixed test functions on the three sites {-e_1, 0, e_1}: site
/// values, pair equalities, sums, majority, parity, products, extrema and a
/// few nonlinear tables.
std::vector<LocalFunction> structured_functions(int q, int dimension);

struct YoungReport {
  double lhs = 0.0;  // |delta(sum_i f placed at i)|_2^2
  double rhs = 0.0;  // |Lambda| |delta f|_1^2
  bool passed = false;
  OscillationVector sum_oscillation;
  OscillationVector majorant;  // (delta f * 1_Lambda)
  bool majorant_dominates = false;

  double margin() const { return rhs - lhs; }
};

/// Exact: each delta_j of the ergodic sum is computed from the copies of f
/// whose windows contain j, so the full sum is never tabulated.
YoungReport young_check(const LocalFunction& f, const Window& sites, double tolerance = 1e-9);

/// Optional witness of the optimization over beta in the proof of the bound.
struct BoundWitness {
  double mean_gap;     // u = int f dnu - int f dmu
  double oscillation;  // rho = |delta f|_1^2
};

struct BoundReport {
  double entropy = 0.0;   // s estimate
  double distance = 0.0;  // d estimate
  double constant = 0.0;  // C
  double rhs = 0.0;       // d^2 / (2C)
  double tolerance = 0.0;
  bool passed = false;
  std::optional<double> beta_star;  // u / (C rho)
  std::optional<double> witness_bound;  // u^2 / (2 C rho)
  bool sampled = false;

  double margin() const { return entropy - rhs; }
};

BoundReport quantitative_bound_check(double s_estimate, double d_estimate, double C,
                                     double tolerance = 1e-9,
                                     std::optional<BoundWitness> witness = std::nullopt,
                                     bool sampled = false);

}  // namespace gibbslab

#pragma once

// Explicit probability measures on finite windows: products, finite-volume
// Gibbs measures of finite-range potentials, torus Gibbs measures.

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "gibbslab/funcspace.hpp"
#include "gibbslab/lattice.hpp"

namespace gibbslab {

/// Probability vector over the configurations of a window.
struct WindowMeasure {
  int q = 2;
  Window window;
  Eigen::VectorXd weights;

  WindowMeasure() = default;
  /// Throws unless weights are nonnegative and sum to 1 within 1e-12.
  WindowMeasure(int q, Window window, Eigen::VectorXd weights);

  std::size_t configurations() const { return static_cast<std::size_t>(weights.size()); }
};

WindowMeasure product_measure(const Window& window, const Eigen::VectorXd& single_site);
/// Two-state product law with P(label 1) = p.
WindowMeasure bernoulli_product(const Window& window, double p);

/// Marginal on a sub-window.
WindowMeasure marginal(const WindowMeasure& mu, const Window& sub);

/// Sum over configurations of mu(sigma) f(sigma restricted to D_f).
double expectation(const WindowMeasure& mu, const LocalFunction& f);

/// Values of f at every configuration of mu's window (f extended).
Eigen::VectorXd evaluate_on(const WindowMeasure& mu, const LocalFunction& f);

double total_variation(const WindowMeasure& a, const WindowMeasure& b);

/// CSV with header "index,weight".
void write_measure_csv(std::ostream& os, const WindowMeasure& mu);

// --- potentials -------------------------------------------------------------

/// One interaction shape and its energy table; the potential contains every
/// translate of the shape.
struct PotentialTerm {
  Window shape;
  Eigen::VectorXd values;
};

class Potential {
 public:
  Potential(int q, int dimension, Eigen::VectorXd a_priori, std::vector<PotentialTerm> terms);

  int alphabet_size() const { return q_; }
  int dimension() const { return dimension_; }
  const Eigen::VectorXd& a_priori() const { return a_priori_; }
  const std::vector<PotentialTerm>& terms() const { return terms_; }
  /// Largest coordinate span of any shape (0 for single-site terms).
  int range() const;

 private:
  int q_;
  int dimension_;
  Eigen::VectorXd a_priori_;
  std::vector<PotentialTerm> terms_;
};

Potential zero_potential(int q, int dimension);
/// H = -J sum_<ij> s_i s_j - h sum_i s_i with s = 2*label - 1, nearest
/// neighbours along every axis, uniform a priori measure.
Potential ising_potential(double J, double h, int dimension = 1);

inline int ising_spin(int label) { return 2 * label - 1; }

struct FreeBoundary {};
/// Fixed boundary xi, or free (terms leaving the volume are dropped).
using Boundary = std::variant<Configuration, FreeBoundary>;

/// H_Lambda^xi(sigma) = sum over translates A with A cap Lambda nonempty.
double hamiltonian(const Potential& U, const Configuration& sigma, const Boundary& boundary);

struct GibbsWindow {
  WindowMeasure measure;
  double log_partition = 0.0;
};

/// e^{-H} lambda_Lambda / Z on Lambda. Summation order is fixed by the
/// configuration index.
GibbsWindow finite_volume_gibbs(const Potential& U, const Window& volume,
                                const Boundary& boundary);

/// Gibbs measure on the periodic box {0..L-1}^d. Requires range < L/2.
GibbsWindow torus_gibbs(const Potential& U, int side);

/// Marginal of a translation-invariant torus measure on an arbitrary window,
/// mapping sites modulo the side length.
WindowMeasure torus_marginal(const WindowMeasure& torus, int side, const Window& window);

}  // namespace gibbslab

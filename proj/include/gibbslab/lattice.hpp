#pragma once

// Geometry of Z^d: finite windows, configurations, translations, patching.
//
// Sites inside a window are kept in lexicographic order. Configurations of a
// window are enumerated in mixed radix with the last site varying fastest;
// every module shares this indexing.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gibbslab/error.hpp"

namespace gibbslab {

using Site = std::vector<int>;

Site add(const Site& a, const Site& b);
Site subtract(const Site& a, const Site& b);
Site negate(const Site& a);
Site origin(int dimension);

/// Finite single-spin space {0, ..., q-1} with an optional metric table.
class SpinAlphabet {
 public:
  explicit SpinAlphabet(int size);
  SpinAlphabet(int size, Eigen::MatrixXd metric);

  int size() const { return size_; }
  bool has_metric() const { return metric_.has_value(); }
  const Eigen::MatrixXd& metric() const;
  /// Discrete metric when no table was supplied.
  double distance(int a, int b) const;
  double diameter() const;

 private:
  int size_;
  std::optional<Eigen::MatrixXd> metric_;
};

class Window {
 public:
  explicit Window(int dimension = 1);
  /// Sorts the sites; throws on duplicates or dimension mismatch.
  Window(int dimension, std::vector<Site> sites);

  int dimension() const { return dimension_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& operator[](std::size_t k) const { return sites_[k]; }

  std::optional<std::size_t> index_of(const Site& site) const;
  bool contains(const Site& site) const { return index_of(site).has_value(); }
  bool is_subset_of(const Window& other) const;

  Window translated(const Site& shift) const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  int dimension_;
  std::vector<Site> sites_;
};

/// Lambda_n = [-n, n]^d.
Window cube_window(int n, int dimension);
/// {0, ..., side-1}^d, the vertex set of a torus.
Window box_window(int side, int dimension);
/// Contiguous 1D interval {first, ..., first+length-1}.
Window interval_window(int first, int length);

Window window_union(const Window& a, const Window& b);
Window window_intersection(const Window& a, const Window& b);
Window window_difference(const Window& a, const Window& b);
/// {i + j : i in a, j in b}.
Window minkowski_sum(const Window& a, const Window& b);

// --- configuration indexing -------------------------------------------------

/// Default cap on the number of entries of any exact tabulation (2^20).
inline constexpr std::size_t kDefaultTabulationCap = std::size_t{1} << 20;

/// Current cap; GIBBSLAB_CAP overrides the default at first use.
std::size_t tabulation_cap();
void set_tabulation_cap(std::size_t cap);

/// q^sites, or nullopt on overflow.
std::optional<std::size_t> configuration_count(int q, std::size_t sites);
/// q^sites; throws CapError when above tabulation_cap().
std::size_t checked_configuration_count(int q, std::size_t sites,
                                        const char* context);

void decode_configuration(std::size_t index, int q, std::span<int> out);
std::size_t encode_configuration(std::span<const int> values, int q);

struct Configuration {
  Window window;
  std::vector<int> values;

  Configuration() = default;
  Configuration(Window w, std::vector<int> v);

  /// Throws if some label is not below q.
  void validate(int q) const;
  std::optional<int> value_at(const Site& site) const;
  /// Restriction to a sub-window; throws if a site is missing.
  Configuration restricted(const Window& sub) const;

  friend bool operator==(const Configuration&,
                         const Configuration&) = default;
};

Configuration uniform_configuration(const Window& window, int label);

/// (tau_i sigma)_{j+i} = sigma_j: the window moves by i, values ride along.
Configuration translate_configuration(const Configuration& sigma,
                                      const Site& shift);

/// eta_Lambda xi_{Lambda^c} on Lambda union Lambda'. Sites outside both
/// windows cannot be requested here, so the only failure is an inconsistent
/// dimension.
Configuration patch(const Configuration& eta, const Configuration& xi);

/// Values on `target`, taking eta where defined and xi elsewhere; throws if a
/// target site lies in neither window.
Configuration patch_onto(const Configuration& eta, const Configuration& xi,
                         const Window& target);

}  // namespace gibbslab

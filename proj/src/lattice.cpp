#include "gibbslab/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <string>

namespace gibbslab {

namespace {

void require_same_dimension(const Site& a, const Site& b) {
  if (a.size() != b.size()) {
    throw Error("site dimension mismatch");
  }
}

void require_same_dimension(const Window& a, const Window& b) {
  if (a.dimension() != b.dimension()) {
    throw Error("window dimension mismatch");
  }
}

std::size_t cap_from_environment() {
  if (const char* env = std::getenv("GIBBSLAB_CAP")) {
    try {
      long long value = std::stoll(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
  }
  return kDefaultTabulationCap;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{cap_from_environment()};
  return cap;
}

}  // namespace

Site add(const Site& a, const Site& b) {
  require_same_dimension(a, b);
  Site out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

Site subtract(const Site& a, const Site& b) {
  require_same_dimension(a, b);
  Site out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

Site negate(const Site& a) {
  Site out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = -a[k];
  return out;
}

Site origin(int dimension) { return Site(static_cast<std::size_t>(dimension), 0); }

// --- SpinAlphabet -----------------------------------------------------------

SpinAlphabet::SpinAlphabet(int size) : size_(size) {
  if (size < 2) throw Error("alphabet size must be at least 2");
}

SpinAlphabet::SpinAlphabet(int size, Eigen::MatrixXd metric)
    : SpinAlphabet(size) {
  if (metric.rows() != size || metric.cols() != size) {
    throw Error("metric table must be q x q");
  }
  for (int a = 0; a < size; ++a) {
    if (metric(a, a) != 0.0) throw Error("metric must vanish on the diagonal");
    for (int b = 0; b < size; ++b) {
      if (metric(a, b) != metric(b, a)) throw Error("metric must be symmetric");
      if (a != b && !(metric(a, b) > 0.0)) {
        throw Error("metric must be positive off the diagonal");
      }
      if (!std::isfinite(metric(a, b))) throw Error("metric must be finite");
    }
  }
  metric_ = std::move(metric);
}

const Eigen::MatrixXd& SpinAlphabet::metric() const {
  if (!metric_) throw Error("alphabet has no metric");
  return *metric_;
}

double SpinAlphabet::distance(int a, int b) const {
  if (metric_) return (*metric_)(a, b);
  return a == b ? 0.0 : 1.0;
}

double SpinAlphabet::diameter() const {
  if (metric_) return metric_->maxCoeff();
  return 1.0;
}

// --- Window -----------------------------------------------------------------

Window::Window(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw Error("window dimension must be at least 1");
}

Window::Window(int dimension, std::vector<Site> sites)
    : dimension_(dimension), sites_(std::move(sites)) {
  if (dimension < 1) throw Error("window dimension must be at least 1");
  for (const auto& s : sites_) {
    if (static_cast<int>(s.size()) != dimension) {
      throw Error("site has wrong dimension");
    }
  }
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end()) {
    throw Error("window contains duplicate sites");
  }
}

std::optional<std::size_t> Window::index_of(const Site& site) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) return std::nullopt;
  return static_cast<std::size_t>(it - sites_.begin());
}

bool Window::is_subset_of(const Window& other) const {
  if (dimension_ != other.dimension_) return false;
  return std::includes(other.sites_.begin(), other.sites_.end(),
                       sites_.begin(), sites_.end());
}

Window Window::translated(const Site& shift) const {
  if (static_cast<int>(shift.size()) != dimension_) {
    throw Error("shift has wrong dimension");
  }
  Window out(dimension_);
  out.sites_.reserve(sites_.size());
  // A uniform shift preserves lexicographic order.
  for (const auto& s : sites_) out.sites_.push_back(add(s, shift));
  return out;
}

Window cube_window(int n, int dimension) {
  if (n < 0) throw Error("cube radius must be nonnegative");
  Window box = box_window(2 * n + 1, dimension);
  return box.translated(Site(static_cast<std::size_t>(dimension), -n));
}

Window box_window(int side, int dimension) {
  if (side < 1) throw Error("box side must be positive");
  if (dimension < 1) throw Error("window dimension must be at least 1");
  std::vector<Site> sites;
  Site current(static_cast<std::size_t>(dimension), 0);
  while (true) {
    sites.push_back(current);
    int k = dimension - 1;
    while (k >= 0 && ++current[static_cast<std::size_t>(k)] == side) {
      current[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return Window(dimension, std::move(sites));
}

Window interval_window(int first, int length) {
  if (length < 0) throw Error("interval length must be nonnegative");
  std::vector<Site> sites;
  for (int k = 0; k < length; ++k) sites.push_back(Site{first + k});
  return Window(1, std::move(sites));
}

Window window_union(const Window& a, const Window& b) {
  require_same_dimension(a, b);
  std::vector<Site> out;
  std::set_union(a.sites().begin(), a.sites().end(), b.sites().begin(),
                 b.sites().end(), std::back_inserter(out));
  return Window(a.dimension(), std::move(out));
}

Window window_intersection(const Window& a, const Window& b) {
  require_same_dimension(a, b);
  std::vector<Site> out;
  std::set_intersection(a.sites().begin(), a.sites().end(), b.sites().begin(),
                        b.sites().end(), std::back_inserter(out));
  return Window(a.dimension(), std::move(out));
}

Window window_difference(const Window& a, const Window& b) {
  require_same_dimension(a, b);
  std::vector<Site> out;
  std::set_difference(a.sites().begin(), a.sites().end(), b.sites().begin(),
                      b.sites().end(), std::back_inserter(out));
  return Window(a.dimension(), std::move(out));
}

Window minkowski_sum(const Window& a, const Window& b) {
  require_same_dimension(a, b);
  std::vector<Site> out;
  out.reserve(a.size() * b.size());
  for (const auto& i : a.sites()) {
    for (const auto& j : b.sites()) out.push_back(add(i, j));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Window(a.dimension(), std::move(out));
}

// --- indexing ---------------------------------------------------------------

std::size_t tabulation_cap() { return cap_storage().load(); }

void set_tabulation_cap(std::size_t cap) {
  if (cap == 0) throw Error("tabulation cap must be positive");
  cap_storage().store(cap);
}

std::optional<std::size_t> configuration_count(int q, std::size_t sites) {
  if (q < 1) return std::nullopt;
  std::size_t count = 1;
  const auto uq = static_cast<std::size_t>(q);
  for (std::size_t k = 0; k < sites; ++k) {
    if (count > static_cast<std::size_t>(-1) / uq) return std::nullopt;
    count *= uq;
  }
  return count;
}

std::size_t checked_configuration_count(int q, std::size_t sites,
                                        const char* context) {
  auto count = configuration_count(q, sites);
  const std::size_t cap = tabulation_cap();
  if (!count) throw CapError(context, static_cast<std::size_t>(-1), cap);
  if (*count > cap) throw CapError(context, *count, cap);
  return *count;
}

void decode_configuration(std::size_t index, int q, std::span<int> out) {
  const auto uq = static_cast<std::size_t>(q);
  for (std::size_t k = out.size(); k-- > 0;) {
    out[k] = static_cast<int>(index % uq);
    index /= uq;
  }
}

std::size_t encode_configuration(std::span<const int> values, int q) {
  std::size_t index = 0;
  for (int v : values) index = index * static_cast<std::size_t>(q) + static_cast<std::size_t>(v);
  return index;
}

// --- Configuration ----------------------------------------------------------

Configuration::Configuration(Window w, std::vector<int> v)
    : window(std::move(w)), values(std::move(v)) {
  if (values.size() != window.size()) {
    throw Error("configuration length does not match window size");
  }
}

void Configuration::validate(int q) const {
  for (int v : values) {
    if (v < 0 || v >= q) throw Error("configuration label out of range");
  }
}

std::optional<int> Configuration::value_at(const Site& site) const {
  auto k = window.index_of(site);
  if (!k) return std::nullopt;
  return values[*k];
}

Configuration Configuration::restricted(const Window& sub) const {
  std::vector<int> out;
  out.reserve(sub.size());
  for (const auto& s : sub.sites()) {
    auto v = value_at(s);
    if (!v) throw Error("restriction window is not contained in the configuration");
    out.push_back(*v);
  }
  return Configuration(sub, std::move(out));
}

Configuration uniform_configuration(const Window& window, int label) {
  return Configuration(window, std::vector<int>(window.size(), label));
}

Configuration translate_configuration(const Configuration& sigma,
                                      const Site& shift) {
  return Configuration(sigma.window.translated(shift), sigma.values);
}

Configuration patch(const Configuration& eta, const Configuration& xi) {
  return patch_onto(eta, xi, window_union(eta.window, xi.window));
}

Configuration patch_onto(const Configuration& eta, const Configuration& xi,
                         const Window& target) {
  std::vector<int> out;
  out.reserve(target.size());
  for (const auto& s : target.sites()) {
    if (auto v = eta.value_at(s)) {
      out.push_back(*v);
    } else if (auto w = xi.value_at(s)) {
      out.push_back(*w);
    } else {
      throw Error("patched site lies in neither configuration window");
    }
  }
  return Configuration(target, std::move(out));
}

}  // namespace gibbslab

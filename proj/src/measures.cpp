#include "gibbslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

#include "gibbslab/parallel.hpp"
#include "compiled_energy.hpp"

namespace gibbslab {

// --- WindowMeasure ----------------------------------------------------------

WindowMeasure::WindowMeasure(int q_, Window window_, Eigen::VectorXd weights_)
    : q(q_), window(std::move(window_)), weights(std::move(weights_)) {
  auto expected = configuration_count(q, window.size());
  if (!expected || static_cast<std::size_t>(weights.size()) != *expected) {
    throw Error("measure weight vector must have q^|window| entries");
  }
  if ((weights.array() < 0.0).any() || !weights.allFinite()) {
    throw Error("measure weights must be finite and nonnegative");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw Error("measure weights must sum to 1");
}

WindowMeasure product_measure(const Window& window, const Eigen::VectorXd& single_site) {
  const int q = static_cast<int>(single_site.size());
  if (q < 2) throw Error("single-site law needs at least two states");
  if ((single_site.array() < 0.0).any() || std::abs(single_site.sum() - 1.0) > 1e-12) {
    throw Error("single-site law must be a probability vector");
  }
  const std::size_t n = checked_configuration_count(q, window.size(), "product_measure");
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  std::vector<int> values(window.size());
  for (std::size_t idx = 0; idx < n; ++idx) {
    decode_configuration(idx, q, values);
    double p = 1.0;
    for (int v : values) p *= single_site[v];
    w[static_cast<Eigen::Index>(idx)] = p;
  }
  // Renormalize away rounding so the sum check holds for large windows.
  w /= w.sum();
  return WindowMeasure(q, window, std::move(w));
}

WindowMeasure bernoulli_product(const Window& window, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("Bernoulli parameter must lie in [0, 1]");
  return product_measure(window, Eigen::Vector2d(1.0 - p, p));
}

namespace {

std::vector<std::size_t> positions_in(const Window& sub, const Window& full) {
  std::vector<std::size_t> pos;
  pos.reserve(sub.size());
  for (const auto& s : sub.sites()) {
    auto k = full.index_of(s);
    if (!k) throw Error("window is not contained in the measure window");
    pos.push_back(*k);
  }
  return pos;
}

}  // namespace

WindowMeasure marginal(const WindowMeasure& mu, const Window& sub) {
  if (sub == mu.window) return mu;
  const auto pos = positions_in(sub, mu.window);
  const std::size_t n_sub = *configuration_count(mu.q, sub.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_sub));
  std::vector<int> values(mu.window.size());
  std::vector<int> local(sub.size());
  for (std::size_t idx = 0; idx < mu.configurations(); ++idx) {
    decode_configuration(idx, mu.q, values);
    for (std::size_t k = 0; k < pos.size(); ++k) local[k] = values[pos[k]];
    w[static_cast<Eigen::Index>(encode_configuration(local, mu.q))] += mu.weights[static_cast<Eigen::Index>(idx)];
  }
  w /= w.sum();
  return WindowMeasure(mu.q, sub, std::move(w));
}

Eigen::VectorXd evaluate_on(const WindowMeasure& mu, const LocalFunction& f) {
  if (f.alphabet_size() != mu.q) throw Error("alphabet mismatch between function and measure");
  const auto pos = positions_in(f.window(), mu.window);
  Eigen::VectorXd out(static_cast<Eigen::Index>(mu.configurations()));
  std::vector<int> values(mu.window.size());
  std::vector<int> local(pos.size());
  for (std::size_t idx = 0; idx < mu.configurations(); ++idx) {
    decode_configuration(idx, mu.q, values);
    for (std::size_t k = 0; k < pos.size(); ++k) local[k] = values[pos[k]];
    out[static_cast<Eigen::Index>(idx)] = f(local);
  }
  return out;
}

double expectation(const WindowMeasure& mu, const LocalFunction& f) {
  return mu.weights.dot(evaluate_on(mu, f));
}

double total_variation(const WindowMeasure& a, const WindowMeasure& b) {
  if (a.window != b.window || a.q != b.q) throw Error("total variation needs a common window");
  return 0.5 * (a.weights - b.weights).cwiseAbs().sum();
}

void write_measure_csv(std::ostream& os, const WindowMeasure& mu) {
  os << "index,weight\n" << std::setprecision(17);
  for (std::size_t idx = 0; idx < mu.configurations(); ++idx) {
    os << idx << ',' << mu.weights[static_cast<Eigen::Index>(idx)] << '\n';
  }
}

// --- Potential --------------------------------------------------------------

Potential::Potential(int q, int dimension, Eigen::VectorXd a_priori,
                     std::vector<PotentialTerm> terms)
    : q_(q), dimension_(dimension), a_priori_(std::move(a_priori)), terms_(std::move(terms)) {
  if (q < 2) throw Error("alphabet size must be at least 2");
  if (a_priori_.size() != q) throw Error("a priori vector must have q entries");
  if ((a_priori_.array() <= 0.0).any() || std::abs(a_priori_.sum() - 1.0) > 1e-12) {
    throw Error("a priori measure must be strictly positive and sum to 1");
  }
  std::set<std::vector<Site>> seen;
  for (const auto& t : terms_) {
    if (t.shape.dimension() != dimension) throw Error("potential term has wrong dimension");
    if (!t.shape.contains(origin(dimension))) {
      throw Error("potential term shape must contain the origin");
    }
    auto n = configuration_count(q, t.shape.size());
    if (!n || static_cast<std::size_t>(t.values.size()) != *n) {
      throw Error("potential term table must have q^|shape| entries");
    }
    if (!t.values.allFinite()) throw Error("potential term table must be finite");
    if (!seen.insert(t.shape.sites()).second) throw Error("potential shapes must be distinct");
  }
}

int Potential::range() const {
  int r = 0;
  for (const auto& t : terms_) {
    for (int axis = 0; axis < dimension_; ++axis) {
      int lo = std::numeric_limits<int>::max();
      int hi = std::numeric_limits<int>::min();
      for (const auto& s : t.shape.sites()) {
        lo = std::min(lo, s[static_cast<std::size_t>(axis)]);
        hi = std::max(hi, s[static_cast<std::size_t>(axis)]);
      }
      r = std::max(r, hi - lo);
    }
  }
  return r;
}

Potential zero_potential(int q, int dimension) {
  return Potential(q, dimension, Eigen::VectorXd::Constant(q, 1.0 / q), {});
}

Potential ising_potential(double J, double h, int dimension) {
  std::vector<PotentialTerm> terms;
  terms.push_back({Window(dimension, {origin(dimension)}), Eigen::Vector2d(h, -h)});
  for (int axis = 0; axis < dimension; ++axis) {
    Site e = origin(dimension);
    e[static_cast<std::size_t>(axis)] = 1;
    Eigen::VectorXd pair(4);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) pair[2 * a + b] = -J * ising_spin(a) * ising_spin(b);
    }
    terms.push_back({Window(dimension, {origin(dimension), e}), pair});
  }
  return Potential(2, dimension, Eigen::Vector2d(0.5, 0.5), std::move(terms));
}

// --- compiled energies --------------------------------------------------------

namespace detail {

double CompiledEnergy::energy(std::span<const int> values) const {
  double e = 0.0;
  for (const auto& term : terms) {
    std::size_t idx = 0;
    for (int slot : term.slots) {
      const int label = slot >= 0 ? values[static_cast<std::size_t>(slot)] : -1 - slot;
      idx = idx * static_cast<std::size_t>(q) + static_cast<std::size_t>(label);
    }
    e += (*term.values)[static_cast<Eigen::Index>(idx)];
  }
  return e;
}

CompiledEnergy compile_volume(const Potential& U, const Window& volume, const Boundary& boundary) {
  CompiledEnergy out;
  out.q = U.alphabet_size();
  const Configuration* xi = std::get_if<Configuration>(&boundary);
  for (const auto& term : U.terms()) {
    std::set<Site> shifts;
    for (const auto& x : volume.sites()) {
      for (const auto& a : term.shape.sites()) shifts.insert(subtract(x, a));
    }
    for (const auto& shift : shifts) {
      CompiledTerm ct{&term.values, {}};
      bool keep = true;
      for (const auto& a : term.shape.sites()) {
        Site s = add(a, shift);
        if (auto k = volume.index_of(s)) {
          ct.slots.push_back(static_cast<int>(*k));
        } else if (xi) {
          auto v = xi->value_at(s);
          if (!v) throw Error("boundary condition does not cover a site required by the Hamiltonian");
          if (*v < 0 || *v >= out.q) throw Error("boundary label out of range");
          ct.slots.push_back(-1 - *v);
        } else {
          keep = false;
          break;
        }
      }
      if (keep) out.terms.push_back(std::move(ct));
    }
  }
  return out;
}

CompiledEnergy compile_torus(const Potential& U, int side) {
  if (2 * U.range() >= side) throw Error("potential range must be below half the torus side");
  CompiledEnergy out;
  out.q = U.alphabet_size();
  const Window box = box_window(side, U.dimension());
  for (const auto& term : U.terms()) {
    for (const auto& shift : box.sites()) {
      CompiledTerm ct{&term.values, {}};
      for (const auto& a : term.shape.sites()) {
        Site s = add(a, shift);
        for (auto& c : s) c = ((c % side) + side) % side;
        ct.slots.push_back(static_cast<int>(*box.index_of(s)));
      }
      out.terms.push_back(std::move(ct));
    }
  }
  return out;
}

}  // namespace detail

double hamiltonian(const Potential& U, const Configuration& sigma, const Boundary& boundary) {
  sigma.validate(U.alphabet_size());
  return detail::compile_volume(U, sigma.window, boundary).energy(sigma.values);
}

namespace {

GibbsWindow tabulate_gibbs(const Potential& U, const Window& volume,
                           const detail::CompiledEnergy& energy) {
  const int q = U.alphabet_size();
  const std::size_t n = checked_configuration_count(q, volume.size(), "finite_volume_gibbs");
  const Eigen::VectorXd log_prior = U.a_priori().array().log();
  Eigen::VectorXd logw(static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<int> values(volume.size());
    for (std::size_t idx = begin; idx < end; ++idx) {
      decode_configuration(idx, q, values);
      double lw = -energy.energy(values);
      for (int v : values) lw += log_prior[v];
      logw[static_cast<Eigen::Index>(idx)] = lw;
    }
  });
  const double shift = logw.maxCoeff();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < logw.size(); ++k) sum += std::exp(logw[k] - shift);
  const double log_z = shift + std::log(sum);
  Eigen::VectorXd w = (logw.array() - log_z).exp();
  w /= w.sum();
  return {WindowMeasure(q, volume, std::move(w)), log_z};
}

}  // namespace

GibbsWindow finite_volume_gibbs(const Potential& U, const Window& volume,
                                const Boundary& boundary) {
  if (volume.dimension() != U.dimension()) throw Error("volume dimension does not match the potential");
  checked_configuration_count(U.alphabet_size(), volume.size(), "finite_volume_gibbs");
  return tabulate_gibbs(U, volume, detail::compile_volume(U, volume, boundary));
}

GibbsWindow torus_gibbs(const Potential& U, int side) {
  const Window box = box_window(side, U.dimension());
  checked_configuration_count(U.alphabet_size(), box.size(), "torus_gibbs");
  return tabulate_gibbs(U, box, detail::compile_torus(U, side));
}

WindowMeasure torus_marginal(const WindowMeasure& torus, int side, const Window& window) {
  const int d = torus.window.dimension();
  if (window.dimension() != d) throw Error("window dimension does not match the torus");
  std::vector<std::size_t> pos;
  for (const auto& s : window.sites()) {
    Site wrapped = s;
    for (auto& c : wrapped) c = ((c % side) + side) % side;
    auto k = torus.window.index_of(wrapped);
    if (!k) throw Error("torus measure is not on a full box");
    pos.push_back(*k);
  }
  std::vector<std::size_t> sorted = pos;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("window wraps onto itself on the torus");
  }
  const std::size_t n_sub = checked_configuration_count(torus.q, window.size(), "torus_marginal");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_sub));
  std::vector<int> values(torus.window.size());
  std::vector<int> local(pos.size());
  for (std::size_t idx = 0; idx < torus.configurations(); ++idx) {
    decode_configuration(idx, torus.q, values);
    for (std::size_t k = 0; k < pos.size(); ++k) local[k] = values[pos[k]];
    w[static_cast<Eigen::Index>(encode_configuration(local, torus.q))] += torus.weights[static_cast<Eigen::Index>(idx)];
  }
  w /= w.sum();
  return WindowMeasure(torus.q, window, std::move(w));
}

}  // namespace gibbslab

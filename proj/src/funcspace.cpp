#include "gibbslab/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gibbslab {

namespace {

std::size_t power(int q, std::size_t n) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < n; ++k) out *= static_cast<std::size_t>(q);
  return out;
}

std::string format_site(const Site& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? "," : "") << s[k];
  os << ')';
  return os.str();
}

/// Calls fn(fiber) for every line of the table along window position k; the
/// fiber holds the q values obtained by varying that coordinate alone.
template <typename Fn>
void for_each_fiber(const LocalFunction& f, std::size_t k, Fn&& fn) {
  const int q = f.alphabet_size();
  const std::size_t n = f.window().size();
  const std::size_t stride = power(q, n - 1 - k);
  const std::size_t total = static_cast<std::size_t>(f.table().size());
  std::vector<double> fiber(static_cast<std::size_t>(q));
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / stride) % static_cast<std::size_t>(q) != 0) continue;
    for (int a = 0; a < q; ++a) {
      fiber[static_cast<std::size_t>(a)] =
          f.at_index(base + static_cast<std::size_t>(a) * stride);
    }
    fn(fiber);
  }
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

// --- LocalFunction ----------------------------------------------------------

LocalFunction::LocalFunction(int q, Window window, Eigen::VectorXd table)
    : q_(q), window_(std::move(window)), table_(std::move(table)) {
  if (q < 2) throw Error("alphabet size must be at least 2");
  auto expected = configuration_count(q, window_.size());
  if (!expected || static_cast<std::size_t>(table_.size()) != *expected) {
    throw Error("local function table length must be q^|window|");
  }
  if (!table_.allFinite()) throw Error("local function table must be finite");
}

LocalFunction LocalFunction::constant(int q, int dimension, double value) {
  return LocalFunction(q, Window(dimension), Eigen::VectorXd::Constant(1, value));
}

LocalFunction LocalFunction::tabulate(
    int q, Window window, const std::function<double(std::span<const int>)>& fn) {
  const std::size_t n = checked_configuration_count(q, window.size(), "tabulate");
  Eigen::VectorXd table(static_cast<Eigen::Index>(n));
  std::vector<int> values(window.size());
  for (std::size_t idx = 0; idx < n; ++idx) {
    decode_configuration(idx, q, values);
    table[static_cast<Eigen::Index>(idx)] = fn(values);
  }
  return LocalFunction(q, std::move(window), std::move(table));
}

double LocalFunction::operator()(std::span<const int> values) const {
  if (values.size() != window_.size()) throw Error("wrong number of values");
  return at_index(encode_configuration(values, q_));
}

double LocalFunction::operator()(const Configuration& sigma) const {
  std::vector<int> values;
  values.reserve(window_.size());
  for (const auto& s : window_.sites()) {
    auto v = sigma.value_at(s);
    if (!v) throw Error("configuration does not cover the dependence window");
    values.push_back(*v);
  }
  return (*this)(values);
}

LocalFunction LocalFunction::scaled(double beta) const {
  return LocalFunction(q_, window_, beta * table_);
}

LocalFunction LocalFunction::shifted(double offset) const {
  return LocalFunction(q_, window_, table_.array() + offset);
}

LocalFunction operator+(const LocalFunction& f, const LocalFunction& g) {
  if (f.alphabet_size() != g.alphabet_size()) throw Error("alphabet mismatch");
  Window w = window_union(f.window(), g.window());
  LocalFunction fe = extend_to(f, w);
  LocalFunction ge = extend_to(g, w);
  return LocalFunction(f.alphabet_size(), w, fe.table() + ge.table());
}

LocalFunction site_value(int q, const Site& site) {
  Window w(static_cast<int>(site.size()), {site});
  return LocalFunction::tabulate(q, w, [](std::span<const int> v) { return double(v[0]); });
}

LocalFunction equality_indicator(int q, const Site& a, const Site& b) {
  Window w(static_cast<int>(a.size()), {a, b});
  return LocalFunction::tabulate(
      q, w, [](std::span<const int> v) { return v[0] == v[1] ? 1.0 : 0.0; });
}

// --- oscillations -----------------------------------------------------------

double OscillationVector::at(const Site& site) const {
  auto k = window.index_of(site);
  return k ? entries[static_cast<Eigen::Index>(*k)] : 0.0;
}

double OscillationVector::lp(double p) const {
  if (std::isinf(p)) return linf();
  return std::pow(entries.array().pow(p).sum(), 1.0 / p);
}

OscillationRule OscillationRule::diameter() {
  return OscillationRule(Kind::diameter, "diameter");
}

OscillationRule OscillationRule::metric_quotient(Eigen::MatrixXd psi) {
  if (psi.rows() != psi.cols()) throw Error("psi must be square");
  for (Eigen::Index a = 0; a < psi.rows(); ++a) {
    for (Eigen::Index b = 0; b < psi.cols(); ++b) {
      if (psi(a, b) != psi(b, a)) throw Error("psi must be symmetric");
      if ((a == b) != (psi(a, b) == 0.0)) {
        throw Error("psi must vanish exactly on the diagonal");
      }
      if (psi(a, b) < 0.0 || !std::isfinite(psi(a, b))) {
        throw Error("psi must be finite and nonnegative");
      }
    }
  }
  OscillationRule rule(Kind::metric_quotient, "metric-quotient");
  rule.psi_ = std::move(psi);
  return rule;
}

OscillationRule OscillationRule::custom(std::string name, Custom fn) {
  OscillationRule rule(Kind::custom, std::move(name));
  rule.custom_ = std::move(fn);
  return rule;
}

OscillationVector OscillationRule::operator()(const LocalFunction& f) const {
  if (kind_ == Kind::custom) return custom_(f);

  const int q = f.alphabet_size();
  if (kind_ == Kind::metric_quotient && psi_.rows() != q) {
    throw Error("psi size does not match the alphabet");
  }
  const std::size_t n = f.window().size();
  OscillationVector out{f.window(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  for (std::size_t k = 0; k < n; ++k) {
    double best = 0.0;
    if (kind_ == Kind::diameter) {
      for_each_fiber(f, k, [&](const std::vector<double>& fiber) {
        auto [lo, hi] = std::minmax_element(fiber.begin(), fiber.end());
        best = std::max(best, *hi - *lo);
      });
    } else {
      for_each_fiber(f, k, [&](const std::vector<double>& fiber) {
        for (int a = 0; a < q; ++a) {
          for (int b = 0; b < q; ++b) {
            if (a == b) continue;
            best = std::max(best, (fiber[static_cast<std::size_t>(a)] -
                                   fiber[static_cast<std::size_t>(b)]) /
                                      psi_(a, b));
          }
        }
      });
    }
    out.entries[static_cast<Eigen::Index>(k)] = best;
  }
  return out;
}

OscillationVector oscillation_vector(const LocalFunction& f, const OscillationRule& rule) {
  return rule(f);
}

// --- function transforms ----------------------------------------------------

LocalFunction translate_function(const LocalFunction& f, const Site& shift) {
  return LocalFunction(f.alphabet_size(), f.window().translated(negate(shift)), f.table());
}

LocalFunction ergodic_sum(const LocalFunction& f, const Window& sites) {
  const int q = f.alphabet_size();
  Window target = minkowski_sum(sites, f.window());
  const std::size_t total = checked_configuration_count(q, target.size(), "ergodic_sum");

  std::vector<std::vector<std::size_t>> positions;
  positions.reserve(sites.size());
  for (const auto& i : sites.sites()) {
    std::vector<std::size_t> pos;
    for (const auto& j : f.window().sites()) pos.push_back(*target.index_of(add(i, j)));
    positions.push_back(std::move(pos));
  }

  Eigen::VectorXd table(static_cast<Eigen::Index>(total));
  std::vector<int> values(target.size());
  std::vector<int> local(f.window().size());
  for (std::size_t idx = 0; idx < total; ++idx) {
    decode_configuration(idx, q, values);
    double sum = 0.0;
    for (const auto& pos : positions) {
      for (std::size_t k = 0; k < pos.size(); ++k) local[k] = values[pos[k]];
      sum += f(local);
    }
    table[static_cast<Eigen::Index>(idx)] = sum;
  }
  return LocalFunction(q, std::move(target), std::move(table));
}

LocalFunction local_approximation(const LocalFunction& f, const Window& keep,
                                  const Configuration& xi) {
  Window kept = window_intersection(f.window(), keep);
  std::vector<std::optional<std::size_t>> from_kept;
  std::vector<int> frozen;
  for (const auto& s : f.window().sites()) {
    auto k = kept.index_of(s);
    from_kept.push_back(k);
    if (k) {
      frozen.push_back(0);
    } else {
      auto v = xi.value_at(s);
      if (!v) throw Error("xi does not cover the frozen part of the dependence window");
      frozen.push_back(*v);
    }
  }
  std::vector<int> full(f.window().size());
  return LocalFunction::tabulate(f.alphabet_size(), kept, [&](std::span<const int> v) {
    for (std::size_t k = 0; k < full.size(); ++k) {
      full[k] = from_kept[k] ? v[*from_kept[k]] : frozen[k];
    }
    return f(full);
  });
}

LocalFunction extend_to(const LocalFunction& f, const Window& window) {
  if (!f.window().is_subset_of(window)) {
    throw Error("extension window must contain the dependence window");
  }
  if (f.window() == window) return f;
  std::vector<std::size_t> pos;
  for (const auto& s : f.window().sites()) pos.push_back(*window.index_of(s));
  std::vector<int> local(pos.size());
  return LocalFunction::tabulate(f.alphabet_size(), window, [&](std::span<const int> v) {
    for (std::size_t k = 0; k < pos.size(); ++k) local[k] = v[pos[k]];
    return f(local);
  });
}

bool is_constant_in(const LocalFunction& f, std::size_t k, double tolerance) {
  bool constant = true;
  for_each_fiber(f, k, [&](const std::vector<double>& fiber) {
    auto [lo, hi] = std::minmax_element(fiber.begin(), fiber.end());
    if (*hi - *lo > tolerance) constant = false;
  });
  return constant;
}

// --- axiom check ------------------------------------------------------------

bool AxiomReport::all_passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const AxiomResult& r) { return r.passed; });
}

namespace {

void fail(AxiomResult& r, const std::string& witness) {
  if (r.passed) {
    r.passed = false;
    r.witness = witness;
  }
}

Window random_subwindow(std::mt19937_64& rng, const Window& w) {
  std::vector<Site> out;
  std::bernoulli_distribution keep(0.5);
  for (const auto& s : w.sites()) {
    if (keep(rng)) out.push_back(s);
  }
  return Window(w.dimension(), std::move(out));
}

}  // namespace

AxiomReport axiom_check(const OscillationRule& rule,
                        const std::vector<LocalFunction>& samples, std::uint64_t seed) {
  if (samples.empty()) throw Error("axiom_check needs at least one sample function");
  std::mt19937_64 rng(seed);
  AxiomResult translation{"translation-invariance", true, 0, ""};
  AxiomResult nondegenerate{"non-degeneracy", true, 0, ""};
  AxiomResult monotone{"monotonicity", true, 0, ""};
  AxiomResult homogeneous{"degree-one-homogeneity", true, 0, ""};

  for (std::size_t n = 0; n < samples.size(); ++n) {
    const LocalFunction& f = samples[n];
    const int d = f.dimension();
    const int q = f.alphabet_size();
    const OscillationVector base = rule(f);
    const std::string tag = "function #" + std::to_string(n);

    std::uniform_int_distribution<int> coord(-2, 2);
    for (int rep = 0; rep < 3; ++rep) {
      Site shift(static_cast<std::size_t>(d));
      for (auto& c : shift) c = coord(rng);
      LocalFunction moved = translate_function(f, shift);
      OscillationVector dv = rule(moved);
      for (const auto& j : moved.window().sites()) {
        ++translation.checks;
        double lhs = dv.at(j);
        double rhs = base.at(add(shift, j));
        if (!close(lhs, rhs)) {
          fail(translation, tag + " shift " + format_site(shift) + " site " + format_site(j) +
                                ": " + std::to_string(lhs) + " vs " + std::to_string(rhs));
        }
      }
    }

    // Pad with one dummy site so the "constant coordinate => zero" direction
    // is exercised on every sample.
    Site dummy = f.window().empty() ? origin(d) : f.window().sites().back();
    dummy[0] += 1;
    LocalFunction padded = extend_to(f, window_union(f.window(), Window(d, {dummy})));
    OscillationVector padded_osc = rule(padded);
    for (std::size_t k = 0; k < padded.window().size(); ++k) {
      ++nondegenerate.checks;
      const bool zero = padded_osc.entries[static_cast<Eigen::Index>(k)] == 0.0;
      const bool constant = is_constant_in(padded, k);
      if (zero != constant) {
        fail(nondegenerate, tag + " site " + format_site(padded.window()[k]) +
                                (zero ? ": zero oscillation but f varies"
                                      : ": nonzero oscillation but f is constant"));
      }
    }

    std::uniform_int_distribution<int> label(0, q - 1);
    for (int rep = 0; rep < 3; ++rep) {
      Configuration xi = uniform_configuration(f.window(), 0);
      for (auto& v : xi.values) v = label(rng);
      Window outer = random_subwindow(rng, f.window());
      Window inner = random_subwindow(rng, outer);
      OscillationVector small = rule(local_approximation(f, inner, xi));
      OscillationVector large = rule(local_approximation(f, outer, xi));
      for (const auto& i : f.window().sites()) {
        ++monotone.checks;
        const double a = small.at(i);
        const double b = large.at(i);
        const double c = base.at(i);
        if (a > b + 1e-12 * (1.0 + b) || b > c + 1e-12 * (1.0 + c)) {
          fail(monotone, tag + " site " + format_site(i) + ": " + std::to_string(a) +
                             " <= " + std::to_string(b) + " <= " + std::to_string(c) +
                             " violated");
        }
      }
    }

    std::uniform_real_distribution<double> beta_dist(-4.0, 4.0);
    for (double beta : {-2.0, -1.0, 0.5, 3.0, beta_dist(rng)}) {
      OscillationVector scaled = rule(f.scaled(beta));
      for (std::size_t k = 0; k < f.window().size(); ++k) {
        ++homogeneous.checks;
        const double lhs = scaled.entries[static_cast<Eigen::Index>(k)];
        const double rhs = std::abs(beta) * base.entries[static_cast<Eigen::Index>(k)];
        if (!close(lhs, rhs)) {
          fail(homogeneous, tag + " beta " + std::to_string(beta) + " site " +
                                format_site(f.window()[k]));
        }
      }
    }
  }

  return AxiomReport{rule.name(), {translation, nondegenerate, monotone, homogeneous}};
}

}  // namespace gibbslab

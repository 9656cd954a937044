#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "gibbslab/entropy.hpp"
#include "gibbslab/transfer_matrix.hpp"
#include "oracles.hpp"

using namespace gibbslab;

namespace {

// Relative entropy of two chains on a block of n sites, by the oracle.
double block_kl(const oracle::IsingChain& nu, const oracle::IsingChain& mu, std::size_t n) {
  double s = 0.0;
  for (const auto& l : oracle::all_labels(2, n)) {
    const double a = nu.block(l);
    s += a * std::log(a / mu.block(l));
  }
  return s;
}

}  // namespace

TEST_CASE("relative entropy examples") {
  const Window w = interval_window(0, 2);
  const WindowMeasure half = bernoulli_product(w, 0.5);
  const WindowMeasure quarter = bernoulli_product(w, 0.25);
  CHECK(relative_entropy_window(half, half) == 0.0);
  CHECK(relative_entropy_window(half, quarter) == doctest::Approx(0.287682).epsilon(1e-6));
  CHECK(relative_entropy_window(half, quarter) ==
        doctest::Approx(2 * (0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0))).epsilon(1e-14));
  CHECK(relative_entropy_window(half, quarter) == doctest::Approx(2 * oracle::bernoulli_kl(0.5, 0.25)));

  const WindowMeasure point(2, interval_window(0, 1), Eigen::Vector2d(1.0, 0.0));
  CHECK(relative_entropy_window(bernoulli_product(interval_window(0, 1), 0.5), point) ==
        std::numeric_limits<double>::infinity());
  CHECK(relative_entropy_window(point, bernoulli_product(interval_window(0, 1), 0.5)) ==
        doctest::Approx(std::log(2.0)));
}

TEST_CASE("relative entropy restricts to a sub-window") {
  const WindowMeasure a = bernoulli_product(interval_window(0, 3), 0.5);
  const WindowMeasure b = bernoulli_product(interval_window(0, 3), 0.25);
  CHECK(relative_entropy_window(a, b, interval_window(1, 1)) ==
        doctest::Approx(oracle::bernoulli_kl(0.5, 0.25)).epsilon(1e-13));
}

TEST_CASE("relative entropy is nonnegative and vanishes only at equality") {
  std::mt19937_64 rng(41);
  const Window w = interval_window(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const WindowMeasure nu(2, w, oracle::random_probability(rng, 8));
    const WindowMeasure mu(2, w, oracle::random_probability(rng, 8));
    CHECK(relative_entropy_window(nu, mu) > 0.0);
    CHECK(std::abs(relative_entropy_window(nu, nu)) <= 1e-12);
  }
}

TEST_CASE("variational characterization") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t sites = 1 + trial % 3;
    const Window w = interval_window(0, int(sites));
    const std::size_t n = std::size_t{1} << sites;
    const WindowMeasure nu(2, w, oracle::random_probability(rng, n, 0.05));
    const WindowMeasure mu(2, w, oracle::random_probability(rng, n, 0.05));
    const double s = relative_entropy_window(nu, mu);
    CHECK(std::abs(variational_value(log_ratio_function(nu, mu), nu, mu) - s) <= 1e-10);
    for (int k = 0; k < 4; ++k) {
      Eigen::VectorXd t(static_cast<Eigen::Index>(n));
      for (Eigen::Index j = 0; j < t.size(); ++j) t[j] = u(rng);
      CHECK(variational_value(LocalFunction(2, w, t), nu, mu) <= s + 1e-12);
    }
    CHECK(std::abs(variational_value(LocalFunction::constant(2, 1, u(rng)), nu, mu)) <= 1e-14);
  }
  const WindowMeasure a = bernoulli_product(interval_window(0, 1), 0.5);
  CHECK_THROWS_AS(variational_value(site_value(2, {4}), a, a), Error);
}

TEST_CASE("product densities are constant along cubes") {
  const EntropyDensityTrace t = entropy_density_sequence(bernoulli_source(0.5), bernoulli_source(0.25), 6);
  REQUIRE(t.entries.size() == 7);
  for (std::size_t k = 0; k < t.entries.size(); ++k) {
    CHECK(t.entries[k].n == int(k));
    CHECK(t.entries[k].volume == 2 * k + 1);
    CHECK(t.entries[k].per_site == doctest::Approx(0.143841).epsilon(1e-6));
    CHECK(std::abs(t.entries[k].per_site - t.entries[0].per_site) <= 1e-14);
  }
  CHECK(t.liminf_estimate == doctest::Approx(0.143841036225890).epsilon(1e-12));

  const EntropyDensityTrace same = entropy_density_sequence(ising1d_source(0.4, 0.1), ising1d_source(0.4, 0.1), 4);
  for (const auto& e : same.entries) CHECK(std::abs(e.per_site) <= 1e-13);

  const EntropyDensityTrace plane =
      entropy_density_sequence(bernoulli_source(0.3, 2), bernoulli_source(0.6, 2), 1);
  for (const auto& e : plane.entries) CHECK(e.per_site == doctest::Approx(oracle::bernoulli_kl(0.3, 0.6)));
}

TEST_CASE("exact Ising density") {
  CHECK(std::abs(ising_entropy_density_exact({0.4, -0.2}, {0.4, -0.2})) <= 1e-14);

  const double h1 = 0.3, h2 = -0.5;
  const double p1 = std::exp(h1) / (2 * std::cosh(h1)), p2 = std::exp(h2) / (2 * std::cosh(h2));
  CHECK(ising_entropy_density_exact({0.0, h1}, {0.0, h2}) == doctest::Approx(oracle::bernoulli_kl(p1, p2)).epsilon(1e-13));

  // Stationary Markov chains: the block entropy grows by exactly the density
  // once the block has two sites.
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const IsingParams a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const oracle::IsingChain nu(a.J, a.h), mu(b.J, b.h);
    const double rate = block_kl(nu, mu, 4) - block_kl(nu, mu, 3);
    CHECK(ising_entropy_density_exact(a, b) == doctest::Approx(rate).epsilon(1e-10));
    CHECK(ising_entropy_density_exact(a, b) >= 0.0);
  }
}

TEST_CASE("window sequence approaches the exact Ising density at rate 1/N") {
  const IsingParams nu{0.2, 0.0}, mu{0.3, 0.2};
  const double exact = ising_entropy_density_exact(nu, mu);
  const EntropyDensityTrace t = entropy_density_sequence(ising1d_source(nu.J, nu.h), ising1d_source(mu.J, mu.h), 8);
  // s_N = s_1 + (N - 1) s_* for Markov chains, so N (s_N / N - s_*) = s_1 - s_*.
  const double first = t.entries[0].window_entropy;
  for (const auto& e : t.entries) {
    const double volume = double(e.volume);
    CHECK(e.per_site >= 0.0);
    CHECK(volume * (e.per_site - exact) == doctest::Approx(first - exact).epsilon(1e-9));
  }
  for (std::size_t k = 1; k < t.entries.size(); ++k) {
    CHECK((t.entries[k].window_entropy - t.entries[k - 1].window_entropy) / 2.0 ==
          doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("decimation does not increase the density per original site") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = u(rng), b = u(rng);
    const double before = ising_entropy_density_exact({a, 0.0}, {b, 0.0});
    const double after = ising_entropy_density_exact({decimate_ising_1d(a), 0.0}, {decimate_ising_1d(b), 0.0});
    CHECK(0.5 * after <= before + 1e-12);
  }
}

TEST_CASE("empirical measures and bootstrap errors") {
  const Window w = interval_window(0, 1);
  std::vector<std::size_t> obs;
  std::mt19937_64 rng(45);
  std::bernoulli_distribution coin(0.3);
  for (int k = 0; k < 4000; ++k) obs.push_back(coin(rng) ? 1 : 0);
  const EmpiricalMeasure emp = empirical_measure(2, w, obs);
  CHECK(emp.samples == 4000);
  CHECK(emp.counts[0] + emp.counts[1] == 4000);
  CHECK(emp.measure.weights[1] == doctest::Approx(double(emp.counts[1]) / 4000));

  auto mean = [](const WindowMeasure& m) { return m.weights[1]; };
  const double se = bootstrap_stderr(emp, mean, 400, 7);
  const double p = emp.measure.weights[1];
  CHECK(se == doctest::Approx(std::sqrt(p * (1 - p) / 4000)).epsilon(0.15));
  CHECK(bootstrap_stderr(emp, mean, 400, 7) == se);
  CHECK(bootstrap_stderr(emp, mean, 400, 8) != se);
  CHECK_THROWS_AS(empirical_measure(2, w, {0, 2}), Error);
}

TEST_CASE("entropy trace CSV") {
  std::ostringstream os;
  write_entropy_trace_csv(os, entropy_density_sequence(bernoulli_source(0.5), bernoulli_source(0.25), 1));
  const std::string csv = os.str();
  CHECK(csv.rfind("n,volume,s_window_nats,per_site_nats,source_flags\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

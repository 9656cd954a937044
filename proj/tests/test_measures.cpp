#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gibbslab/io.hpp"
#include "gibbslab/measures.hpp"
#include "gibbslab/transfer_matrix.hpp"
#include "oracles.hpp"

using namespace gibbslab;

namespace {

Window line(std::vector<int> xs) {
  std::vector<Site> s;
  for (int x : xs) s.push_back({x});
  return Window(1, s);
}

// Random nearest-neighbour plus three-site interaction on q labels.
Potential random_potential(std::mt19937_64& rng, int q) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto table = [&](std::size_t n) {
    Eigen::VectorXd t(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < t.size(); ++k) t[k] = u(rng);
    return t;
  };
  std::vector<PotentialTerm> terms;
  terms.push_back({line({0}), table(q)});
  terms.push_back({line({0, 1}), table(q * q)});
  terms.push_back({line({0, 2}), table(q * q)});
  return Potential(q, 1, oracle::random_probability(rng, q, 0.2), terms);
}

double torus_pair(const GibbsWindow& g, int side) {
  const WindowMeasure m = torus_marginal(g.measure, side, line({0, 1}));
  double e = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    e += m.weights[static_cast<Eigen::Index>(k)] * ising_spin(int(k / 2)) * ising_spin(int(k % 2));
  }
  return e;
}

}  // namespace

TEST_CASE("window measures validate their weights") {
  CHECK_THROWS_AS(WindowMeasure(2, line({0}), Eigen::Vector2d(0.5, 0.6)), Error);
  CHECK_THROWS_AS(WindowMeasure(2, line({0}), Eigen::Vector2d(1.5, -0.5)), Error);
  CHECK_THROWS_AS(WindowMeasure(2, line({0, 1}), Eigen::Vector2d(0.5, 0.5)), Error);
  CHECK_NOTHROW(WindowMeasure(2, line({0}), Eigen::Vector2d(0.25, 0.75)));
}

TEST_CASE("zero potential has zero energy") {
  const Potential U = zero_potential(3, 2);
  const Window box = box_window(2, 2);
  Configuration sigma(box, {0, 1, 2, 1});
  CHECK(hamiltonian(U, sigma, FreeBoundary{}) == 0.0);
}

TEST_CASE("Ising energy at the origin with plus boundary") {
  const Potential U = ising_potential(1.0, 0.0);
  const Configuration sigma(line({0}), {1});
  const Configuration xi(line({-1, 1}), {1, 1});
  CHECK(hamiltonian(U, sigma, xi) == doctest::Approx(-2.0));
  CHECK(hamiltonian(U, sigma, FreeBoundary{}) == 0.0);
  CHECK_THROWS_AS(hamiltonian(U, sigma, Configuration(line({1}), {1})), Error);

  const Potential field = ising_potential(0.0, 0.7);
  CHECK(hamiltonian(field, sigma, FreeBoundary{}) == doctest::Approx(-0.7));
  CHECK(hamiltonian(field, Configuration(line({0}), {0}), FreeBoundary{}) == doctest::Approx(0.7));
}

TEST_CASE("Hamiltonian matches a direct sum over crossing terms") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Potential U = random_potential(rng, 3);
    const Window vol = line({0, 1, 2});
    const Window bnd = line({-2, -1, 3, 4});
    std::vector<int> a(3), b(4);
    for (auto& v : a) v = int(rng() % 3);
    for (auto& v : b) v = int(rng() % 3);
    const Configuration sigma(vol, a), xi(bnd, b);
    std::map<int, int> all;
    for (int k = 0; k < 3; ++k) all[k] = a[std::size_t(k)];
    for (int k = 0; k < 4; ++k) all[bnd[std::size_t(k)][0]] = b[std::size_t(k)];
    double expected = 0.0;
    const auto& t = U.terms();
    for (int x = -2; x <= 2; ++x) {
      for (const auto& term : t) {
        bool hits = false;
        std::size_t idx = 0;
        for (const auto& s : term.shape.sites()) {
          const int site = s[0] + x;
          hits = hits || (site >= 0 && site <= 2);
          idx = idx * 3 + std::size_t(all.count(site) ? all[site] : 0);
        }
        if (hits) expected += term.values[Eigen::Index(idx)];
      }
    }
    CHECK(hamiltonian(U, sigma, xi) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("Gibbs measure of the zero potential is the product of the prior") {
  const Eigen::Vector3d prior(0.2, 0.3, 0.5);
  const Potential U(3, 1, prior, {});
  const GibbsWindow g = finite_volume_gibbs(U, line({0, 1}), FreeBoundary{});
  CHECK((g.measure.weights - product_measure(line({0, 1}), prior).weights).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(g.log_partition) < 1e-15);
}

TEST_CASE("single-site field gives the two-state law") {
  const double h = 0.4;
  const GibbsWindow g = finite_volume_gibbs(ising_potential(0.0, h), line({0}), FreeBoundary{});
  CHECK(g.measure.weights[1] == doctest::Approx(std::exp(h) / (std::exp(h) + std::exp(-h))).epsilon(1e-14));
}

TEST_CASE("finite-volume weights are normalized") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Potential U = random_potential(rng, 2);
    std::vector<int> b(4);
    for (auto& v : b) v = int(rng() % 2);
    const GibbsWindow g = finite_volume_gibbs(U, line({0, 1, 2, 3}), Configuration(line({-2, -1, 4, 5}), b));
    CHECK(g.measure.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((g.measure.weights.array() > 0).all());
  }
}

TEST_CASE("Gibbs measures are consistent under conditioning") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Potential U = random_potential(rng, 2);
    const Window big = line({0, 1, 2, 3, 4});
    const Window outer = line({-2, -1, 5, 6});
    std::vector<int> b(4);
    for (auto& v : b) v = int(rng() % 2);
    const Configuration xi(outer, b);
    const WindowMeasure mu = finite_volume_gibbs(U, big, xi).measure;

    // Condition on sites 0 and 4, compare with the Gibbs measure on {1,2,3}.
    const Window inner = line({1, 2, 3});
    for (int a0 = 0; a0 < 2; ++a0) {
      for (int a4 = 0; a4 < 2; ++a4) {
        Eigen::VectorXd cond = Eigen::VectorXd::Zero(8);
        for (std::size_t k = 0; k < 8; ++k) {
          const std::vector<int> v{a0, int(k >> 2 & 1), int(k >> 1 & 1), int(k & 1), a4};
          cond[Eigen::Index(k)] = mu.weights[Eigen::Index(encode_configuration(v, 2))];
        }
        cond /= cond.sum();
        const Configuration boundary(line({-2, -1, 0, 4, 5, 6}), {b[0], b[1], a0, a4, b[2], b[3]});
        const WindowMeasure direct = finite_volume_gibbs(U, inner, boundary).measure;
        CHECK((cond - direct.weights).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("expectation examples") {
  const Window w = line({0, 1});
  const double p = 0.3;
  const WindowMeasure mu = bernoulli_product(w, p);
  CHECK(expectation(mu, LocalFunction::constant(2, 1, 2.5)) == doctest::Approx(2.5));
  CHECK(expectation(mu, site_value(2, {0})) == doctest::Approx(p));
  CHECK(expectation(mu, equality_indicator(2, {0}, {1})) == doctest::Approx(p * p + (1 - p) * (1 - p)));
  CHECK_THROWS_AS(expectation(mu, site_value(2, {3})), Error);
}

TEST_CASE("marginals sum out the other sites") {
  std::mt19937_64 rng(34);
  const Window w = line({0, 1, 2});
  const WindowMeasure mu(2, w, oracle::random_probability(rng, 8));
  const WindowMeasure m = marginal(mu, line({0, 2}));
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      double expected = 0.0;
      for (int b = 0; b < 2; ++b) expected += mu.weights[4 * a + 2 * b + c];
      CHECK(m.weights[2 * a + c] == doctest::Approx(expected).epsilon(1e-15));
    }
  }
}

TEST_CASE("transfer matrix eigen data") {
  const auto T = ising_transfer_matrix(0.7, 0.3);
  CHECK(T.residual <= 1e-14);
  CHECK(T.left.dot(T.right) == doctest::Approx(1.0));
  const oracle::IsingChain chain(0.7, 0.3);
  CHECK(T.dominant_eigenvalue == doctest::Approx(chain.lambda).epsilon(1e-13));
  CHECK(ising_pressure(0.7, 0.3) == doctest::Approx(std::log(chain.lambda)).epsilon(1e-13));
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0, 1, 1;
  CHECK_THROWS_AS(TransferMatrix<double>::from_entries(bad), Error);
}

TEST_CASE("transfer-matrix marginals match the eigen-decomposition oracle") {
  for (auto [J, h] : std::vector<std::pair<double, double>>{{0.3, 0.0}, {0.8, -0.4}, {-0.5, 0.6}, {1.2, 0.1}}) {
    const oracle::IsingChain chain(J, h);
    const WindowMeasure m = transfer_matrix_marginal(J, h, interval_window(-1, 4));
    for (const auto& labels : oracle::all_labels(2, 4)) {
      CHECK(m.weights[Eigen::Index(encode_configuration(labels, 2))] ==
            doctest::Approx(chain.block(labels)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero coupling chain is a product measure") {
  const double h = 0.45;
  const WindowMeasure m = transfer_matrix_marginal(0.0, h, interval_window(0, 1));
  CHECK(m.weights[1] == doctest::Approx(std::exp(h) / (2 * std::cosh(h))).epsilon(1e-13));
  const WindowMeasure pair = transfer_matrix_marginal(0.0, h, interval_window(0, 2));
  CHECK(pair.weights[3] == doctest::Approx(m.weights[1] * m.weights[1]).epsilon(1e-13));
}

TEST_CASE("zero field chain: symmetric site law and tanh correlation") {
  for (double J : {0.2, 0.5, 1.0, -0.7}) {
    const WindowMeasure one = transfer_matrix_marginal(J, 0.0, interval_window(0, 1));
    CHECK(one.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
    const IsingMoments mom = ising_moments(J, 0.0);
    CHECK(mom.pair_correlation == doctest::Approx(std::tanh(J)).epsilon(1e-13));
    CHECK(std::abs(mom.magnetization) < 1e-13);
  }
}

TEST_CASE("torus ring of length 12 reproduces the chain correlation") {
  const double J = 0.2;
  const GibbsWindow g = torus_gibbs(ising_potential(J, 0.0), 12);
  const double pair = torus_pair(g, 12);
  CHECK(std::abs(pair - std::tanh(J)) <= 1e-6);
  CHECK(pair == doctest::Approx(oracle::ising_ring(J, 0.0, 12).first).epsilon(1e-12));
  const auto [ring_pair, ring_mag] = oracle::ising_ring(0.4, 0.3, 10);
  const GibbsWindow g2 = torus_gibbs(ising_potential(0.4, 0.3), 10);
  CHECK(torus_pair(g2, 10) == doctest::Approx(ring_pair).epsilon(1e-12));
  const WindowMeasure site = torus_marginal(g2.measure, 10, line({3}));
  CHECK(site.weights[1] - site.weights[0] == doctest::Approx(ring_mag).epsilon(1e-12));
}

TEST_CASE("torus requires the range below half the side") {
  CHECK_THROWS_AS(torus_gibbs(ising_potential(0.5, 0.0), 2), Error);
  CHECK_NOTHROW(torus_gibbs(ising_potential(0.5, 0.0), 3));
}

TEST_CASE("interval marginals are consistent under restriction") {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double J = u(rng), h = u(rng);
    const WindowMeasure big = transfer_matrix_marginal(J, h, interval_window(-3, 7));
    for (int first = -3; first <= 1; ++first) {
      const Window sub = interval_window(first, 3);
      const WindowMeasure direct = transfer_matrix_marginal(J, h, sub);
      CHECK((marginal(big, sub).weights - direct.weights).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("general nearest-neighbour transfer matrix matches fixed-boundary limits") {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::VectorXd single(3), pair(9);
  for (int k = 0; k < 3; ++k) single[k] = u(rng);
  for (int k = 0; k < 9; ++k) pair[k] = u(rng);
  const Potential U(3, 1, Eigen::Vector3d(0.2, 0.5, 0.3), {{line({0}), single}, {line({0, 1}), pair}});
  const WindowMeasure exact = transfer_matrix_marginal(transfer_matrix(U), line({0, 1}));
  // Centre marginal of a long free chain converges to the infinite-volume law.
  const int n = 12;
  const GibbsWindow g = finite_volume_gibbs(U, interval_window(-n / 2, n), FreeBoundary{});
  const WindowMeasure centre = marginal(g.measure, line({0, 1}));
  CHECK((exact.weights - centre.weights).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("pressure from fixed-boundary partition functions") {
  // Per-site log Z carries an O(1/N) boundary term; its increments converge
  // geometrically to log lambda. The torus removes the boundary.
  for (double J : {-1.0, -0.5, 0.5, 1.0}) {
    for (double h : {-1.0, 0.0, 0.5, 1.0}) {
      const Potential U = ising_potential(J, h);
      // Uniform prior on two labels: log Z drops by log 2 per site.
      const double p = ising_pressure(J, h) - std::log(2.0);
      auto log_z = [&](int n) {
        const Configuration plus(line({-n - 1, n + 1}), {1, 1});
        return finite_volume_gibbs(U, cube_window(n, 1), plus).log_partition;
      };
      const double z6 = log_z(6), z8 = log_z(8);
      CHECK(std::abs((z8 - z6) / 4.0 - p) <= 5e-3);
      CHECK(std::abs(z8 - 17 * p) <= 2 * std::abs(J) + 2 * std::abs(h) + std::log(2.0));
      if (std::abs(J) <= 0.5) {
        const double torus = torus_gibbs(U, 16).log_partition / 16.0;
        CHECK(std::abs(torus - p) <= 1e-6);
      }
    }
  }
}

TEST_CASE("decimation against the marginal-fit oracle") {
  auto oracle_fit = [](double J) {
    // Marginal of the chain on {0, 2} summed over the middle spin; for a
    // symmetric two-state law E[s0 s2] = tanh J'.
    const oracle::IsingChain chain(J, 0.0);
    double corr = 0.0;
    for (const auto& l : oracle::all_labels(2, 3)) corr += chain.block(l) * (2 * l[0] - 1) * (2 * l[2] - 1);
    return std::atanh(corr);
  };
  CHECK(decimate_ising_1d(0.0) == 0.0);
  CHECK(std::abs(decimate_ising_1d(1.0) - oracle_fit(1.0)) <= 1e-10);
  CHECK(std::abs(decimate_ising_1d(1.0) - std::atanh(std::tanh(1.0) * std::tanh(1.0))) <= 1e-12);
  CHECK(decimate_ising_1d(1.0) == doctest::Approx(0.6625).epsilon(1e-4));
  double previous = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double J = 0.1 * k;
    const double Jp = decimate_ising_1d(J);
    CHECK(Jp > previous);
    CHECK(Jp < J);
    CHECK(std::abs(Jp - oracle_fit(J)) <= 1e-10);
    previous = Jp;
  }
}

TEST_CASE("potential TOML files") {
  const std::string text = R"(
alphabet_size = 2
dimension = 1
a_priori = [0.25, 0.75]
[[term]]
sites = [[0], [1]]
values = [-1.0, 1.0, 1.0, -1.0]
)";
  const Potential U = potential_from_toml(text);
  CHECK(U.alphabet_size() == 2);
  CHECK(U.a_priori()[1] == 0.75);
  REQUIRE(U.terms().size() == 1);
  CHECK(U.terms()[0].shape == line({0, 1}));
  CHECK(U.range() == 1);
  CHECK(hamiltonian(U, Configuration(line({0}), {1}), Configuration(line({-1, 1}), {1, 0})) == doctest::Approx(0.0));

  const Potential uniform = potential_from_toml("alphabet_size = 3\ndimension = 2\n");
  CHECK(uniform.a_priori().isApprox(Eigen::Vector3d::Constant(1.0 / 3)));

  CHECK_THROWS_AS(potential_from_toml("alphabet_size = 2\ndimension = 1\na_priori = [1, 1]\n"), Error);
  CHECK_THROWS_AS(potential_from_toml("alphabet_size = 2\ndimension = 1\n[[term]]\nsites = [[0]]\nvalues = [1.0]\n"),
                  Error);
  CHECK_THROWS_AS(potential_from_toml("alphabet_size = 2\n[[term]\n"), Error);
}

TEST_CASE("measure CSV export") {
  std::ostringstream os;
  write_measure_csv(os, bernoulli_product(line({0}), 0.25));
  CHECK(os.str().rfind("index,weight\n", 0) == 0);
  CHECK(os.str().find("1,0.25") != std::string::npos);
}

#pragma once

#include <algorithm>
#include <random>

namespace gibbslab {

template <typename Rng>
LocalFunction random_local_function(Rng& rng, int q, int dimension,
                                    std::size_t max_sites, int radius) {
  Window cube = cube_window(radius, dimension);
  std::vector<Site> pool = cube.sites();
  std::shuffle(pool.begin(), pool.end(), rng);
  const std::size_t upper = std::min(max_sites, pool.size());
  std::uniform_int_distribution<std::size_t> count(1, upper);
  pool.resize(count(rng));
  Window window(dimension, std::move(pool));

  std::size_t n = checked_configuration_count(q, window.size(), "random_local_function");
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  Eigen::VectorXd table(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < table.size(); ++k) table[k] = value(rng);
  return LocalFunction(q, std::move(window), std::move(table));
}

}  // namespace gibbslab

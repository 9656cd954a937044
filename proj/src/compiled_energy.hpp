#pragma once

// Potential translates resolved against a fixed volume, shared by the Gibbs
// tabulation and the heat-bath dynamics.

#include <Eigen/Core>

#include <span>
#include <vector>

#include "gibbslab/measures.hpp"

namespace gibbslab::detail {

struct CompiledTerm {
  const Eigen::VectorXd* values;
  /// slot >= 0: position in the volume; slot < 0: fixed label -1 - slot.
  std::vector<int> slots;
};

struct CompiledEnergy {
  int q = 2;
  std::vector<CompiledTerm> terms;

  double energy(std::span<const int> values) const;
};

CompiledEnergy compile_volume(const Potential& U, const Window& volume, const Boundary& boundary);
CompiledEnergy compile_torus(const Potential& U, int side);

}  // namespace gibbslab::detail

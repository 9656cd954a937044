#pragma once

// File formats: local functions as JSON, potentials as TOML.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "gibbslab/funcspace.hpp"
#include "gibbslab/measures.hpp"

namespace gibbslab {

/// {dimension, alphabet_size, sites: [[coords]], values: [reals]}.
nlohmann::json local_function_to_json(const LocalFunction& f);
/// Sites may come in any order; values follow the listed order, last site
/// fastest. alphabet_size defaults to 2.
LocalFunction local_function_from_json(const nlohmann::json& j);

/// TOML potential definition:
///
///   alphabet_size = 2
///   dimension = 1
///   a_priori = [0.5, 0.5]        # optional, uniform by default
///   [[term]]
///   sites = [[0], [1]]
///   values = [-1.0, 1.0, 1.0, -1.0]
Potential potential_from_toml(const std::string& text, const std::string& source = "potential");
Potential load_potential_file(const std::filesystem::path& path);

}  // namespace gibbslab

#include "gibbslab/io.hpp"

#include <fstream>
#include <sstream>

#include "toml.hpp"

namespace gibbslab {

nlohmann::json local_function_to_json(const LocalFunction& f) {
  nlohmann::json j;
  j["dimension"] = f.dimension();
  j["alphabet_size"] = f.alphabet_size();
  j["sites"] = f.window().sites();
  j["values"] = std::vector<double>(f.table().data(), f.table().data() + f.table().size());
  return j;
}

namespace {

// Reorders a table given in `listed` site order into the sorted window order.
LocalFunction from_listed(int q, int dimension, const std::vector<Site>& listed,
                          const std::vector<double>& values) {
  const Window window(dimension, listed);
  const std::size_t n = checked_configuration_count(q, listed.size(), "local function import");
  if (values.size() != n) {
    throw Error("local function has " + std::to_string(values.size()) + " values, expected " +
                std::to_string(n));
  }
  std::vector<std::size_t> position(listed.size());
  for (std::size_t k = 0; k < listed.size(); ++k) position[k] = *window.index_of(listed[k]);
  std::vector<int> listed_values(listed.size());
  return LocalFunction::tabulate(q, window, [&](std::span<const int> sorted) {
    for (std::size_t k = 0; k < listed.size(); ++k) listed_values[k] = sorted[position[k]];
    return values[encode_configuration(listed_values, q)];
  });
}

}  // namespace

LocalFunction local_function_from_json(const nlohmann::json& j) {
  try {
    const int dimension = j.at("dimension").get<int>();
    const int q = j.value("alphabet_size", 2);
    const auto sites = j.at("sites").get<std::vector<Site>>();
    const auto values = j.at("values").get<std::vector<double>>();
    return from_listed(q, dimension, sites, values);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid local function JSON: ") + e.what());
  }
}

Potential potential_from_toml(const std::string& text, const std::string& source) {
  toml::table doc;
  try {
    doc = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e;
    throw Error(msg.str());
  }
  auto field_error = [&](const std::string& field, const std::string& what) {
    return Error(source + ": " + field + ": " + what);
  };
  const auto q = doc["alphabet_size"].value<int>();
  if (!q || *q < 1) throw field_error("alphabet_size", "positive integer required");
  const auto d = doc["dimension"].value<int>();
  if (!d || *d < 1) throw field_error("dimension", "positive integer required");

  Eigen::VectorXd prior = Eigen::VectorXd::Constant(*q, 1.0 / *q);
  if (const auto* arr = doc["a_priori"].as_array()) {
    if (static_cast<int>(arr->size()) != *q) throw field_error("a_priori", "needs alphabet_size entries");
    for (int k = 0; k < *q; ++k) {
      auto v = (*arr)[static_cast<std::size_t>(k)].value<double>();
      if (!v) throw field_error("a_priori", "entries must be numbers");
      prior[k] = *v;
    }
  }

  std::vector<PotentialTerm> terms;
  if (const auto* list = doc["term"].as_array()) {
    for (std::size_t t = 0; t < list->size(); ++t) {
      const std::string name = "term[" + std::to_string(t) + "]";
      const auto* tab = (*list)[t].as_table();
      if (!tab) throw field_error(name, "must be a table");
      const auto* sites_node = (*tab)["sites"].as_array();
      const auto* values_node = (*tab)["values"].as_array();
      if (!sites_node || !values_node) throw field_error(name, "needs sites and values arrays");
      std::vector<Site> sites;
      for (const auto& s : *sites_node) {
        const auto* coords = s.as_array();
        if (!coords || static_cast<int>(coords->size()) != *d) {
          throw field_error(name + ".sites", "each site needs " + std::to_string(*d) + " coordinates");
        }
        Site site;
        for (const auto& c : *coords) {
          auto v = c.value<int>();
          if (!v) throw field_error(name + ".sites", "coordinates must be integers");
          site.push_back(*v);
        }
        sites.push_back(std::move(site));
      }
      std::vector<double> values;
      for (const auto& v : *values_node) {
        auto x = v.value<double>();
        if (!x) throw field_error(name + ".values", "entries must be numbers");
        values.push_back(*x);
      }
      LocalFunction table = from_listed(*q, *d, sites, values);
      terms.push_back({table.window(), table.table()});
    }
  }
  return Potential(*q, *d, std::move(prior), std::move(terms));
}

Potential load_potential_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open potential file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return potential_from_toml(text.str(), path.string());
}

}  // namespace gibbslab

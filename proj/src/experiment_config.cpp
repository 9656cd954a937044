#include <fstream>
#include <set>
#include <sstream>

#include "toml.hpp"

#include "gibbslab/experiment.hpp"
#include "gibbslab/lattice.hpp"
#include "gibbslab/simplex.hpp"

namespace gibbslab {

namespace {

constexpr std::pair<Scenario, const char*> kScenarioNames[] = {
    {Scenario::oscillation, "oscillation"},       {Scenario::young, "young"},
    {Scenario::gcb_scan, "gcb-scan"},             {Scenario::entropy_density, "entropy-density"},
    {Scenario::distance, "distance"},             {Scenario::theorem_check, "theorem-check"},
    {Scenario::glauber, "glauber"},               {Scenario::decimation, "decimation"},
    {Scenario::axioms, "axioms"},
};

nlohmann::json to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = to_json(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : *a) j.push_back(to_json(v));
    return j;
  }
  if (auto v = node.value_exact<std::int64_t>()) return *v;
  if (auto v = node.value_exact<double>()) return *v;
  if (auto v = node.value_exact<bool>()) return *v;
  if (auto v = node.value_exact<std::string>()) return *v;
  throw ConfigError("config", "unsupported TOML value");
}

class Reader {
 public:
  Reader(const toml::table& table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

  std::string field(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }
  bool has(const std::string& key) {
    seen_.insert(key);
    return table_.contains(key);
  }
  const toml::node* node(const std::string& key) {
    seen_.insert(key);
    return table_.get(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const toml::node* n = node(key);
    if (!n) return;
    if constexpr (std::is_same_v<T, std::string>) {
      auto v = n->value_exact<std::string>();
      if (!v) throw ConfigError(field(key), "expected a string");
      out = *v;
    } else if constexpr (std::is_same_v<T, double>) {
      auto v = n->value<double>();
      if (!v || n->is_boolean()) throw ConfigError(field(key), "expected a number");
      out = *v;
    } else {
      auto v = n->value_exact<std::int64_t>();
      if (!v) throw ConfigError(field(key), "expected an integer");
      out = static_cast<T>(*v);
    }
  }

  template <typename T>
  void read_list(const std::string& key, std::vector<T>& out) {
    const toml::node* n = node(key);
    if (!n) return;
    const auto* arr = n->as_array();
    if (!arr) throw ConfigError(field(key), "expected an array");
    out.clear();
    for (const auto& e : *arr) {
      if constexpr (std::is_same_v<T, double>) {
        auto v = e.value<double>();
        if (!v || e.is_boolean()) throw ConfigError(field(key), "expected numbers");
        out.push_back(*v);
      } else {
        auto v = e.value_exact<std::int64_t>();
        if (!v) throw ConfigError(field(key), "expected integers");
        out.push_back(static_cast<T>(*v));
      }
    }
  }

  void reject_unknown() const {
    for (const auto& [k, v] : table_) {
      const std::string key(k.str());
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  const toml::table& table_;
  std::string prefix_;
  std::set<std::string> seen_;
};

ModelSpec read_model(const toml::table& table, const std::string& prefix,
                     const std::filesystem::path& base_dir) {
  Reader r(table, prefix);
  ModelSpec m;
  r.read("kind", m.kind);
  r.read("p", m.p);
  r.read("J", m.J);
  r.read("h", m.h);
  r.read("L", m.side);
  r.read("dimension", m.dimension);
  std::string file;
  r.read("file", file);
  if (!file.empty()) m.potential_file = base_dir / file;
  r.reject_unknown();
  if (m.kind == "ising2d-torus") m.dimension = 2;
  return m;
}

void check_cap(int q, std::size_t sites, const std::string& field) {
  const auto n = configuration_count(q, sites);
  if (!n || *n > tabulation_cap()) {
    throw ConfigError(field, std::to_string(q) + "^" + std::to_string(sites) +
                                 " configurations exceed the tabulation cap " +
                                 std::to_string(tabulation_cap()));
  }
}

std::size_t cube_sites(int r, int d) {
  std::size_t n = 1;
  for (int k = 0; k < d; ++k) n *= static_cast<std::size_t>(2 * r + 1);
  return n;
}

int model_q(const ModelSpec& m) {
  if (m.kind == "potential" && !m.potential_file.empty() && std::filesystem::exists(m.potential_file)) {
    return model_potential(m).alphabet_size();
  }
  return 2;
}

void validate_model(const ModelSpec& m, const std::string& field, bool needs_marginals) {
  static const std::set<std::string> kinds{"product", "ising1d", "ising2d-torus", "potential"};
  if (!kinds.count(m.kind)) {
    throw ConfigError(field + ".kind", "unknown model '" + m.kind +
                                           "' (product, ising1d, ising2d-torus, potential)");
  }
  if (m.dimension < 1 || m.dimension > 3) throw ConfigError(field + ".dimension", "must be 1, 2 or 3");
  if (m.kind == "product" && !(m.p > 0.0 && m.p < 1.0)) {
    throw ConfigError(field + ".p", "must lie in (0, 1)");
  }
  if (m.kind == "ising1d" && m.dimension != 1) throw ConfigError(field + ".dimension", "ising1d is 1D");
  if (m.kind == "ising2d-torus") {
    if (m.side < 3) throw ConfigError(field + ".L", "torus side of at least 3 required");
    if (needs_marginals) check_cap(2, std::size_t(m.side) * std::size_t(m.side), field + ".L");
  }
  if (m.kind == "potential") {
    if (m.potential_file.empty()) throw ConfigError(field + ".file", "potential file required");
    if (!std::filesystem::exists(m.potential_file)) {
      throw ConfigError(field + ".file", "no such file: " + m.potential_file.string());
    }
    Potential U = [&] {
      try {
        return model_potential(m);
      } catch (const Error& e) {
        throw ConfigError(field + ".file", e.what());
      }
    }();
    const bool chain = U.dimension() == 1 && U.range() <= 1;
    if (needs_marginals && !chain) {
      if (m.side <= 2 * U.range()) throw ConfigError(field + ".L", "torus side must exceed twice the range");
      std::size_t sites = 1;
      for (int k = 0; k < U.dimension(); ++k) sites *= static_cast<std::size_t>(m.side);
      check_cap(U.alphabet_size(), sites, field + ".L");
    }
  }
}

}  // namespace

const char* to_string(Scenario s) {
  for (const auto& [k, name] : kScenarioNames) {
    if (k == s) return name;
  }
  return "unknown";
}

std::optional<Scenario> scenario_from_string(const std::string& name) {
  for (const auto& [k, n] : kScenarioNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                              const std::string& source) {
  toml::table doc;
  try {
    doc = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(source, msg.str());
  }

  ExperimentConfig c;
  c.source_text = text;
  Reader top(doc, "");
  std::string scenario;
  top.read("scenario", scenario);
  if (scenario.empty()) throw ConfigError("scenario", "required");
  auto kind = scenario_from_string(scenario);
  if (!kind) throw ConfigError("scenario", "unknown scenario '" + scenario + "'");
  c.scenario = *kind;
  top.read("name", c.name);
  if (c.name.empty()) c.name = scenario;
  std::string out;
  top.read("output_dir", out);
  if (out.empty()) throw ConfigError("output_dir", "required");
  c.output_dir = base_dir / out;
  if (top.has("seed")) {
    std::int64_t seed = 0;
    top.read("seed", seed);
    if (seed < 0) throw ConfigError("seed", "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(seed);
  }

  if (const toml::node* n = top.node("mu")) {
    if (!n->is_table()) throw ConfigError("mu", "expected a table");
    c.mu = read_model(*n->as_table(), "mu", base_dir);
  }
  if (const toml::node* n = top.node("nu")) {
    if (!n->is_table()) throw ConfigError("nu", "expected a table");
    c.nu = read_model(*n->as_table(), "nu", base_dir);
  }

  if (const toml::node* n = top.node("params")) {
    if (!n->is_table()) throw ConfigError("params", "expected a table");
    Reader p(*n->as_table(), "params");
    p.read_list("radii", c.radii);
    p.read_list("betas", c.betas);
    if (const toml::node* cn = p.node("constant")) {
      if (auto s = cn->value_exact<std::string>()) {
        if (*s != "scan") throw ConfigError("params.constant", "a number or \"scan\"");
      } else {
        double v = 0.0;
        p.read("constant", v);
        c.constant = v;
      }
    }
    p.read("tolerance", c.tolerance);
    p.read("count", c.count);
    p.read_list("dimensions", c.dimensions);
    p.read_list("alphabets", c.alphabets);
    p.read("max_sites", c.max_sites);
    if (const toml::node* fn = p.node("function")) c.function = to_json(*fn);
    std::string file;
    p.read("function_file", file);
    if (!file.empty()) c.function_file = base_dir / file;
    if (const toml::node* psi = p.node("psi")) {
      const auto* rows = psi->as_array();
      if (!rows) throw ConfigError("params.psi", "expected an array of rows");
      for (const auto& row : *rows) {
        const auto* entries = row.as_array();
        if (!entries) throw ConfigError("params.psi", "expected an array of rows");
        std::vector<double> r;
        for (const auto& e : *entries) {
          auto v = e.value<double>();
          if (!v) throw ConfigError("params.psi", "entries must be numbers");
          r.push_back(*v);
        }
        c.psi.push_back(std::move(r));
      }
    }
    p.read("n_max", c.n_max);
    p.read("side", c.side);
    p.read("initial_p", c.initial_p);
    p.read_list("checkpoints", c.checkpoints);
    p.read("samples", c.samples);
    p.read("bootstrap", c.bootstrap);
    p.read("balance_side", c.balance_side);
    p.read_list("couplings", c.couplings);
    if (const toml::node* pn = p.node("pairs")) {
      const auto* arr = pn->as_array();
      if (!arr) throw ConfigError("params.pairs", "expected an array of [J_nu, J_mu] pairs");
      c.pairs.clear();
      for (const auto& e : *arr) {
        const auto* pair = e.as_array();
        if (!pair || pair->size() != 2) {
          throw ConfigError("params.pairs", "expected an array of [J_nu, J_mu] pairs");
        }
        auto a = (*pair)[0].value<double>();
        auto b = (*pair)[1].value<double>();
        if (!a || !b) throw ConfigError("params.pairs", "couplings must be numbers");
        c.pairs.emplace_back(*a, *b);
      }
    }
    p.reject_unknown();
  }
  top.reject_unknown();
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path(), path.string());
}

void validate_config(const ExperimentConfig& c) {
  auto need_seed = [&] {
    if (!c.seed) throw ConfigError("seed", std::string("required for the stochastic ") +
                                               to_string(c.scenario) + " scenario");
  };
  auto need_nu = [&] {
    if (!c.nu) throw ConfigError("nu", "a compared model [nu] is required");
  };
  auto check_radii = [&](int q, int d) {
    if (c.radii.empty()) throw ConfigError("params.radii", "at least one radius required");
    for (int r : c.radii) {
      if (r < 0) throw ConfigError("params.radii", "radii must be nonnegative");
      check_cap(q, cube_sites(r, d), "params.radii");
    }
  };
  auto check_random_family = [&] {
    if (c.count < 1) throw ConfigError("params.count", "must be positive");
    if (c.max_sites < 1) throw ConfigError("params.max_sites", "must be positive");
    for (int d : c.dimensions) {
      if (d < 1 || d > 3) throw ConfigError("params.dimensions", "entries must be 1, 2 or 3");
    }
    for (int q : c.alphabets) {
      if (q < 2) throw ConfigError("params.alphabets", "entries must be at least 2");
      check_cap(q, static_cast<std::size_t>(c.max_sites), "params.max_sites");
    }
    if (c.dimensions.empty()) throw ConfigError("params.dimensions", "must not be empty");
    if (c.alphabets.empty()) throw ConfigError("params.alphabets", "must not be empty");
  };
  for (double b : c.betas) {
    if (b == 0.0 || !std::isfinite(b)) throw ConfigError("params.betas", "entries must be finite and nonzero");
  }
  if (c.constant && !(*c.constant > 0.0)) throw ConfigError("params.constant", "must be positive");
  if (!(c.tolerance >= 0.0)) throw ConfigError("params.tolerance", "must be nonnegative");

  switch (c.scenario) {
    case Scenario::oscillation:
      if (!c.function && c.function_file.empty()) {
        throw ConfigError("params.function", "an inline function or params.function_file is required");
      }
      if (!c.function_file.empty() && !std::filesystem::exists(c.function_file)) {
        throw ConfigError("params.function_file", "no such file: " + c.function_file.string());
      }
      break;
    case Scenario::young:
      need_seed();
      check_random_family();
      check_radii(2, 1);
      // Each oscillation of the sum tabulates at most |D_f| overlapping copies.
      for (int q : c.alphabets) {
        check_cap(q, static_cast<std::size_t>(c.max_sites * c.max_sites), "params.max_sites");
      }
      break;
    case Scenario::axioms:
      need_seed();
      check_random_family();
      if (!c.psi.empty()) {
        for (const auto& row : c.psi) {
          if (row.size() != c.psi.size()) throw ConfigError("params.psi", "must be square");
        }
      }
      break;
    case Scenario::gcb_scan:
      validate_model(c.mu, "mu", true);
      if (c.count > 0) need_seed();
      if (c.max_sites < 1) throw ConfigError("params.max_sites", "must be positive");
      check_cap(model_q(c.mu), cube_sites(1, c.mu.dimension), "mu");
      break;
    case Scenario::entropy_density:
      need_nu();
      validate_model(c.mu, "mu", true);
      validate_model(*c.nu, "nu", true);
      if (c.n_max < 0) throw ConfigError("params.n_max", "must be nonnegative");
      if (c.nu->dimension != c.mu.dimension) throw ConfigError("nu.dimension", "differs from mu");
      check_cap(model_q(c.mu), cube_sites(c.n_max, c.mu.dimension), "params.n_max");
      break;
    case Scenario::distance:
    case Scenario::theorem_check: {
      need_nu();
      validate_model(c.mu, "mu", true);
      validate_model(*c.nu, "nu", true);
      if (c.nu->dimension != c.mu.dimension) throw ConfigError("nu.dimension", "differs from mu");
      const int q = model_q(c.mu);
      check_radii(q, c.mu.dimension);
      const SimplexOptions<double> opt;
      for (int r : c.radii) {
        const std::size_t sites = cube_sites(r, c.mu.dimension);
        const std::size_t configs = checked_configuration_count(q, sites, "distance LP");
        const std::size_t rows = configs * sites * std::size_t(q - 1) + 1;
        const std::size_t cols = configs + sites + 2 * rows;
        if (rows * cols > opt.max_tableau_entries) {
          throw ConfigError("params.radii", "distance LP at radius " + std::to_string(r) +
                                                " exceeds the simplex tableau cap");
        }
      }
      if (c.scenario == Scenario::theorem_check) {
        if (c.n_max < 0) throw ConfigError("params.n_max", "must be nonnegative");
        check_cap(q, cube_sites(c.n_max, c.mu.dimension), "params.n_max");
      }
      break;
    }
    case Scenario::glauber: {
      need_seed();
      ModelSpec dynamics_model = c.mu;
      if (dynamics_model.side == 0) dynamics_model.side = c.side;
      validate_model(dynamics_model, "mu", false);
      if (c.mu.kind == "product") throw ConfigError("mu.kind", "glauber needs an interacting model");
      if (c.side < 3) throw ConfigError("params.side", "must be at least 3");
      if (c.mu.kind == "ising2d-torus" && c.mu.side != 0 && c.mu.side != c.side) {
        throw ConfigError("mu.L", "differs from params.side");
      }
      if (c.radii.size() != 1) throw ConfigError("params.radii", "glauber uses exactly one radius");
      check_radii(model_q(c.mu), c.mu.dimension);
      if (2 * c.radii[0] + 1 > c.side) throw ConfigError("params.radii", "window wider than the torus");
      if (c.samples < 2) throw ConfigError("params.samples", "at least two samples required");
      if (c.bootstrap < 2) throw ConfigError("params.bootstrap", "at least two replicates required");
      if (!(c.initial_p > 0.0 && c.initial_p < 1.0)) throw ConfigError("params.initial_p", "must lie in (0, 1)");
      if (c.checkpoints.empty()) throw ConfigError("params.checkpoints", "must not be empty");
      for (std::size_t k = 0; k < c.checkpoints.size(); ++k) {
        if (c.checkpoints[k] < 0 || (k && c.checkpoints[k] <= c.checkpoints[k - 1])) {
          throw ConfigError("params.checkpoints", "must be nonnegative and strictly increasing");
        }
      }
      std::size_t balance_sites = 1;
      for (int k = 0; k < c.mu.dimension; ++k) balance_sites *= static_cast<std::size_t>(c.balance_side);
      check_cap(model_q(c.mu), balance_sites, "params.balance_side");
      break;
    }
    case Scenario::decimation:
      if (c.couplings.empty() && c.pairs.empty()) {
        throw ConfigError("params.couplings", "nothing to check");
      }
      break;
  }
}

}  // namespace gibbslab

#include "gibbslab/metric.hpp"

#include "json.hpp"

#include "gibbslab/io.hpp"

namespace gibbslab {

MetricLpSolution distance_lp(const WindowMeasure& nu, const WindowMeasure& mu) {
  if (nu.window != mu.window || nu.q != mu.q) {
    throw Error("distance LP needs marginals on a common window");
  }
  const int q = nu.q;
  const Window& window = nu.window;
  const std::size_t sites = window.size();
  const std::size_t configs = nu.configurations();
  const Eigen::VectorXd gap = nu.weights - mu.weights;

  // f(0) = 0 fixes the additive gauge. The remaining values enter through
  // g = f + 1 >= 0, valid because any feasible f has range at most 1.
  const Eigen::Index g_count = static_cast<Eigen::Index>(configs) - 1;
  const Eigen::Index vars = g_count + static_cast<Eigen::Index>(sites);
  const std::size_t pair_rows = configs * sites * static_cast<std::size_t>(q - 1);

  LinearProgram<double> lp;
  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pair_rows + 1), vars);
  lp.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pair_rows + 1));
  lp.sense.assign(pair_rows + 1, RowSense::less_equal);
  lp.c = Eigen::VectorXd::Zero(vars);

  std::vector<int> values(sites);
  std::vector<int> other(sites);
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < configs; ++s) {
    decode_configuration(s, q, values);
    for (std::size_t i = 0; i < sites; ++i) {
      for (int a = 0; a < q; ++a) {
        if (a == values[i]) continue;
        other = values;
        other[i] = a;
        const std::size_t e = encode_configuration(other, q);
        // f(s) - f(e) <= t_i
        if (s != 0) lp.A(row, static_cast<Eigen::Index>(s) - 1) += 1.0;
        if (e != 0) lp.A(row, static_cast<Eigen::Index>(e) - 1) -= 1.0;
        lp.A(row, g_count + static_cast<Eigen::Index>(i)) = -1.0;
        lp.b[row] = (s != 0 ? 1.0 : 0.0) - (e != 0 ? 1.0 : 0.0);
        ++row;
      }
    }
  }
  lp.A.row(row).tail(static_cast<Eigen::Index>(sites)).setOnes();
  lp.b[row] = 1.0;
  for (Eigen::Index k = 0; k < g_count; ++k) lp.c[k] = gap[k + 1];

  const LpSolution<double> sol = solve_lp(lp);
  MetricLpSolution out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  if (sol.status != LpStatus::optimal) {
    throw Error(std::string("distance LP solver failed: ") + to_string(sol.status));
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(configs));
  for (Eigen::Index k = 0; k < g_count; ++k) f[k + 1] = sol.x[k] - 1.0;
  out.witness = LocalFunction(q, window, f);
  out.budgets = {window, sol.x.tail(static_cast<Eigen::Index>(sites))};
  out.value = sol.objective + gap[0];
  out.witness_objective = gap.dot(f);
  out.witness_oscillation_l1 = oscillation_vector(out.witness).l1();
  out.radius = -1;
  return out;
}

MetricLpSolution distance_lp(const MarginalSource& nu, const MarginalSource& mu, int radius) {
  if (nu.dimension != mu.dimension) throw Error("sources have different dimensions");
  const Window cube = cube_window(radius, nu.dimension);
  MetricLpSolution out = distance_lp(nu(cube), mu(cube));
  out.radius = radius;
  return out;
}

std::string metric_solution_json(const MetricLpSolution& solution) {
  nlohmann::json j;
  j["radius"] = solution.radius;
  j["value"] = solution.value;
  j["witness_function"] = local_function_to_json(solution.witness);
  j["budgets"] = std::vector<double>(solution.budgets.entries.data(),
                                     solution.budgets.entries.data() + solution.budgets.entries.size());
  return j.dump(2);
}

double wasserstein_hamming(const WindowMeasure& mu, const WindowMeasure& nu,
                           std::size_t configuration_cap) {
  if (mu.window != nu.window || mu.q != nu.q) {
    throw Error("Wasserstein distance needs measures on a common window");
  }
  const std::size_t n = mu.configurations();
  if (n > configuration_cap) throw CapError("wasserstein_hamming", n, configuration_cap);
  const int q = mu.q;
  const std::size_t sites = mu.window.size();
  const Eigen::Index vars = static_cast<Eigen::Index>(n * n);

  LinearProgram<double> lp;
  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), vars);
  lp.b.resize(static_cast<Eigen::Index>(2 * n));
  lp.sense.assign(2 * n, RowSense::equal);
  lp.c.resize(vars);
  std::vector<int> x(sites);
  std::vector<int> y(sites);
  for (std::size_t a = 0; a < n; ++a) {
    decode_configuration(a, q, x);
    for (std::size_t b = 0; b < n; ++b) {
      decode_configuration(b, q, y);
      int cost = 0;
      for (std::size_t k = 0; k < sites; ++k) cost += x[k] != y[k];
      const Eigen::Index v = static_cast<Eigen::Index>(a * n + b);
      lp.c[v] = -double(cost);
      lp.A(static_cast<Eigen::Index>(a), v) = 1.0;
      lp.A(static_cast<Eigen::Index>(n + b), v) = 1.0;
    }
    lp.b[static_cast<Eigen::Index>(a)] = mu.weights[static_cast<Eigen::Index>(a)];
    lp.b[static_cast<Eigen::Index>(n + a)] = nu.weights[static_cast<Eigen::Index>(a)];
  }
  const LpSolution<double> sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw Error(std::string("transport LP solver failed: ") + to_string(sol.status));
  }
  return -sol.objective;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration limit";
  }
  return "unknown";
}

}  // namespace gibbslab

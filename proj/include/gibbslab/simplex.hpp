#pragma once

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
//
//   maximize c'x  subject to  A_i x (<= | = | >=) b_i,  x >= 0.
//
// Bland's rule makes the pivot sequence a deterministic function of the
// input, which keeps witness functions reproducible.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <vector>

#include "gibbslab/error.hpp"

namespace gibbslab {

enum class RowSense { less_equal, equal, greater_equal };

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

template <typename Scalar>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix A;
  Vector b;
  std::vector<RowSense> sense;
  Vector c;
};

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar objective{};
  int iterations = 0;
};

template <typename Scalar>
struct SimplexOptions {
  Scalar pivot_tolerance = Scalar(1e-12);
  Scalar cost_tolerance = Scalar(1e-11);
  Scalar feasibility_tolerance = Scalar(1e-9);
  int max_iterations = 200000;
  std::size_t max_tableau_entries = std::size_t{60} << 20;
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Tableau(Matrix t, std::vector<int> basis, const SimplexOptions<Scalar>& opt)
      : t_(std::move(t)), basis_(std::move(basis)), opt_(opt) {}

  Matrix& table() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int rhs() const { return static_cast<int>(t_.cols()) - 1; }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    const int height = rows() + 1;
    for (int i = 0; i < height; ++i) {
      if (i == row) continue;
      const Scalar factor = t_(i, col);
      if (factor != Scalar(0)) t_.row(i) -= factor * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  /// Iterates until optimal; columns with allowed[j] == false never enter.
  LpStatus run(const std::vector<bool>& allowed, int& iterations) {
    const int z = rows();
    while (true) {
      if (iterations >= opt_.max_iterations) return LpStatus::iteration_limit;
      int enter = -1;
      for (int j = 0; j < rhs(); ++j) {
        if (allowed[static_cast<std::size_t>(j)] && t_(z, j) < -opt_.cost_tolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::optimal;
      Eigen::Index leave = -1;
      Scalar best_ratio{};
      const Scalar* column = t_.col(enter).data();
      const Scalar* values = t_.col(rhs()).data();
      for (Eigen::Index i = 0; i < Eigen::Index(z); ++i) {
        const Scalar a = column[i];
        if (a <= opt_.pivot_tolerance) continue;
        const Scalar ratio = values[i] / a;
        if (leave < 0 || ratio < best_ratio - opt_.pivot_tolerance ||
            (std::abs(ratio - best_ratio) <= opt_.pivot_tolerance &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      pivot(static_cast<int>(leave), enter);
      ++iterations;
    }
  }

  /// Objective row for costs c (maximization): r_j = c_B' T_j - c_j.
  void price(const std::vector<Scalar>& cost) {
    const int z = rows();
    t_.row(z).setZero();
    const int width = rhs() + 1;
    for (int j = 0; j < width; ++j) {
      Scalar acc = j < rhs() ? -cost[static_cast<std::size_t>(j)] : Scalar(0);
      for (int i = 0; i < z; ++i) {
        acc += cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] * t_(i, j);
      }
      t_(z, j) = acc;
    }
  }

  void drop_row(int row) {
    const int n = static_cast<int>(t_.rows());
    Matrix smaller(n - 1, t_.cols());
    smaller.topRows(row) = t_.topRows(row);
    smaller.bottomRows(n - 1 - row) = t_.bottomRows(n - 1 - row);
    t_ = std::move(smaller);
    basis_.erase(basis_.begin() + row);
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
  SimplexOptions<Scalar> opt_;
};

}  // namespace detail

template <typename Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp,
                            const SimplexOptions<Scalar>& opt = SimplexOptions<Scalar>{}) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int m = static_cast<int>(lp.A.rows());
  const int n = static_cast<int>(lp.A.cols());
  if (lp.b.size() != m || static_cast<int>(lp.sense.size()) != m || lp.c.size() != n) {
    throw Error("linear program dimensions are inconsistent");
  }

  // Normalize to b >= 0.
  Matrix A = lp.A;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b = lp.b;
  std::vector<RowSense> sense = lp.sense;
  for (int i = 0; i < m; ++i) {
    if (b[i] < Scalar(0)) {
      A.row(i) *= Scalar(-1);
      b[i] = -b[i];
      if (sense[static_cast<std::size_t>(i)] == RowSense::less_equal) {
        sense[static_cast<std::size_t>(i)] = RowSense::greater_equal;
      } else if (sense[static_cast<std::size_t>(i)] == RowSense::greater_equal) {
        sense[static_cast<std::size_t>(i)] = RowSense::less_equal;
      }
    }
  }

  int slack_count = 0;
  int artificial_count = 0;
  for (auto s : sense) {
    if (s != RowSense::equal) ++slack_count;
    if (s != RowSense::less_equal) ++artificial_count;
  }
  const int cols = n + slack_count + artificial_count;
  const std::size_t entries = std::size_t(m + 1) * std::size_t(cols + 1);
  if (entries > opt.max_tableau_entries) {
    throw CapError("simplex tableau", entries, opt.max_tableau_entries);
  }

  Matrix t = Matrix::Zero(m + 1, cols + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  std::vector<bool> artificial(static_cast<std::size_t>(cols), false);
  int next_slack = n;
  int next_artificial = n + slack_count;
  for (int i = 0; i < m; ++i) {
    t.row(i).head(n) = A.row(i);
    t(i, cols) = b[i];
    switch (sense[static_cast<std::size_t>(i)]) {
      case RowSense::less_equal:
        t(i, next_slack) = Scalar(1);
        basis[static_cast<std::size_t>(i)] = next_slack++;
        break;
      case RowSense::greater_equal:
        t(i, next_slack++) = Scalar(-1);
        [[fallthrough]];
      case RowSense::equal:
        t(i, next_artificial) = Scalar(1);
        artificial[static_cast<std::size_t>(next_artificial)] = true;
        basis[static_cast<std::size_t>(i)] = next_artificial++;
        break;
    }
  }

  detail::Tableau<Scalar> tab(std::move(t), std::move(basis), opt);
  LpSolution<Scalar> out;
  std::vector<bool> allowed(static_cast<std::size_t>(cols), true);

  if (artificial_count > 0) {
    std::vector<Scalar> phase1(static_cast<std::size_t>(cols), Scalar(0));
    for (int j = 0; j < cols; ++j) {
      if (artificial[static_cast<std::size_t>(j)]) phase1[static_cast<std::size_t>(j)] = Scalar(-1);
    }
    tab.price(phase1);
    out.status = tab.run(allowed, out.iterations);
    if (out.status == LpStatus::iteration_limit) return out;
    if (tab.table()(tab.rows(), tab.rhs()) < -opt.feasibility_tolerance) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (int i = tab.rows() - 1; i >= 0; --i) {
      const int var = tab.basis()[static_cast<std::size_t>(i)];
      if (!artificial[static_cast<std::size_t>(var)]) continue;
      int col = -1;
      for (int j = 0; j < cols; ++j) {
        if (!artificial[static_cast<std::size_t>(j)] &&
            std::abs(tab.table()(i, j)) > opt.pivot_tolerance) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
      } else {
        tab.drop_row(i);
      }
    }
    for (int j = 0; j < cols; ++j) {
      if (artificial[static_cast<std::size_t>(j)]) allowed[static_cast<std::size_t>(j)] = false;
    }
  }

  std::vector<Scalar> cost(static_cast<std::size_t>(cols), Scalar(0));
  for (int j = 0; j < n; ++j) cost[static_cast<std::size_t>(j)] = lp.c[j];
  tab.price(cost);
  out.status = tab.run(allowed, out.iterations);
  if (out.status != LpStatus::optimal) return out;

  out.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (int i = 0; i < tab.rows(); ++i) {
    const int var = tab.basis()[static_cast<std::size_t>(i)];
    if (var < n) out.x[var] = std::max(Scalar(0), tab.table()(i, tab.rhs()));
  }
  out.objective = lp.c.dot(out.x);
  return out;
}

}  // namespace gibbslab

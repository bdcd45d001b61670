#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "partinf/errors.hpp"
#include "partinf/generator.hpp"
#include "partinf/rng.hpp"

namespace partinf {

// <A, y y^T> = y^T A y. This is twice the "1/2 y^T A y" score, matching the
// <A, Y> objective of the relaxation.
inline double objective(const Eigen::MatrixXd& a, const Labels& y) {
  detail::require(a.rows() == a.cols() && a.rows() == y.size(), "objective: dimension mismatch");
  const Eigen::VectorXd x = y.to_vector();
  return x.dot(a * x);
}

struct SolverConfig {
  std::optional<int> rank;          // default ceil(sqrt(2n)) + 1
  int max_sweeps = 500;
  std::optional<double> tolerance;  // default 1e-8 * n
  std::uint64_t seed = 0;

  int resolved_rank(int n) const {
    return rank.value_or(static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1);
  }
  double resolved_tolerance(int n) const { return tolerance.value_or(1e-8 * std::max(n, 1)); }

  void validate(int n) const {
    detail::require(resolved_rank(n) >= 2, "solver rank must be >= 2");
    detail::require(resolved_tolerance(n) > 0.0, "solver tolerance must be > 0");
    detail::require(max_sweeps >= 1, "max_sweeps must be >= 1");
  }
};

using Factor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SdpSolution {
  Factor factor;                // n x r, unit rows; Y = U U^T
  double objective = 0.0;       // <A, Y>
  int iterations = 0;           // completed sweeps
  bool converged = false;
  double residual = 0.0;        // objective gain of the last sweep
  std::vector<double> history;  // objective before sweep 1, then after each sweep

  Eigen::MatrixXd gram() const { return factor * factor.transpose(); }
};

namespace detail {

inline void require_symmetric_zero_diagonal(const Eigen::MatrixXd& a) {
  require(a.rows() == a.cols(), "matrix must be square");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    require(a(i, i) == 0.0, "matrix must have zero diagonal");
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      require(a(i, j) == a(j, i), "matrix must be symmetric");
  }
}

struct SparseRows {
  std::vector<int> offsets;
  std::vector<int> cols;
  std::vector<double> vals;

  explicit SparseRows(const Eigen::MatrixXd& a) {
    const auto n = a.rows();
    offsets.reserve(n + 1);
    offsets.push_back(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (a(i, j) != 0.0) {
          cols.push_back(static_cast<int>(j));
          vals.push_back(a(i, j));
        }
      }
      offsets.push_back(static_cast<int>(cols.size()));
    }
  }
};

inline double factor_objective(const SparseRows& rows, const Factor& u) {
  double total = 0.0;
  const auto n = u.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = rows.offsets[i]; k < rows.offsets[i + 1]; ++k)
      total += rows.vals[k] * u.row(i).dot(u.row(rows.cols[k]));
  return total;
}

}  // namespace detail

// Sign pattern of the leading eigenvector of Y = U U^T. The eigenvector is
// U v with v the top eigenvector of the r x r Gram matrix U^T U. Zero
// entries map to +1; the result is flipped so that entry 0 is +1.
inline Labels round_solution(const SdpSolution& sol) {
  const Factor& u = sol.factor;
  const int n = static_cast<int>(u.rows());
  detail::require(n >= 1, "round_solution: empty factor");
  const Eigen::MatrixXd gram = u.transpose() * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) throw NumericalFailure("round_solution: Gram eigendecomposition failed");
  const Eigen::VectorXd lead = u * es.eigenvectors().col(gram.rows() - 1);
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) y[i] = lead(i) < 0.0 ? -1 : 1;
  if (y[0] == -1)
    for (int& v : y) v = -v;
  return Labels(std::move(y));
}

// Maximizes <A, U U^T> over n x r factors with unit rows by cyclic row
// updates u_i <- normalize(sum_j A_ij u_j). Each update maximizes the
// objective in u_i alone, so the objective never decreases. A zero update
// direction leaves u_i unchanged.
inline SdpSolution solve_sdp(const Eigen::MatrixXd& a, const SolverConfig& cfg = {}) {
  detail::require_symmetric_zero_diagonal(a);
  const int n = static_cast<int>(a.rows());
  detail::require(n >= 1, "solve_sdp: empty matrix");
  cfg.validate(n);
  const int r = cfg.resolved_rank(n);
  const double tol = cfg.resolved_tolerance(n);

  SdpSolution sol;
  sol.factor.resize(n, r);
  CounterRng rng(cfg.seed, Stream::solver_init);
  for (int i = 0; i < n; ++i) {
    double norm = 0.0;
    do {
      for (int k = 0; k < r; ++k) sol.factor(i, k) = rng.normal();
      norm = sol.factor.row(i).norm();
    } while (norm == 0.0);
    sol.factor.row(i) /= norm;
  }

  const detail::SparseRows rows(a);
  Eigen::RowVectorXd g(r);
  double prev = detail::factor_objective(rows, sol.factor);
  sol.history.push_back(prev);
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      g.setZero();
      for (int k = rows.offsets[i]; k < rows.offsets[i + 1]; ++k)
        g.noalias() += rows.vals[k] * sol.factor.row(rows.cols[k]);
      const double norm = g.norm();
      if (norm > 0.0) sol.factor.row(i) = g / norm;
    }
    const double cur = detail::factor_objective(rows, sol.factor);
    sol.history.push_back(cur);
    sol.iterations = sweep;
    sol.residual = cur - prev;
    prev = cur;
    if (sol.residual < tol) {
      sol.converged = true;
      break;
    }
  }
  sol.objective = prev;

  // Keep the rounded rank-one point y e_1^T if it scores higher.
  const Labels y = round_solution(sol);
  const double rounded = objective(a, y);
  if (rounded > sol.objective) {
    sol.factor.setZero();
    for (int i = 0; i < n; ++i) sol.factor(i, 0) = y[i];
    sol.objective = rounded;
    sol.history.push_back(rounded);
  }
  return sol;
}

struct BruteForceResult {
  Labels labels;              // maximizer with entry 0 = +1, lexicographically smallest (-1 < +1)
  double value = 0.0;         // y^T A y
  std::size_t num_optimal = 0;  // maximizers with entry 0 = +1
};

inline constexpr int kMaxBruteForceNodes = 22;

namespace detail {
// -1 sorts before +1.
inline bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}
}  // namespace detail

// Exhaustive maximization of y^T A y over y in {+1,-1}^n with y_0 = +1, in
// Gray-code order with the field h = A y updated per flip.
inline BruteForceResult brute_force_max(const Eigen::MatrixXd& a) {
  detail::require(a.rows() == a.cols(), "brute_force_max: matrix must be square");
  detail::require(a == a.transpose(), "brute_force_max: matrix must be symmetric");
  const int n = static_cast<int>(a.rows());
  detail::require(n >= 1, "brute_force_max: empty matrix");
  if (n > kMaxBruteForceNodes)
    throw SizeLimitError("brute_force_max limited to n <= " + std::to_string(kMaxBruteForceNodes) +
                         " (got " + std::to_string(n) + ")");

  std::vector<int> y(n, 1);
  Eigen::VectorXd h = a.rowwise().sum();
  double value = h.sum();
  const double scale = 1.0 + a.cwiseAbs().sum();
  const double eps = 1e-9 * scale;

  std::vector<int> best = y;
  double best_value = value;
  std::size_t count = 1;
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < total; ++k) {
    const int v = std::countr_zero(k) + 1;
    const double yv = y[v];
    value -= 4.0 * yv * (h(v) - a(v, v) * yv);
    h -= 2.0 * yv * a.col(v);
    y[v] = -y[v];
    if (value > best_value + eps) {
      best_value = value;
      best = y;
      count = 1;
    } else if (value >= best_value - eps) {
      ++count;
      if (detail::lex_less(y, best)) best = y;
    }
  }
  Labels labels(std::move(best));
  // Re-evaluate to strip accumulated rounding from the incremental updates.
  return {labels, objective(a, labels), count};
}

}  // namespace partinf

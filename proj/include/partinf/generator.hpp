#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "partinf/errors.hpp"
#include "partinf/graph.hpp"
#include "partinf/rng.hpp"
#include "partinf/text.hpp"

namespace partinf {

// A +1/-1 vector.
class Labels {
 public:
  Labels() = default;
  explicit Labels(std::vector<int> values) : values_(std::move(values)) {
    for (int v : values_) detail::require(v == 1 || v == -1, "labels must be +1 or -1");
  }

  static Labels all_plus(int n) { return Labels(std::vector<int>(n, 1)); }

  int size() const noexcept { return static_cast<int>(values_.size()); }
  int operator[](int i) const { return values_[i]; }
  std::span<const int> values() const noexcept { return values_; }

  Labels operator-() const {
    Labels out = *this;
    for (int& v : out.values_) v = -v;
    return out;
  }

  Eigen::VectorXd to_vector() const {
    Eigen::VectorXd x(size());
    for (int i = 0; i < size(); ++i) x(i) = values_[i];
    return x;
  }

  friend bool operator==(const Labels&, const Labels&) = default;

 private:
  std::vector<int> values_;
};

// Number of positions where the two labelings agree.
inline int agreement(const Labels& a, const Labels& b) {
  detail::require(a.size() == b.size(), "agreement: length mismatch");
  int k = 0;
  for (int i = 0; i < a.size(); ++i) k += a[i] == b[i];
  return k;
}

// Agreement up to a global sign flip; always >= n/2.
inline int agreement_up_to_sign(const Labels& a, const Labels& b) {
  const int k = agreement(a, b);
  return std::max(k, a.size() - k);
}

enum class LabelMode { all_plus, balanced, random };

// balanced: the first ceil(n/2) entries are +1, the rest -1.
// random: independent fair signs from counter_hash(seed, {labels, i}).
inline Labels sample_labels(int n, LabelMode mode, std::uint64_t seed = 0) {
  detail::require(n >= 1, "sample_labels: n must be >= 1");
  std::vector<int> y(n, 1);
  switch (mode) {
    case LabelMode::all_plus:
      break;
    case LabelMode::balanced:
      for (int i = (n + 1) / 2; i < n; ++i) y[i] = -1;
      break;
    case LabelMode::random:
      for (int i = 0; i < n; ++i) {
        auto bits = counter_hash(seed, {static_cast<std::uint64_t>(Stream::labels), static_cast<std::uint64_t>(i)});
        y[i] = (bits >> 63) ? -1 : 1;
      }
      break;
  }
  return Labels(std::move(y));
}

namespace detail {
inline void require_noise(double x, const char* name) {
  require(x >= 0.0 && x < 0.5, std::string(name) + " must lie in [0, 0.5)");
}
}  // namespace detail

// Edge flip for (i, j) is drawn once from counter_hash(seed, {edge, min, max}),
// so A does not depend on iteration order.
inline bool edge_flipped(std::uint64_t seed, int i, int j, double p) {
  const auto lo = static_cast<std::uint64_t>(std::min(i, j));
  const auto hi = static_cast<std::uint64_t>(std::max(i, j));
  return to_unit_interval(counter_hash(seed, {static_cast<std::uint64_t>(Stream::edge_noise), lo, hi})) < p;
}

inline bool node_flipped(std::uint64_t seed, int i, double q) {
  return to_unit_interval(counter_hash(seed, {static_cast<std::uint64_t>(Stream::node_noise),
                                              static_cast<std::uint64_t>(i)})) < q;
}

// A_ij = z_ij y_i y_j on edges, with z_ij = -1 with probability p; zero elsewhere.
inline Eigen::MatrixXd observe_edges(const Graph& g, const Labels& y, double p, std::uint64_t seed) {
  detail::require_noise(p, "edge noise p");
  detail::require(y.size() == g.num_nodes(), "observe_edges: label length differs from node count");
  const int n = g.num_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges()) {
    const double z = edge_flipped(seed, i, j, p) ? -1.0 : 1.0;
    a(i, j) = a(j, i) = z * y[i] * y[j];
  }
  return a;
}

// w_i = -y_i with probability q, else y_i.
inline Labels observe_nodes(const Labels& y, double q, std::uint64_t seed) {
  detail::require_noise(q, "node noise q");
  std::vector<int> w(y.size());
  for (int i = 0; i < y.size(); ++i) w[i] = node_flipped(seed, i, q) ? -y[i] : y[i];
  return Labels(std::move(w));
}

struct Observation {
  Eigen::MatrixXd a;
  Labels w;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(a.rows()); }

  // The graph is the support of A.
  Graph graph() const {
    std::vector<Graph::Edge> edges;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (a(i, j) != 0.0) edges.emplace_back(i, j);
    return Graph(size(), std::move(edges));
  }
};

inline Observation observe(const Graph& g, const Labels& y, double p, double q, std::uint64_t seed) {
  return Observation{observe_edges(g, y, p, seed), observe_nodes(y, q, seed), p, q, seed};
}

// Checks symmetry, zero diagonal and entries in {-1, 0, +1}.
inline void validate_observation_matrix(const Eigen::MatrixXd& a) {
  detail::require(a.rows() == a.cols(), "observation matrix must be square");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    detail::require(a(i, i) == 0.0, "observation matrix must have zero diagonal");
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      detail::require(a(i, j) == a(j, i), "observation matrix must be symmetric");
      const double v = a(i, j);
      detail::require(v == 0.0 || v == 1.0 || v == -1.0, "observation entries must be -1, 0 or +1");
    }
  }
}

// ---------------------------------------------------------------------------
// Text format:
//   n p q seed
//   i j s        (one line per edge, i < j, ascending; s = +1/-1 as "1"/"-1")
//   w_i          (n lines)

inline std::string to_text(const Observation& obs) {
  std::ostringstream out;
  const int n = obs.size();
  out << n << ' ' << text::format_real(obs.p) << ' ' << text::format_real(obs.q) << ' ' << obs.seed << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (obs.a(i, j) != 0.0) out << i << ' ' << j << ' ' << static_cast<int>(obs.a(i, j)) << '\n';
  for (int i = 0; i < n; ++i) out << obs.w[i] << '\n';
  return out.str();
}

inline Observation parse_observation(const std::string& body, const std::string& context = "observation") {
  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line)) throw IoError(context + ": empty input");
  auto head = text::split_ws(line);
  if (head.size() != 4) throw IoError(context + ": header must be 'n p q seed'");
  Observation obs;
  const int n = text::parse_number<int>(head[0], context);
  if (n < 1) throw IoError(context + ": n must be positive");
  obs.p = text::parse_number<double>(head[1], context);
  obs.q = text::parse_number<double>(head[2], context);
  obs.seed = text::parse_number<std::uint64_t>(head[3], context);
  obs.a = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> w;
  while (std::getline(in, line)) {
    auto tok = text::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() == 3) {
      if (!w.empty()) throw IoError(context + ": edge line after node observations");
      const int i = text::parse_number<int>(tok[0], context);
      const int j = text::parse_number<int>(tok[1], context);
      const int s = text::parse_number<int>(tok[2], context);
      if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw IoError(context + ": bad edge " + line);
      if (s != 1 && s != -1) throw IoError(context + ": edge sign must be 1 or -1");
      if (obs.a(i, j) != 0.0) throw IoError(context + ": duplicate edge " + line);
      obs.a(i, j) = obs.a(j, i) = s;
    } else if (tok.size() == 1) {
      w.push_back(text::parse_number<int>(tok[0], context));
    } else {
      throw IoError(context + ": unexpected line '" + line + "'");
    }
  }
  if (static_cast<int>(w.size()) != n)
    throw IoError(context + ": expected " + std::to_string(n) + " node observations, found " + std::to_string(w.size()));
  try {
    obs.w = Labels(std::move(w));
  } catch (const InvalidArgument& e) {
    throw IoError(context + ": " + e.what());
  }
  return obs;
}

// Labels file: whitespace-separated +1/-1 tokens ("1", "+1", "-1").
inline std::string to_text(const Labels& y) {
  std::ostringstream out;
  for (int i = 0; i < y.size(); ++i) out << y[i] << '\n';
  return out.str();
}

inline Labels parse_labels(const std::string& body, const std::string& context = "labels") {
  std::vector<int> y;
  for (auto& tok : text::split_ws(body)) {
    std::string_view t = tok;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    y.push_back(text::parse_number<int>(t, context));
  }
  if (y.empty()) throw IoError(context + ": no labels");
  try {
    return Labels(std::move(y));
  } catch (const InvalidArgument& e) {
    throw IoError(context + ": " + e.what());
  }
}

}  // namespace partinf

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "partinf/errors.hpp"
#include "partinf/rng.hpp"
#include "partinf/text.hpp"

namespace partinf {

// Undirected simple graph on nodes 0..n-1. Edges are kept as a sorted list
// of (i, j) with i < j plus a CSR adjacency index.
class Graph {
 public:
  using Edge = std::pair<int, int>;

  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    detail::require(n >= 1, "graph needs at least one node");
    for (auto& [i, j] : edges_) {
      detail::require(i >= 0 && i < n && j >= 0 && j < n, "edge index out of range");
      detail::require(i != j, "self-loop (" + std::to_string(i) + "," + std::to_string(i) + ")");
      if (i > j) std::swap(i, j);
    }
    std::sort(edges_.begin(), edges_.end());
    detail::require(std::adjacent_find(edges_.begin(), edges_.end()) == edges_.end(),
                    "duplicate edge");
    build_index();
  }

  int num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const int> neighbors(int i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }

  std::vector<int> degrees() const {
    std::vector<int> d(n_);
    for (int i = 0; i < n_; ++i) d[i] = degree(i);
    return d;
  }

  int max_degree() const {
    int m = 0;
    for (int i = 0; i < n_; ++i) m = std::max(m, degree(i));
    return m;
  }

  bool has_edge(int i, int j) const {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  bool is_connected() const {
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n_;
  }

  Eigen::MatrixXd adjacency_matrix() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (auto [i, j] : edges_) a(i, j) = a(j, i) = 1.0;
    return a;
  }

  // Unsigned combinatorial Laplacian D - W.
  Eigen::MatrixXd laplacian() const {
    Eigen::MatrixXd l = -adjacency_matrix();
    for (int i = 0; i < n_; ++i) l(i, i) = degree(i);
    return l;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void build_index() {
    offsets_.assign(n_ + 1, 0);
    for (auto [i, j] : edges_) {
      ++offsets_[i + 1];
      ++offsets_[j + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [i, j] : edges_) {
      adjacency_[fill[i]++] = j;
      adjacency_[fill[j]++] = i;
    }
    for (int i = 0; i < n_; ++i)
      std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }

  int n_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
};

// ---------------------------------------------------------------------------
// Families

inline Graph complete_graph(int n) {
  detail::require(n >= 2, "complete_graph: n must be >= 2");
  std::vector<Graph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

// 4-neighbour lattice, node index r * cols + c.
inline Graph grid_graph(int rows, int cols) {
  detail::require(rows >= 1 && cols >= 1, "grid_graph: dimensions must be positive");
  detail::require(static_cast<long long>(rows) * cols >= 2, "grid_graph: need at least two nodes");
  std::vector<Graph::Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) edges.emplace_back(v, v + 1);
      if (r + 1 < rows) edges.emplace_back(v, v + cols);
    }
  }
  return Graph(rows * cols, std::move(edges));
}

inline constexpr int kRegularGraphRetries = 1000;

namespace detail {

// One pairing-model attempt in the Steger-Wormald style: repeatedly join two
// random free stubs if the pair is neither a loop nor a repeated edge.
// Returns false when the remaining stubs admit no legal pair.
inline bool try_regular_pairing(int n, int d, CounterRng& rng, std::vector<Graph::Edge>& edges) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);

  std::vector<std::vector<char>> joined(n, std::vector<char>(n, 0));
  edges.clear();

  auto legal = [&](int u, int v) { return u != v && !joined[u][v]; };
  int failures = 0;
  while (!stubs.empty()) {
    const auto m = stubs.size();
    auto a = rng.below(m);
    auto b = rng.below(m - 1);
    if (b >= a) ++b;
    const int u = stubs[a];
    const int v = stubs[b];
    if (!legal(u, v)) {
      if (++failures < 64) continue;
      // Check whether any legal pair survives before giving up on this attempt.
      bool any = false;
      for (std::size_t x = 0; x < m && !any; ++x)
        for (std::size_t y = x + 1; y < m && !any; ++y) any = legal(stubs[x], stubs[y]);
      if (!any) return false;
      failures = 0;
      continue;
    }
    failures = 0;
    joined[u][v] = joined[v][u] = 1;
    edges.emplace_back(u, v);
    if (a < b) std::swap(a, b);
    stubs[a] = stubs.back();
    stubs.pop_back();
    stubs[b] = stubs.back();
    stubs.pop_back();
  }
  return true;
}

}  // namespace detail

// Connected d-regular graph, deterministic in (n, d, seed). Attempt t draws
// from counter_hash(seed, {graph, t}); attempts that get stuck or produce a
// disconnected graph are discarded.
inline Graph random_regular_graph(int n, int d, std::uint64_t seed) {
  detail::require(n >= 2 && d >= 1, "random_regular_graph: need n >= 2 and d >= 1");
  detail::require(d < n, "random_regular_graph: d must be < n");
  detail::require((static_cast<long long>(n) * d) % 2 == 0, "random_regular_graph: n*d must be even");
  std::vector<Graph::Edge> edges;
  for (int attempt = 0; attempt < kRegularGraphRetries; ++attempt) {
    CounterRng rng(counter_hash(seed, {static_cast<std::uint64_t>(Stream::graph),
                                       static_cast<std::uint64_t>(attempt)}));
    if (!detail::try_regular_pairing(n, d, rng, edges)) continue;
    Graph g(n, edges);
    if (g.is_connected()) return g;
  }
  throw ConstructionFailure("random_regular_graph: no connected " + std::to_string(d) +
                            "-regular graph on " + std::to_string(n) + " nodes after " +
                            std::to_string(kRegularGraphRetries) + " attempts");
}

// ---------------------------------------------------------------------------
// Statistics

enum class CheegerMode { exact, spectral };
enum class CheegerKind { exact, lower_bound };

struct GraphStats {
  std::vector<int> degrees;
  int delta_max = 0;
  double cheeger = 0.0;
  CheegerKind cheeger_kind = CheegerKind::exact;
};

inline constexpr int kMaxExactCheegerNodes = 22;

// min over 1 <= |S| <= n/2 of |edges(S, V\S)| / |S|, by Gray-code
// enumeration of all subsets with an incrementally maintained cut size.
inline double cheeger_exact(const Graph& g) {
  const int n = g.num_nodes();
  if (n > kMaxExactCheegerNodes)
    throw SizeLimitError("exact Cheeger constant limited to n <= " +
                         std::to_string(kMaxExactCheegerNodes) + " (got " + std::to_string(n) + ")");
  if (n < 2) return 0.0;

  std::vector<std::uint32_t> nbr_mask(n, 0);
  for (auto [i, j] : g.edges()) {
    nbr_mask[i] |= 1u << j;
    nbr_mask[j] |= 1u << i;
  }
  const int half = n / 2;
  long long best_cut = -1, best_size = 1;
  std::uint32_t set = 0;
  long long cut = 0;
  int size = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int v = std::countr_zero(k);
    const std::uint32_t bit = 1u << v;
    const int inside = std::popcount(nbr_mask[v] & set);
    if (set & bit) {
      set &= ~bit;
      --size;
      cut += 2LL * inside - g.degree(v);
    } else {
      set |= bit;
      ++size;
      cut += g.degree(v) - 2LL * inside;
    }
    if (size >= 1 && size <= half) {
      if (best_cut < 0 || cut * best_size < best_cut * size) {
        best_cut = cut;
        best_size = size;
      }
    }
  }
  return static_cast<double>(best_cut) / static_cast<double>(best_size);
}

// Second-smallest eigenvalue of the unsigned Laplacian (algebraic connectivity).
inline double algebraic_connectivity(const Graph& g) {
  if (g.num_nodes() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.laplacian(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("Laplacian eigendecomposition failed");
  return es.eigenvalues()(1);
}

// Cheeger inequality: phi >= lambda_2 / 2.
inline double cheeger_spectral_bound(const Graph& g) {
  return std::max(0.0, algebraic_connectivity(g) / 2.0);
}

inline GraphStats graph_stats(const Graph& g, CheegerMode mode) {
  GraphStats s;
  s.degrees = g.degrees();
  s.delta_max = g.max_degree();
  if (mode == CheegerMode::exact) {
    s.cheeger = cheeger_exact(g);
    s.cheeger_kind = CheegerKind::exact;
  } else {
    s.cheeger = cheeger_spectral_bound(g);
    s.cheeger_kind = CheegerKind::lower_bound;
  }
  return s;
}

// Best expansion constant c with |boundary(S)| >= c * d * |S| for all
// |S| <= n/2, found by enumeration. Requires a d-regular graph.
inline double expansion_constant(const Graph& g) {
  const int d = g.max_degree();
  for (int i = 0; i < g.num_nodes(); ++i)
    detail::require(g.degree(i) == d, "expansion_constant: graph is not regular");
  detail::require(d > 0, "expansion_constant: empty graph");
  return cheeger_exact(g) / d;
}

// ---------------------------------------------------------------------------
// Edge-list text format: "n m" then one "i j" line per edge (i < j), sorted.

inline std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (auto [i, j] : g.edges()) out << i << ' ' << j << '\n';
  return out.str();
}

inline Graph parse_edge_list(const std::string& body, const std::string& context = "edge list") {
  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line)) throw IoError(context + ": empty input");
  auto head = text::split_ws(line);
  if (head.size() != 2) throw IoError(context + ": header must be 'n m'");
  const int n = text::parse_number<int>(head[0], context);
  const auto m = text::parse_number<std::size_t>(head[1], context);
  std::vector<Graph::Edge> edges;
  edges.reserve(m);
  while (std::getline(in, line)) {
    auto tok = text::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw IoError(context + ": edge line must be 'i j'");
    edges.emplace_back(text::parse_number<int>(tok[0], context), text::parse_number<int>(tok[1], context));
  }
  if (edges.size() != m) throw IoError(context + ": header promises " + std::to_string(m) + " edges, found " +
                                       std::to_string(edges.size()));
  try {
    return Graph(n, std::move(edges));
  } catch (const InvalidArgument& e) {
    throw IoError(context + ": " + e.what());
  }
}

}  // namespace partinf

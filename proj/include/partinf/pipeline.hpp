#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "partinf/bounds.hpp"
#include "partinf/certificate.hpp"
#include "partinf/errors.hpp"
#include "partinf/generator.hpp"
#include "partinf/graph.hpp"
#include "partinf/parallel.hpp"
#include "partinf/rng.hpp"
#include "partinf/sdp.hpp"
#include "partinf/text.hpp"

namespace partinf {

struct TrialResult {
  std::uint64_t trial_seed = 0;
  int n = 0;
  int k_hat_stage1 = 0;  // agreement of the rounded SDP labels with y*, up to sign
  bool sign_correct = false;
  int k_hat_final = 0;   // agreement after the second-stage sign choice
  bool certified = false;
  double lambda2 = 0.0;
  double sdp_objective = 0.0;
  int solver_sweeps = 0;
  bool solver_converged = false;
  std::optional<double> brute_force_gap;  // n <= 22 only
  Labels output;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct TrialOptions {
  bool oracle = true;  // compute brute_force_gap when n <= kMaxBruteForceNodes
};

// Second stage: pick y in {y_hat, -y_hat} maximizing w^T y; ties go to y_hat.
inline Labels choose_sign(const Labels& y_hat, const Labels& w) {
  detail::require(y_hat.size() == w.size(), "choose_sign: length mismatch");
  long long score = 0;
  for (int i = 0; i < w.size(); ++i) score += static_cast<long long>(w[i]) * y_hat[i];
  return score >= 0 ? y_hat : -y_hat;
}

// One pass of the two-stage pipeline on a fresh observation. Deterministic in
// (g, y_star, p, q, seed, cfg): the observation uses `seed` and the solver
// start uses counter_hash(cfg.seed, {solver_init, seed}).
inline TrialResult run_trial(const Graph& g, const Labels& y_star, double p, double q, std::uint64_t seed,
                             const SolverConfig& cfg = {}, const TrialOptions& opts = {}) {
  detail::require(y_star.size() == g.num_nodes(), "run_trial: label length mismatch");
  const Observation obs = observe(g, y_star, p, q, seed);

  SolverConfig solver = cfg;
  solver.seed = counter_hash(cfg.seed, {static_cast<std::uint64_t>(Stream::solver_init), seed});
  const SdpSolution sol = solve_sdp(obs.a, solver);
  const Labels y_hat = round_solution(sol);
  const Labels chosen = choose_sign(y_hat, obs.w);
  const CertificateReport cert = kkt_check(obs.a, chosen);

  TrialResult r;
  r.trial_seed = seed;
  r.n = g.num_nodes();
  r.k_hat_stage1 = agreement_up_to_sign(y_hat, y_star);
  r.k_hat_final = agreement(chosen, y_star);
  r.sign_correct = r.k_hat_final == r.k_hat_stage1;
  r.certified = cert.certified;
  r.lambda2 = cert.lambda2;
  r.sdp_objective = sol.objective;
  r.solver_sweeps = sol.iterations;
  r.solver_converged = sol.converged;
  if (opts.oracle && r.n <= kMaxBruteForceNodes)
    r.brute_force_gap = brute_force_max(obs.a).value - objective(obs.a, chosen);
  r.output = chosen;
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class GraphFamily { complete, grid, regular };

inline std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::complete: return "complete";
    case GraphFamily::grid: return "grid";
    case GraphFamily::regular: return "regular";
  }
  return "?";
}

inline GraphFamily parse_family(const std::string& s) {
  if (s == "complete") return GraphFamily::complete;
  if (s == "grid") return GraphFamily::grid;
  if (s == "regular") return GraphFamily::regular;
  throw InvalidArgument("unknown graph family '" + s + "'");
}

inline LabelMode parse_label_mode(const std::string& s) {
  if (s == "all_plus") return LabelMode::all_plus;
  if (s == "balanced") return LabelMode::balanced;
  if (s == "random") return LabelMode::random;
  throw InvalidArgument("unknown label mode '" + s + "'");
}

// Rows x cols with rows the largest divisor of n not above sqrt(n).
inline std::pair<int, int> grid_shape(int n) {
  int rows = 1;
  for (int r = 1; static_cast<long long>(r) * r <= n; ++r)
    if (n % r == 0) rows = r;
  return {rows, n / rows};
}

inline Graph make_family_graph(GraphFamily family, int n, int degree, std::uint64_t seed) {
  switch (family) {
    case GraphFamily::complete:
      return complete_graph(n);
    case GraphFamily::grid: {
      auto [rows, cols] = grid_shape(n);
      return grid_graph(rows, cols);
    }
    case GraphFamily::regular:
      return random_regular_graph(
          n, degree,
          counter_hash(seed, {static_cast<std::uint64_t>(Stream::graph), static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(degree)}));
  }
  throw InvalidArgument("unknown graph family");
}

struct SweepSpec {
  std::vector<GraphFamily> families{GraphFamily::complete, GraphFamily::grid, GraphFamily::regular};
  std::vector<int> sizes{100};
  int degree = 6;
  std::vector<double> noise_levels{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
  double node_noise = 0.1;
  int trials = 200;
  std::uint64_t seed = 1;
  std::vector<double> k_fractions{0.8, 0.9, 1.0};
  LabelMode label_mode = LabelMode::random;
  SolverConfig solver;
  bool oracle = false;
  unsigned threads = 0;

  void validate() const {
    detail::require(!families.empty() && !sizes.empty() && !noise_levels.empty() && !k_fractions.empty(),
                    "sweep: families, sizes, p grid and k fractions must be nonempty");
    detail::require(trials >= 1, "sweep: trials must be >= 1");
    for (int n : sizes) detail::require(n >= 2, "sweep: sizes must be >= 2");
    for (double p : noise_levels) detail::require(p >= 0.0 && p < 0.5, "sweep: p must lie in [0, 0.5)");
    detail::require(node_noise >= 0.0 && node_noise < 0.5, "sweep: q must lie in [0, 0.5)");
    for (double f : k_fractions) detail::require(f >= 0.5 && f <= 1.0, "sweep: k fractions must lie in [0.5, 1]");
  }
};

// k = ceil(fraction * n), with a small guard so 0.9 * 100 stays 90.
inline int k_threshold(double fraction, int n) {
  return std::clamp(static_cast<int>(std::ceil(fraction * n - 1e-9)), (n + 1) / 2, n);
}

// Flat key-value sweep description. '#' starts a comment; list values are
// comma separated.
inline SweepSpec parse_sweep_spec(const std::string& body, const std::string& context = "sweep spec") {
  SweepSpec spec;
  std::istringstream in(body);
  std::string line;
  int lineno = 0;
  auto reals = [&](const std::string& v) {
    std::vector<double> out;
    for (auto& tok : text::split(v, ',')) out.push_back(text::parse_number<double>(text::trim(tok), context));
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(context + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = text::trim(line.substr(0, eq));
    const std::string value = text::trim(line.substr(eq + 1));
    try {
      if (key == "families" || key == "family") {
        spec.families.clear();
        for (auto& tok : text::split(value, ',')) spec.families.push_back(parse_family(text::trim(tok)));
      } else if (key == "n") {
        spec.sizes.clear();
        for (auto& tok : text::split(value, ',')) spec.sizes.push_back(text::parse_number<int>(text::trim(tok), context));
      } else if (key == "d") {
        spec.degree = text::parse_number<int>(value, context);
      } else if (key == "p") {
        spec.noise_levels = reals(value);
      } else if (key == "q") {
        spec.node_noise = text::parse_number<double>(value, context);
      } else if (key == "trials") {
        spec.trials = text::parse_number<int>(value, context);
      } else if (key == "seed") {
        spec.seed = text::parse_number<std::uint64_t>(value, context);
      } else if (key == "k_fractions") {
        spec.k_fractions = reals(value);
      } else if (key == "labels") {
        spec.label_mode = parse_label_mode(value);
      } else if (key == "rank") {
        spec.solver.rank = text::parse_number<int>(value, context);
      } else if (key == "tol") {
        spec.solver.tolerance = text::parse_number<double>(value, context);
      } else if (key == "max_sweeps") {
        spec.solver.max_sweeps = text::parse_number<int>(value, context);
      } else if (key == "solver_seed") {
        spec.solver.seed = text::parse_number<std::uint64_t>(value, context);
      } else if (key == "oracle") {
        spec.oracle = value == "1" || value == "true";
      } else if (key == "threads") {
        spec.threads = text::parse_number<unsigned>(value, context);
      } else {
        throw IoError(context + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      throw IoError(context + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  spec.validate();
  return spec;
}

struct SimulationRow {
  std::string family;
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  int k = 0;
  int trials = 0;
  int failures = 0;
  double empirical_prob = 0.0;  // P(k_hat_final >= k); failed trials count as misses
  double mean_k_hat = 0.0;      // mean k_hat_final over completed trials
  double certified_rate = 0.0;
  double theorem_bound = 0.0;   // recovery_prob_bound, clamped to [0, 1]
};

struct SimulationTable {
  std::vector<SimulationRow> rows;
};

namespace detail {
struct TrialSummary {
  bool ok = false;
  int k_hat_final = 0;
  bool certified = false;
};
}  // namespace detail

// Cells are (family, n, p) in sweep order. Trial t of cell c uses seed
// counter_hash(spec.seed, {trial, c, t}); every k threshold of a cell is
// scored on the same trials.
inline SimulationTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Cell {
    GraphFamily family;
    int graph_index;
    double p;
  };
  std::vector<Graph> graphs;
  std::vector<GraphStats> stats;
  std::vector<Cell> cells;
  for (auto family : spec.families) {
    for (int n : spec.sizes) {
      graphs.push_back(make_family_graph(family, n, spec.degree, spec.seed));
      const auto mode = n <= kMaxExactCheegerNodes ? CheegerMode::exact : CheegerMode::spectral;
      stats.push_back(graph_stats(graphs.back(), mode));
      for (double p : spec.noise_levels) cells.push_back({family, static_cast<int>(graphs.size()) - 1, p});
    }
  }

  const std::size_t trials = static_cast<std::size_t>(spec.trials);
  std::vector<detail::TrialSummary> results(cells.size() * trials);
  parallel_for(
      results.size(),
      [&](std::size_t idx) {
        const std::size_t c = idx / trials, t = idx % trials;
        const Cell& cell = cells[c];
        const Graph& g = graphs[cell.graph_index];
        const std::uint64_t seed =
            counter_hash(spec.seed, {static_cast<std::uint64_t>(Stream::trial), c, t});
        try {
          const Labels y_star = sample_labels(g.num_nodes(), spec.label_mode, seed);
          const TrialResult r =
              run_trial(g, y_star, cell.p, spec.node_noise, seed, spec.solver, TrialOptions{spec.oracle});
          results[idx] = {true, r.k_hat_final, r.certified};
        } catch (const std::exception&) {
          results[idx] = {};
        }
      },
      spec.threads);

  SimulationTable table;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    const Graph& g = graphs[cell.graph_index];
    const GraphStats& st = stats[cell.graph_index];
    const int n = g.num_nodes();
    int failures = 0, certified = 0;
    double k_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto& r = results[c * trials + t];
      if (!r.ok) {
        ++failures;
        continue;
      }
      k_sum += r.k_hat_final;
      certified += r.certified;
    }
    const int completed = spec.trials - failures;
    for (double fraction : spec.k_fractions) {
      SimulationRow row;
      row.family = to_string(cell.family);
      row.n = n;
      row.p = cell.p;
      row.q = spec.node_noise;
      row.k = k_threshold(fraction, n);
      row.trials = spec.trials;
      row.failures = failures;
      int hits = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        const auto& r = results[c * trials + t];
        hits += r.ok && r.k_hat_final >= row.k;
      }
      row.empirical_prob = static_cast<double>(hits) / spec.trials;
      row.mean_k_hat = completed > 0 ? k_sum / completed : std::nan("");
      row.certified_rate = static_cast<double>(certified) / spec.trials;
      row.theorem_bound = recovery_prob_bound(
          RateInputs{n, row.k, cell.p, st.cheeger, static_cast<double>(std::max(st.delta_max, 1))});
      table.rows.push_back(row);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kCsvHeader =
    "family,n,p,q,k,trials,failures,empirical_prob,mean_k_hat,certified_rate,theorem_bound";

inline std::string to_csv(const SimulationTable& table) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : table.rows) {
    out << r.family << ',' << r.n << ',' << text::format_g6(r.p) << ',' << text::format_g6(r.q) << ',' << r.k << ','
        << r.trials << ',' << r.failures << ',' << text::format_g6(r.empirical_prob) << ','
        << text::format_g6(r.mean_k_hat) << ',' << text::format_g6(r.certified_rate) << ','
        << text::format_g6(r.theorem_bound) << '\n';
  }
  return out.str();
}

inline void emit_csv(const SimulationTable& table, const std::string& path) { text::write_file(path, to_csv(table)); }

inline SimulationTable parse_csv(const std::string& body, const std::string& context = "csv") {
  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != kCsvHeader) throw IoError(context + ": missing or unexpected header");
  SimulationTable table;
  auto real = [&](const std::string& s) {
    if (s == "nan" || s == "-nan") return std::nan("");
    return text::parse_number<double>(s, context);
  };
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    auto f = text::split(text::trim(line), ',');
    if (f.size() != 11) throw IoError(context + ": expected 11 fields, got " + std::to_string(f.size()));
    SimulationRow r;
    r.family = f[0];
    r.n = text::parse_number<int>(f[1], context);
    r.p = real(f[2]);
    r.q = real(f[3]);
    r.k = text::parse_number<int>(f[4], context);
    r.trials = text::parse_number<int>(f[5], context);
    r.failures = text::parse_number<int>(f[6], context);
    r.empirical_prob = real(f[7]);
    r.mean_k_hat = real(f[8]);
    r.certified_rate = real(f[9]);
    r.theorem_bound = real(f[10]);
    table.rows.push_back(r);
  }
  return table;
}

inline SimulationTable read_csv(const std::string& path) { return parse_csv(text::read_file(path), path); }

// ---------------------------------------------------------------------------
// SVG plot: empirical recovery probability against p, one solid curve per
// (family, n, k) and the matching theorem bound dashed.

namespace detail {
inline std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}
}  // namespace detail

inline std::string to_svg(const SimulationTable& table) {
  detail::require(!table.rows.empty(), "emit_plot: table is empty");
  constexpr double width = 720, height = 440, left = 64, right = 200, top = 36, bottom = 56;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double pmin = table.rows.front().p, pmax = pmin;
  for (const auto& r : table.rows) {
    pmin = std::min(pmin, r.p);
    pmax = std::max(pmax, r.p);
  }
  if (pmax - pmin < 1e-12) {
    pmin -= 0.05;
    pmax += 0.05;
  }
  auto sx = [&](double p) { return left + (p - pmin) / (pmax - pmin) * plot_w; };
  auto sy = [&](double v) { return top + (1.0 - std::clamp(v, 0.0, 1.0)) * plot_h; };

  // Series in first-appearance order.
  std::vector<std::string> keys;
  std::map<std::string, std::vector<const SimulationRow*>> series;
  for (const auto& r : table.rows) {
    const std::string key = r.family + " n=" + std::to_string(r.n) + " k=" + std::to_string(r.k);
    if (!series.count(key)) keys.push_back(key);
    series[key].push_back(&r);
  }
  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << detail::fixed2(left + plot_w / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << "Partial recovery probability vs edge noise</text>\n";
  // Axes and ticks.
  out << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<path d=\"M" << detail::fixed2(left) << ',' << detail::fixed2(top) << " L" << detail::fixed2(left) << ','
      << detail::fixed2(top + plot_h) << " L" << detail::fixed2(left + plot_w) << ',' << detail::fixed2(top + plot_h)
      << "\"/>\n</g>\n<g id=\"ticks\" text-anchor=\"middle\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = i / 5.0;
    out << "<text x=\"" << detail::fixed2(left - 8) << "\" y=\"" << detail::fixed2(sy(v) + 4)
        << "\" text-anchor=\"end\">" << text::format_g6(v) << "</text>\n";
    const double p = pmin + (pmax - pmin) * i / 5.0;
    out << "<text x=\"" << detail::fixed2(sx(p)) << "\" y=\"" << detail::fixed2(top + plot_h + 18) << "\">"
        << detail::fixed2(p) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << detail::fixed2(left + plot_w / 2) << "\" y=\"" << detail::fixed2(height - 14)
      << "\" text-anchor=\"middle\">edge noise p</text>\n";
  out << "<text transform=\"translate(18," << detail::fixed2(top + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">P(k_hat &gt;= k)</text>\n";

  for (std::size_t s = 0; s < keys.size(); ++s) {
    const auto& pts = series[keys[s]];
    const char* colour = palette[s % std::size(palette)];
    std::ostringstream path, bound;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      path << (i == 0 ? "M" : " L") << detail::fixed2(sx(pts[i]->p)) << ',' << detail::fixed2(sy(pts[i]->empirical_prob));
    }
    bool finite = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      finite = finite && std::isfinite(pts[i]->theorem_bound);
      bound << (i == 0 ? "M" : " L") << detail::fixed2(sx(pts[i]->p)) << ',' << detail::fixed2(sy(pts[i]->theorem_bound));
    }
    out << "<g class=\"series\" data-key=\"" << keys[s] << "\">\n";
    out << "<path class=\"empirical\" d=\"" << path.str() << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\" fill=\"none\"/>\n";
    for (const auto* r : pts)
      out << "<circle cx=\"" << detail::fixed2(sx(r->p)) << "\" cy=\"" << detail::fixed2(sy(r->empirical_prob))
          << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    if (finite)
      out << "<path class=\"bound\" d=\"" << bound.str() << "\" stroke=\"" << colour
          << "\" stroke-width=\"1\" stroke-dasharray=\"5,4\" fill=\"none\"/>\n";
    out << "</g>\n";
    const double ly = top + 10 + 18.0 * s;
    out << "<line x1=\"" << detail::fixed2(left + plot_w + 12) << "\" y1=\"" << detail::fixed2(ly) << "\" x2=\""
        << detail::fixed2(left + plot_w + 36) << "\" y2=\"" << detail::fixed2(ly) << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n<text x=\"" << detail::fixed2(left + plot_w + 42) << "\" y=\""
        << detail::fixed2(ly + 4) << "\">" << keys[s] << "</text>\n";
  }
  const double ly = top + 10 + 18.0 * keys.size();
  out << "<line x1=\"" << detail::fixed2(left + plot_w + 12) << "\" y1=\"" << detail::fixed2(ly) << "\" x2=\""
      << detail::fixed2(left + plot_w + 36) << "\" y2=\"" << detail::fixed2(ly)
      << "\" stroke=\"black\" stroke-dasharray=\"5,4\"/>\n<text x=\"" << detail::fixed2(left + plot_w + 42)
      << "\" y=\"" << detail::fixed2(ly + 4) << "\">theorem bound</text>\n";
  out << "</svg>\n";
  return out.str();
}

inline void emit_plot(const SimulationTable& table, const std::string& path) { text::write_file(path, to_svg(table)); }

}  // namespace partinf

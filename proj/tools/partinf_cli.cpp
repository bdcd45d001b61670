// Command-line front end: generate observations, solve, certify, evaluate
// bounds, run sweeps and the brute-force oracle.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "partinf.hpp"

namespace {

using namespace partinf;

std::string join_labels(const Labels& y) {
  std::ostringstream out;
  for (int i = 0; i < y.size(); ++i) out << (i ? " " : "") << y[i];
  return out.str();
}

void print_kv(std::ostream& out, const std::string& key, double value) {
  out << key << '=' << text::format_real(value) << '\n';
}

struct GenerateArgs {
  std::string family = "complete";
  int n = 0;
  int d = 6;
  double p = 0.0, q = 0.0;
  std::uint64_t seed = 0;
  std::string labels = "random";
  std::string out, truth, graph_out;
};

int run_generate(const GenerateArgs& a) {
  const Graph g = make_family_graph(parse_family(a.family), a.n, a.d, a.seed);
  const Labels y = sample_labels(a.n, parse_label_mode(a.labels), a.seed);
  const Observation obs = observe(g, y, a.p, a.q, a.seed);
  text::write_file(a.out, to_text(obs));
  if (!a.truth.empty()) text::write_file(a.truth, to_text(y));
  if (!a.graph_out.empty()) text::write_file(a.graph_out, to_edge_list(g));
  return 0;
}

struct SolveArgs {
  std::string in, out;
  std::optional<int> rank;
  std::optional<double> tol;
  int max_sweeps = 500;
  std::uint64_t seed = 0;
};

int run_solve(const SolveArgs& a) {
  const Observation obs = parse_observation(text::read_file(a.in), a.in);
  SolverConfig cfg;
  cfg.rank = a.rank;
  cfg.tolerance = a.tol;
  cfg.max_sweeps = a.max_sweeps;
  cfg.seed = a.seed;
  const SdpSolution sol = solve_sdp(obs.a, cfg);
  const Labels stage1 = round_solution(sol);
  const Labels chosen = choose_sign(stage1, obs.w);
  print_kv(std::cout, "objective", sol.objective);
  print_kv(std::cout, "rounded_objective", objective(obs.a, chosen));
  std::cout << "sweeps=" << sol.iterations << "\nconverged=" << sol.converged << '\n';
  print_kv(std::cout, "residual", sol.residual);
  std::cout << "stage1=" << join_labels(stage1) << "\nlabels=" << join_labels(chosen) << '\n';
  if (!a.out.empty()) text::write_file(a.out, to_text(chosen));
  return 0;
}

int run_certify(const std::string& in, const std::string& labels_path, std::optional<double> tol) {
  const Observation obs = parse_observation(text::read_file(in), in);
  const Labels y = parse_labels(text::read_file(labels_path), labels_path);
  if (y.size() != obs.size())
    throw InvalidArgument("labels file has " + std::to_string(y.size()) + " entries, observation has " +
                          std::to_string(obs.size()) + " nodes");
  const CertificateReport r = tol ? kkt_check(obs.a, y, *tol) : kkt_check(obs.a, y);
  std::istringstream fields(r.to_key_value());
  for (std::string kv; fields >> kv;) std::cout << kv << '\n';
  return 0;
}

int run_oracle(const std::string& in) {
  const Observation obs = parse_observation(text::read_file(in), in);
  const BruteForceResult r = brute_force_max(obs.a);
  print_kv(std::cout, "value", r.value);
  std::cout << "num_optimal=" << r.num_optimal << "\nlabels=" << join_labels(r.labels) << '\n';
  return 0;
}

struct SimulateArgs {
  std::string spec, csv, plot;
  std::optional<unsigned> threads;
};

int run_simulate(const SimulateArgs& a) {
  SweepSpec spec = parse_sweep_spec(text::read_file(a.spec), a.spec);
  if (a.threads) spec.threads = *a.threads;
  const SimulationTable table = run_sweep(spec);
  emit_csv(table, a.csv);
  if (!a.plot.empty()) emit_plot(table, a.plot);
  return 0;
}

// Prints either "key=value" lines or a CSV header plus one row.
class Emitter {
 public:
  explicit Emitter(bool csv) : csv_(csv) {}
  Emitter& add(const std::string& key, double value) {
    keys_.push_back(key);
    values_.push_back(text::format_real(value));
    return *this;
  }
  Emitter& add(const std::string& key, std::uint64_t value) {
    keys_.push_back(key);
    values_.push_back(std::to_string(value));
    return *this;
  }
  void print() const {
    if (csv_) {
      for (std::size_t i = 0; i < keys_.size(); ++i) std::cout << (i ? "," : "") << keys_[i];
      std::cout << '\n';
      for (std::size_t i = 0; i < values_.size(); ++i) std::cout << (i ? "," : "") << values_[i];
      std::cout << '\n';
    } else {
      for (std::size_t i = 0; i < keys_.size(); ++i) std::cout << keys_[i] << '=' << values_[i] << '\n';
    }
  }

 private:
  bool csv_;
  std::vector<std::string> keys_, values_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage SDP partial recovery: generation, solving, certificates and bounds"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a graph, labels and noisy observations");
  generate->add_option("--family", gen.family, "complete | grid | regular")
      ->check(CLI::IsMember({"complete", "grid", "regular"}));
  generate->add_option("--n", gen.n, "Node count")->required();
  generate->add_option("--d", gen.d, "Degree for the regular family");
  generate->add_option("--p", gen.p, "Edge noise")->required();
  generate->add_option("--q", gen.q, "Node noise")->required();
  generate->add_option("--seed", gen.seed, "Random seed")->required();
  generate->add_option("--labels", gen.labels, "Ground truth: all_plus | balanced | random")
      ->check(CLI::IsMember({"all_plus", "balanced", "random"}));
  generate->add_option("--out", gen.out, "Observation file")->required();
  generate->add_option("--truth", gen.truth, "Also write the ground-truth labels here");
  generate->add_option("--graph", gen.graph_out, "Also write the graph edge list here");

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Solve the SDP relaxation and round");
  solve->add_option("--in", sol.in, "Observation file")->required();
  solve->add_option("--rank", sol.rank, "Factor rank");
  solve->add_option("--tol", sol.tol, "Stop when a sweep gains less than this");
  solve->add_option("--max-sweeps", sol.max_sweeps, "Sweep limit");
  solve->add_option("--seed", sol.seed, "Initialization seed");
  solve->add_option("--out", sol.out, "Write the sign-corrected labels here");

  std::string cert_in, cert_labels;
  std::optional<double> cert_tol;
  auto* certify = app.add_subcommand("certify", "Check the dual certificate for a labeling");
  certify->add_option("--in", cert_in, "Observation file")->required();
  certify->add_option("--labels", cert_labels, "Labels file")->required();
  certify->add_option("--tol", cert_tol, "Certificate tolerance (default 1e-7 * max degree)");

  std::string oracle_in;
  auto* oracle = app.add_subcommand("oracle", "Brute-force maximizer (n <= 22)");
  oracle->add_option("--in", oracle_in, "Observation file")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo sweep");
  simulate->add_option("--spec", sim.spec, "Sweep description (key = value)")->required();
  simulate->add_option("--csv", sim.csv, "CSV output")->required();
  simulate->add_option("--plot", sim.plot, "SVG output");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");

  auto* bound = app.add_subcommand("bound", "Evaluate closed-form bounds");
  bound->require_subcommand(1);
  bool csv = false;
  bound->add_flag("--csv", csv, "Emit a CSV header and row instead of key=value lines");

  RateInputs rate;
  auto* rate_cmd = bound->add_subcommand("rate", "First-stage error term and recovery bound");
  rate_cmd->add_option("--n", rate.n)->required();
  rate_cmd->add_option("--k", rate.k)->required();
  rate_cmd->add_option("--p", rate.p)->required();
  rate_cmd->add_option("--phi", rate.phi)->required();
  rate_cmd->add_option("--delta", rate.delta_max)->required();

  ChernoffInputs chern;
  std::uint64_t chern_trials = 0, chern_seed = 0;
  auto* chern_cmd = bound->add_subcommand("chernoff", "Mixed Chernoff bound, optionally with a Monte-Carlo check");
  chern_cmd->add_option("--n", chern.n)->required();
  chern_cmd->add_option("--m", chern.m)->required();
  chern_cmd->add_option("--r", chern.r)->required();
  chern_cmd->add_option("--t", chern.t)->required();
  chern_cmd->add_option("--trials", chern_trials, "Monte-Carlo trials (>= 1000; 0 skips)");
  chern_cmd->add_option("--seed", chern_seed);

  int s2_n = 0;
  double s2_q = 0.0;
  auto* s2_cmd = bound->add_subcommand("stage2", "Second-stage sign error bound");
  s2_cmd->add_option("--n", s2_n)->required();
  s2_cmd->add_option("--q", s2_q)->required();

  int ex_n = 0, ex_d = 0, ex_k = 0;
  double ex_c = 0.0, ex_p = 0.1;
  auto* ex_cmd = bound->add_subcommand("expander", "Finite-n expander condition values");
  ex_cmd->add_option("--n", ex_n)->required();
  ex_cmd->add_option("--d", ex_d)->required();
  ex_cmd->add_option("--c", ex_c)->required();
  ex_cmd->add_option("--k", ex_k)->required();
  ex_cmd->add_option("--p", ex_p, "Edge noise for the epsilon terms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return run_generate(gen);
    if (solve->parsed()) return run_solve(sol);
    if (certify->parsed()) return run_certify(cert_in, cert_labels, cert_tol);
    if (oracle->parsed()) return run_oracle(oracle_in);
    if (simulate->parsed()) return run_simulate(sim);
    Emitter out(csv);
    if (rate_cmd->parsed()) {
      const RateTerms t = epsilon_terms(rate);
      out.add("spectral_term", t.spectral).add("in_set_term", t.in_set).add("out_set_term", t.out_set);
      out.add("epsilon", t.total()).add("recovery_sum", recovery_sum(rate.n, rate.k, t.total()));
      out.add("recovery_prob_bound", recovery_prob_bound(rate));
    } else if (chern_cmd->parsed()) {
      out.add("bound", mixed_chernoff_bound(chern));
      if (chern_trials > 0) {
        const auto v = validate_chernoff_monte_carlo(chern, chern_trials, chern_seed);
        out.add("empirical_tail", v.empirical_tail).add("hits", v.hits).add("trials", v.trials);
      }
    } else if (s2_cmd->parsed()) {
      out.add("bound", stage2_error_bound(s2_n, s2_q)).add("hoeffding", stage2_hoeffding_bound(s2_n, s2_q));
    } else if (ex_cmd->parsed()) {
      const ConditionReport r = expander_conditions(ex_n, ex_d, ex_c, ex_k, ex_p);
      out.add("degree_ratio", r.degree_ratio).add("in_set_ratio", r.in_set_ratio).add("out_set_ratio", r.out_set_ratio);
      out.add("spectral_term", r.terms.spectral).add("in_set_term", r.terms.in_set).add("out_set_term", r.terms.out_set);
    }
    out.print();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

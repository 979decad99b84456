#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "broadbid/baselines.hpp"
#include "broadbid/errors.hpp"
#include "broadbid/generators.hpp"
#include "broadbid/instance_io.hpp"
#include "broadbid/keyword_solver.hpp"
#include "broadbid/query_solver.hpp"
#include "broadbid/random.hpp"
#include "broadbid/version.hpp"

namespace broadbid::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

struct Output {
  std::string path;
  std::string format = "json";
};

void emit(const Output& output, const std::string& text, std::ostream& out) {
  if (output.path.empty() || output.path == "-") {
    out << text;
  } else {
    write_text_file(output.path, text);
  }
}

// Numbers in CSV cells are rendered exactly as in the JSON report.
std::string cell(double x) { return ordered_json(x).dump(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

ordered_json instance_summary(const Instance& inst, const std::string& path) {
  const DependencyGraph dg = derive_dependencies(inst);
  std::size_t strict = 0;
  for (const auto& [p, q] : dg.pairs) strict += p != q ? 1 : 0;
  ordered_json j;
  j["path"] = path;
  j["queries"] = inst.size();
  j["keywords"] = inst.biddable().size();
  j["dependencies"] = strict;
  return j;
}

ordered_json money_or_null(const std::optional<Money>& m) {
  return m ? ordered_json(m->to_string()) : ordered_json(nullptr);
}

struct QueryRow {
  std::string id, value, cost, clicks;
  double w = 0.0;
  ordered_json exact, broad;
  bool won = false;
};

std::vector<QueryRow> query_rows(const Instance& inst, const OptimalBidResult& result) {
  std::vector<char> won(inst.size(), 0);
  for (QueryIndex q : result.winning_set.members) won[static_cast<std::size_t>(q)] = 1;
  std::vector<QueryRow> rows;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const Query& query = inst.query(q);
    const Bid& bid = result.bid[q];
    rows.push_back({query.id, query.value.to_string(), query.cost.to_string(), query.clicks.to_string(),
                    micro2_to_double(inst.weight(q)), money_or_null(bid.exact), money_or_null(bid.broad),
                    won[static_cast<std::size_t>(q)] != 0});
  }
  return rows;
}

std::string bid_report(const Instance& inst, const std::string& path, const OptimalBidResult& result,
                       const std::string& method, double wall_ms, const std::string& format) {
  const auto rows = query_rows(inst, result);
  if (format == "csv") {
    std::ostringstream csv;
    csv << "id,value,cost,clicks,w,bid_exact,bid_broad,won\n";
    for (const QueryRow& r : rows) {
      csv << csv_escape(r.id) << ',' << r.value << ',' << r.cost << ',' << r.clicks << ',' << cell(r.w)
          << ',' << (r.exact.is_null() ? "" : r.exact.get<std::string>()) << ','
          << (r.broad.is_null() ? "" : r.broad.get<std::string>()) << ',' << (r.won ? 1 : 0) << '\n';
    }
    return csv.str();
  }
  ordered_json j;
  j["instance"] = instance_summary(inst, path);
  j["method"] = method;
  j["utility"] = micro2_to_double(result.winning_set.utility());
  j["value_part"] = micro2_to_double(result.winning_set.parts.value_part);
  j["cost_part"] = micro2_to_double(result.winning_set.parts.cost_part);
  j["spend"] = micro2_to_double(result.winning_set.parts.cost_part);
  j["utility_exact"] = format_micro2(result.winning_set.utility());
  j["wall_time_ms"] = wall_ms;
  j["queries"] = ordered_json::array();
  for (const QueryRow& r : rows) {
    j["queries"].push_back({{"id", r.id}, {"value", r.value}, {"cost", r.cost}, {"clicks", r.clicks},
                            {"w", r.w}, {"bid_exact", r.exact}, {"bid_broad", r.broad}, {"won", r.won}});
  }
  return j.dump(2) + "\n";
}

Money resolve_budget(const Instance& inst, const std::string& flag) {
  if (!flag.empty()) {
    const Money m = Money::parse(flag);
    if (m.micros() < 0) throw ValidationError("budget must be non-negative");
    return m;
  }
  if (!inst.budget()) throw ValidationError("no --budget given and the instance has none");
  return *inst.budget();
}

std::string budgeted_report(const Instance& inst, const std::string& path, const BudgetedSolution& sol,
                            Money budget, double wall_ms, const std::string& format) {
  auto cluster = [&](QueryIndex q) -> std::string {
    const double x = sol.x[static_cast<std::size_t>(q)];
    if (x <= kClusterTolerance) return "0";
    if (x >= 1.0 - kClusterTolerance) return "1";
    return "X";
  };
  if (format == "csv") {
    std::ostringstream csv;
    csv << "id,value,cost,clicks,w,x,cluster\n";
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
      const Query& query = inst.query(q);
      csv << csv_escape(query.id) << ',' << query.value.to_string() << ',' << query.cost.to_string() << ','
          << query.clicks.to_string() << ',' << cell(micro2_to_double(inst.weight(q))) << ','
          << cell(sol.x[static_cast<std::size_t>(q)]) << ',' << cluster(q) << '\n';
    }
    return csv.str();
  }
  ordered_json j;
  j["instance"] = instance_summary(inst, path);
  j["method"] = "budgeted";
  j["budget"] = budget.to_string();
  j["lp_value"] = sol.lp_value;
  j["spend"] = sol.spend;
  j["shared_fraction"] = sol.shared_fraction ? ordered_json(*sol.shared_fraction) : ordered_json(nullptr);
  j["wall_time_ms"] = wall_ms;
  j["queries"] = ordered_json::array();
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    j["queries"].push_back({{"id", inst.query(q).id},
                            {"x", sol.x[static_cast<std::size_t>(q)]},
                            {"cluster", cluster(q)}});
  }
  return j.dump(2) + "\n";
}

std::string lagrangian_report(const Instance& inst, const std::string& path, const LagrangianEstimate& est,
                              Money budget, double wall_ms, const std::string& format) {
  if (format == "csv") {
    return "method,budget,value,multiplier,cuts\nlagrangian," + budget.to_string() + ',' + cell(est.value) +
           ',' + cell(est.multiplier) + ',' + std::to_string(est.cuts) + '\n';
  }
  ordered_json j;
  j["instance"] = instance_summary(inst, path);
  j["method"] = "lagrangian";
  j["budget"] = budget.to_string();
  j["value"] = est.value;
  j["multiplier"] = est.multiplier;
  j["cuts"] = est.cuts;
  j["wall_time_ms"] = wall_ms;
  return j.dump(2) + "\n";
}

std::string rounding_report(const Instance& inst, const std::string& path, const KeywordFractional& frac,
                            const RoundingSummary& summary, double epsilon, std::uint64_t seed,
                            double wall_ms, const std::string& format) {
  if (format == "csv") {
    std::ostringstream csv;
    csv << "trial,seed,utility,spend,value\n";
    for (const TrialRecord& t : summary.trials) {
      csv << t.trial << ',' << t.seed << ',' << cell(t.utility) << ',' << cell(t.spend) << ','
          << cell(t.value) << '\n';
    }
    return csv.str();
  }
  ordered_json j;
  j["instance"] = instance_summary(inst, path);
  j["method"] = "keyword-lp-round";
  j["epsilon"] = epsilon;
  j["seed"] = seed;
  j["trials"] = summary.trial_count;
  j["lp_objective"] = frac.objective;
  j["V_frac"] = frac.V_frac;
  j["C_frac"] = frac.C_frac;
  j["mean"] = summary.mean;
  j["std"] = summary.std;
  j["bound"] = summary.bound;
  j["bound_satisfied"] = summary.bound_satisfied;
  j["wall_time_ms"] = wall_ms;
  return j.dump(2) + "\n";
}

struct SolveArgs {
  std::string instance;
  std::string method;
  std::string budget;
  double epsilon = 0.0;
  int trials = 10000;
  std::uint64_t seed = 1;
  std::string rate = "profit";
  std::int64_t max_nodes = 1'000'000;
  std::string exact_method = "auto";
  Output output;
};

KeywordExactMethod parse_exact_method(const std::string& name) {
  if (name == "bb") return KeywordExactMethod::kBranchAndBound;
  if (name == "brute") return KeywordExactMethod::kEnumerate;
  return KeywordExactMethod::kAuto;  // "auto" and "closed-form"
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const auto start = std::chrono::steady_clock::now();
  const std::string& m = a.method;
  std::string text;
  if (m == "budgeted") {
    const Money budget = resolve_budget(inst, a.budget);
    const BudgetedSolution sol = solve_budgeted_lp(inst, budget);
    text = budgeted_report(inst, a.instance, sol, budget, elapsed_ms(start), a.output.format);
  } else if (m == "lagrangian") {
    const Money budget = resolve_budget(inst, a.budget);
    const LagrangianEstimate est = solve_budgeted_lagrangian(inst, budget);
    text = lagrangian_report(inst, a.instance, est, budget, elapsed_ms(start), a.output.format);
  } else if (m == "keyword-lp-round") {
    const KeywordFractional frac = solve_relaxation(inst);
    const RoundingSummary summary =
        run_rounding_trials(inst, frac, a.epsilon, a.trials, a.seed, a.output.format == "csv");
    text = rounding_report(inst, a.instance, frac, summary, a.epsilon, a.seed, elapsed_ms(start), a.output.format);
  } else {
    OptimalBidResult result;
    if (m == "mincut") {
      result = solve_query_mincut(inst);
    } else if (m == "lp") {
      result = solve_query_lp(inst);
    } else if (m == "greedy-margin") {
      result = max_margin_greedy(inst);
    } else if (m == "greedy-rate") {
      result = max_rate_greedy(inst, a.rate == "value" ? RateRule::kValueOverCost : RateRule::kProfitOverCost);
    } else if (m == "oracle") {
      result = brute_force_query(inst);
    } else {
      KeywordExactOptions options;
      options.max_nodes = a.max_nodes;
      options.method = parse_exact_method(a.exact_method);
      result = solve_keyword_exact(inst, options);
    }
    text = bid_report(inst, a.instance, result, m, elapsed_ms(start), a.output.format);
  }
  emit(a.output, text, out);
  return kOk;
}

struct GenerateArgs {
  std::string family;
  int n = 8;
  bool keywords_only = false;
  int k = 3;
  int n_chain = 3;
  std::string c = "100", c_prime = "10", M = "50";
  bool lenient = false;
  std::string graph;
  std::string sets;
  std::string weights;
  int keywords = 30;
  std::uint64_t seed = 1;
  std::string out;
};

std::vector<Money> parse_weights(const std::string& text, std::size_t count) {
  std::vector<Money> weights;
  if (text.empty()) return std::vector<Money>(count, Money::from_micros(kMicrosPerUnit));
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) weights.push_back(Money::parse(item));
  if (weights.size() != count) {
    throw ValidationError("--weights lists " + std::to_string(weights.size()) + " values for " +
                          std::to_string(count) + " elements");
  }
  return weights;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorSpec spec;
  if (a.family == "greedy-trap") {
    spec = GreedyTrapSpec{a.n, a.keywords_only};
  } else if (a.family == "integrality-gap") {
    spec = IntegralityGapSpec{a.k, a.n_chain, Money::parse(a.c), Money::parse(a.c_prime), Money::parse(a.M),
                              !a.lenient};
  } else if (a.family == "independent-set") {
    if (a.graph.empty()) throw ValidationError("independent-set needs --graph");
    spec = parse_edgelist(read_text_file(a.graph));
  } else if (a.family == "max-coverage") {
    if (a.sets.empty()) throw ValidationError("max-coverage needs --sets");
    MaxCoverageSpec mc;
    mc.sets = parse_set_system(read_text_file(a.sets));
    int elements = 0;
    for (const auto& s : mc.sets) {
      for (int e : s) elements = std::max(elements, e + 1);
    }
    mc.element_weights = parse_weights(a.weights, static_cast<std::size_t>(elements));
    mc.k = a.k;
    spec = std::move(mc);
  } else {
    spec = SimulationSpec{a.keywords, a.seed};
  }
  const std::string doc = instance_to_json(generate(spec));
  emit(Output{a.out, "json"}, doc, out);
  return kOk;
}

struct ExperimentArgs {
  int keywords = 12;
  int runs = 15;
  std::uint64_t seed = 1;
  std::string exact_method = "closed-form";
  bool bounds_ok = false;
  double epsilon = 0.5;
  int trials = 1000;
  std::int64_t max_nodes = 1'000'000;
  Output output;
};

inline constexpr int kExactKeywordLimit = 12;

int cmd_experiment_sim(const ExperimentArgs& a, std::ostream& out) {
  if (a.keywords < 1 || a.runs < 1) throw ValidationError("--keywords and --runs must be positive");
  const bool bounds = a.keywords > kExactKeywordLimit;
  if (bounds && !a.bounds_ok) {
    throw SizeLimitError("exact solving is limited to " + std::to_string(kExactKeywordLimit) +
                         " keywords; pass --bounds-ok for LP-bound mode");
  }
  struct RunRow {
    int run;
    std::uint64_t seed;
    double exact_broad, broad_only;
    double exact_broad_rounded = 0.0, broad_only_rounded = 0.0;
    ordered_json ratio;
    bool dominance;
  };
  std::vector<RunRow> rows;
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < a.runs; ++r) {
    RunRow row{};
    row.run = r;
    row.seed = derive_seed(a.seed, static_cast<std::uint64_t>(r));
    const Instance inst = generate(SimulationSpec{a.keywords, row.seed});
    if (!bounds) {
      KeywordExactOptions options;
      options.max_nodes = a.max_nodes;
      options.method = parse_exact_method(a.exact_method);
      const OptimalBidResult full = solve_keyword_exact(inst, options);
      options.allow_exact = false;
      const OptimalBidResult broad = solve_keyword_exact(inst, options);
      row.exact_broad = micro2_to_double(full.objective());
      row.broad_only = micro2_to_double(broad.objective());
      row.dominance = broad.objective() <= full.objective();
    } else {
      const KeywordFractional full = solve_relaxation(inst);
      const KeywordFractional broad = solve_relaxation(inst, KeywordLpOptions{false});
      row.exact_broad = full.objective;
      row.broad_only = broad.objective;
      row.exact_broad_rounded = run_rounding_trials(inst, full, a.epsilon, a.trials, row.seed).mean;
      row.broad_only_rounded = run_rounding_trials(inst, broad, a.epsilon, a.trials, row.seed).mean;
      row.dominance = row.broad_only <= row.exact_broad + 1e-7 * std::max(1.0, std::abs(row.exact_broad));
    }
    row.ratio = row.broad_only > 0.0 ? ordered_json(row.exact_broad / row.broad_only)
                                     : (row.exact_broad == 0.0 ? ordered_json(1.0) : ordered_json(nullptr));
    rows.push_back(row);
  }

  double mean_full = 0.0, mean_broad = 0.0, max_ratio = 0.0, ratio_sum = 0.0;
  int ratio_count = 0;
  bool dominance = true;
  for (const RunRow& row : rows) {
    mean_full += row.exact_broad / a.runs;
    mean_broad += row.broad_only / a.runs;
    dominance = dominance && row.dominance;
    if (!row.ratio.is_null()) {
      max_ratio = std::max(max_ratio, row.ratio.get<double>());
      ratio_sum += row.ratio.get<double>();
      ++ratio_count;
    }
  }
  const double mean_ratio = ratio_count > 0 ? ratio_sum / ratio_count : 1.0;

  std::string text;
  if (a.output.format == "csv") {
    std::ostringstream csv;
    csv << "run,seed,exact_broad,broad_only,ratio,dominance\n";
    for (const RunRow& row : rows) {
      csv << row.run << ',' << row.seed << ',' << cell(row.exact_broad) << ',' << cell(row.broad_only) << ','
          << (row.ratio.is_null() ? "" : cell(row.ratio.get<double>())) << ',' << (row.dominance ? 1 : 0)
          << '\n';
    }
    text = csv.str();
  } else {
    ordered_json j;
    j["experiment"] = "sim";
    j["mode"] = bounds ? "bounds" : "exact";
    j["keywords"] = a.keywords;
    j["runs"] = a.runs;
    j["seed"] = a.seed;
    j["rng"] = kRngName;
    if (bounds) {
      j["epsilon"] = a.epsilon;
      j["trials"] = a.trials;
    }
    j["per_run"] = ordered_json::array();
    for (const RunRow& row : rows) {
      ordered_json r{{"run", row.run}, {"seed", row.seed}, {"exact_broad", row.exact_broad},
                     {"broad_only", row.broad_only}, {"ratio", row.ratio}, {"dominance", row.dominance}};
      if (bounds) {
        r["exact_broad_rounded"] = row.exact_broad_rounded;
        r["broad_only_rounded"] = row.broad_only_rounded;
      }
      j["per_run"].push_back(std::move(r));
    }
    j["mean_exact_broad"] = mean_full;
    j["mean_broad_only"] = mean_broad;
    j["mean_ratio"] = mean_ratio;
    j["max_ratio"] = max_ratio;
    j["dominance_all_runs"] = dominance;
    j["wall_time_ms"] = elapsed_ms(start);
    text = j.dump(2) + "\n";
  }
  emit(a.output, text, out);
  return dominance ? kOk : kSolverFailure;
}

struct PlanArgs {
  std::string instance;
  std::string budget;
  Output output;
};

int cmd_plan(const PlanArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const Money budget = resolve_budget(inst, a.budget);
  const BudgetedSolution sol = solve_budgeted_lp(inst, budget);
  const CampaignPlan plan = plan_two_campaigns(inst, sol, budget);
  const double simulated = simulate_campaign(inst, plan.integral) + simulate_campaign(inst, plan.throttled);
  const bool identity = std::abs(simulated - sol.lp_value) <= 1e-6 * std::max(std::abs(sol.lp_value), 1e-3);
  if (!identity) throw SolverError("simulated campaign value departs from the LP value");

  auto campaign_json = [&](const Campaign& c) {
    ordered_json ids = ordered_json::array();
    for (QueryIndex q : c.queries) ids.push_back(inst.query(q).id);
    return ordered_json{{"queries", ids}, {"budget", format_micro2(c.budget)},
                        {"realized_value", simulate_campaign(inst, c)}};
  };
  ordered_json j;
  j["instance"] = instance_summary(inst, a.instance);
  j["budget"] = budget.to_string();
  j["lp_value"] = sol.lp_value;
  j["shared_fraction"] = sol.shared_fraction ? ordered_json(*sol.shared_fraction) : ordered_json(nullptr);
  j["integral"] = campaign_json(plan.integral);
  j["throttled"] = campaign_json(plan.throttled);
  j["predicted_value"] = plan.predicted_value;
  j["simulated_value"] = simulated;
  j["identity_holds"] = identity;
  emit(a.output, j.dump(2) + "\n", out);
  return kOk;
}

void add_output(CLI::App* app, Output& output, bool with_format) {
  app->add_option("--out", output.path, "Output path (default: stdout)");
  if (with_format) {
    app->add_option("--format", output.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Broad-match bid optimization"};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print solver and format versions");

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--instance", solve_args.instance, "Instance document")->required();
  solve->add_option("--method", solve_args.method, "Solver")
      ->required()
      ->check(CLI::IsMember({"mincut", "lp", "budgeted", "lagrangian", "keyword-lp-round", "keyword-exact",
                             "greedy-margin", "greedy-rate", "oracle"}));
  solve->add_option("--budget", solve_args.budget, "Budget for budgeted methods (decimal)");
  solve->add_option("--epsilon", solve_args.epsilon, "Rounding epsilon")->check(CLI::IsMember({0.0, 0.5}));
  solve->add_option("--trials", solve_args.trials, "Rounding trials")->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_args.seed, "Rounding seed");
  solve->add_option("--rate", solve_args.rate, "Rate rule for greedy-rate")
      ->check(CLI::IsMember({"profit", "value"}));
  solve->add_option("--max-nodes", solve_args.max_nodes, "Node limit for keyword-exact")
      ->check(CLI::PositiveNumber);
  solve->add_option("--exact-method", solve_args.exact_method, "keyword-exact search")
      ->check(CLI::IsMember({"auto", "closed-form", "bb", "brute"}));
  add_output(solve, solve_args.output, true);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "Write a generated instance");
  gen->add_option("--family", gen_args.family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"greedy-trap", "integrality-gap", "independent-set", "max-coverage", "simulation"}));
  gen->add_option("--n", gen_args.n, "greedy-trap: keyword count");
  gen->add_flag("--keywords-only", gen_args.keywords_only, "greedy-trap: pairs are not biddable");
  gen->add_option("--k", gen_args.k, "integrality-gap: k; max-coverage: sets to pick");
  gen->add_option("--n-chain", gen_args.n_chain, "integrality-gap: chain length");
  gen->add_option("--c", gen_args.c, "integrality-gap: cost of l queries");
  gen->add_option("--c-prime", gen_args.c_prime, "integrality-gap: cost of r queries");
  gen->add_option("--M", gen_args.M, "integrality-gap: value of l queries");
  gen->add_flag("--lenient", gen_args.lenient, "integrality-gap: only require c > c' > n_chain");
  gen->add_option("--graph", gen_args.graph, "independent-set: edge list file");
  gen->add_option("--sets", gen_args.sets, "max-coverage: one set of element numbers per line");
  gen->add_option("--weights", gen_args.weights, "max-coverage: comma-separated element weights");
  gen->add_option("--keywords", gen_args.keywords, "simulation: keyword count");
  gen->add_option("--seed", gen_args.seed, "simulation: seed");
  gen->add_option("--out", gen_args.out, "Output path (default: stdout)");

  auto* experiment = app.add_subcommand("experiment", "Run an experiment");
  experiment->require_subcommand(1);
  ExperimentArgs sim_args;
  auto* sim = experiment->add_subcommand("sim", "Exact+broad versus broad-only on random instances");
  sim->add_option("--keywords", sim_args.keywords, "Keywords per instance");
  sim->add_option("--runs", sim_args.runs, "Number of instances");
  sim->add_option("--seed", sim_args.seed, "Base seed");
  sim->add_option("--exact-method", sim_args.exact_method, "Exact search")
      ->check(CLI::IsMember({"closed-form", "auto", "bb", "brute"}));
  sim->add_flag("--bounds-ok", sim_args.bounds_ok, "Allow LP-bound mode above 12 keywords");
  sim->add_option("--epsilon", sim_args.epsilon, "Rounding epsilon in bounds mode")
      ->check(CLI::IsMember({0.0, 0.5}));
  sim->add_option("--trials", sim_args.trials, "Rounding trials in bounds mode")->check(CLI::PositiveNumber);
  sim->add_option("--max-nodes", sim_args.max_nodes, "Node limit for the exact search")
      ->check(CLI::PositiveNumber);
  add_output(sim, sim_args.output, true);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Two-campaign plan for a budget");
  plan->add_option("--instance", plan_args.instance, "Instance document")->required();
  plan->add_option("--budget", plan_args.budget, "Budget (decimal); defaults to the instance budget");
  add_output(plan, plan_args.output, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (version) {
      out << "broadbid " << kVersion << " (instance format " << kInstanceFormatVersion << ", rng " << kRngName
          << ")\n";
      return kOk;
    }
    if (*solve) return cmd_solve(solve_args, out);
    if (*gen) return cmd_generate(gen_args, out);
    if (*sim) return cmd_experiment_sim(sim_args, out);
    if (*plan) return cmd_plan(plan_args, out);
    err << app.help();
    return kBadInput;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kSizeLimit;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace broadbid::cli

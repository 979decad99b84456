#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "broadbid/baselines.hpp"
#include "broadbid/errors.hpp"
#include "broadbid/generators.hpp"
#include "broadbid/instance_io.hpp"
#include "broadbid/keyword_solver.hpp"
#include "broadbid/query_solver.hpp"
#include "broadbid/version.hpp"
#include "cli.hpp"

namespace py = pybind11;
using namespace broadbid;

namespace {

py::list ids(const Instance& inst, const std::vector<QueryIndex>& members) {
  py::list out;
  for (QueryIndex q : members) out.append(inst.query(q).id);
  return out;
}

py::dict bid_result(const Instance& inst, const OptimalBidResult& r) {
  py::dict bids;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const Bid& b = r.bid[q];
    if (b.empty()) continue;
    py::dict entry;
    entry["exact"] = b.exact ? py::object(py::str(b.exact->to_string())) : py::object(py::none());
    entry["broad"] = b.broad ? py::object(py::str(b.broad->to_string())) : py::object(py::none());
    bids[py::str(inst.query(q).id)] = entry;
  }
  py::dict out;
  out["method"] = to_string(r.method);
  out["winning_set"] = ids(inst, r.winning_set.members);
  out["utility"] = micro2_to_double(r.objective());
  out["utility_exact"] = format_micro2(r.objective());
  out["value"] = micro2_to_double(r.winning_set.parts.value_part);
  out["spend"] = micro2_to_double(r.winning_set.parts.cost_part);
  out["bids"] = bids;
  return out;
}

Money money(const std::string& text) { return Money::parse(text); }

py::dict budgeted(const Instance& inst, const std::string& budget) {
  const BudgetedSolution sol = solve_budgeted_lp(inst, money(budget));
  py::dict x;
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    x[py::str(inst.query(q).id)] = sol.x[static_cast<std::size_t>(q)];
  }
  py::dict out;
  out["x"] = x;
  out["lp_value"] = sol.lp_value;
  out["spend"] = sol.spend;
  out["shared_fraction"] = sol.shared_fraction ? py::object(py::float_(*sol.shared_fraction)) : py::object(py::none());
  out["integral"] = ids(inst, sol.integral_ones);
  out["fractional"] = ids(inst, sol.fractional);
  return out;
}

py::dict plan(const Instance& inst, const std::string& budget) {
  const Money b = money(budget);
  const BudgetedSolution sol = solve_budgeted_lp(inst, b);
  const CampaignPlan p = plan_two_campaigns(inst, sol, b);
  auto campaign = [&](const Campaign& c) {
    py::dict d;
    d["queries"] = ids(inst, c.queries);
    d["budget"] = micro2_to_double(c.budget);
    d["realized_value"] = simulate_campaign(inst, c);
    return d;
  };
  py::dict out;
  out["lp_value"] = sol.lp_value;
  out["integral"] = campaign(p.integral);
  out["throttled"] = campaign(p.throttled);
  out["predicted_value"] = p.predicted_value;
  return out;
}

py::dict rounding(const Instance& inst, double epsilon, int trials, std::uint64_t seed) {
  const KeywordFractional frac = solve_relaxation(inst);
  const RoundingSummary s = run_rounding_trials(inst, frac, epsilon, trials, seed);
  py::dict out;
  out["lp_objective"] = frac.objective;
  out["V_frac"] = frac.V_frac;
  out["C_frac"] = frac.C_frac;
  out["trials"] = s.trial_count;
  out["mean"] = s.mean;
  out["std"] = s.std;
  out["bound"] = s.bound;
  out["bound_satisfied"] = s.bound_satisfied;
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"broadbid"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_broadbid, m) {
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "BroadbidError", PyExc_RuntimeError);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", m.attr("BroadbidError"));

  py::class_<Instance>(m, "Instance")
      .def_static("from_json", [](const std::string& text) { return parse_instance(text); })
      .def_static("load", [](const std::string& path) { return load_instance(path); })
      .def("to_json", [](const Instance& inst) { return instance_to_json(inst); })
      .def("__len__", &Instance::size)
      .def_property_readonly("ids",
                             [](const Instance& inst) {
                               std::vector<std::string> out;
                               for (const Query& q : inst.queries()) out.push_back(q.id);
                               return out;
                             })
      .def_property_readonly("keywords",
                             [](const Instance& inst) { return py::list(ids(inst, inst.biddable())); })
      .def_property_readonly("budget", [](const Instance& inst) -> py::object {
        if (!inst.budget()) return py::none();
        return py::str(inst.budget()->to_string());
      });

  m.def("greedy_trap", [](int n, bool keywords_only) { return generate(GreedyTrapSpec{n, keywords_only}); },
        py::arg("n") = 8, py::arg("keywords_only") = false);
  m.def(
      "integrality_gap",
      [](int k, int n_chain, const std::string& c, const std::string& c_prime, const std::string& M, bool strict) {
        return generate(IntegralityGapSpec{k, n_chain, money(c), money(c_prime), money(M), strict});
      },
      py::arg("k") = 3, py::arg("n_chain") = 3, py::arg("c") = "100", py::arg("c_prime") = "10",
      py::arg("M") = "50", py::arg("strict") = true);
  m.def(
      "independent_set",
      [](int nodes, const std::vector<std::pair<int, int>>& edges) { return generate(IndependentSetSpec{nodes, edges}); },
      py::arg("nodes"), py::arg("edges"));
  m.def(
      "max_coverage",
      [](const std::vector<std::vector<int>>& sets, const std::vector<std::string>& weights, int k) {
        MaxCoverageSpec spec;
        spec.sets = sets;
        for (const auto& w : weights) spec.element_weights.push_back(money(w));
        spec.k = k;
        return generate(spec);
      },
      py::arg("sets"), py::arg("weights"), py::arg("k"));
  m.def("simulation", [](int keywords, std::uint64_t seed) { return generate(SimulationSpec{keywords, seed}); },
        py::arg("keywords") = 30, py::arg("seed") = 0);

  m.def("solve_mincut", [](const Instance& inst) { return bid_result(inst, solve_query_mincut(inst)); });
  m.def("solve_lp", [](const Instance& inst) { return bid_result(inst, solve_query_lp(inst)); });
  m.def("greedy_margin", [](const Instance& inst) { return bid_result(inst, max_margin_greedy(inst)); });
  m.def(
      "greedy_rate",
      [](const Instance& inst, const std::string& rule) {
        if (rule != "profit" && rule != "value") throw ValidationError("rule must be 'profit' or 'value'");
        return bid_result(inst, max_rate_greedy(inst, rule == "profit" ? RateRule::kProfitOverCost
                                                                       : RateRule::kValueOverCost));
      },
      py::arg("inst"), py::arg("rule") = "profit");
  m.def("brute_force", [](const Instance& inst) { return bid_result(inst, brute_force_query(inst)); });
  m.def(
      "keyword_exact",
      [](const Instance& inst, std::int64_t max_nodes) {
        KeywordExactOptions options;
        options.max_nodes = max_nodes;
        return bid_result(inst, solve_keyword_exact(inst, options));
      },
      py::arg("inst"), py::arg("max_nodes") = 1'000'000);
  m.def("solve_budgeted", &budgeted, py::arg("inst"), py::arg("budget"));
  m.def(
      "lagrangian",
      [](const Instance& inst, const std::string& budget) {
        const LagrangianEstimate e = solve_budgeted_lagrangian(inst, money(budget));
        py::dict out;
        out["value"] = e.value;
        out["multiplier"] = e.multiplier;
        out["cuts"] = e.cuts;
        return out;
      },
      py::arg("inst"), py::arg("budget"));
  m.def("plan", &plan, py::arg("inst"), py::arg("budget"));
  m.def("rounding_trials", &rounding, py::arg("inst"), py::arg("epsilon") = 0.5, py::arg("trials") = 1000,
        py::arg("seed") = 0);
  m.def("run_cli", &run_cli, py::arg("args"));
}

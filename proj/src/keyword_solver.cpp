#include "broadbid/keyword_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "broadbid/errors.hpp"
#include "broadbid/random.hpp"

namespace broadbid {

PriceLevels::PriceLevels(const Instance& inst) {
  for (const Query& q : inst.queries()) levels_.push_back(q.cost);
  std::sort(levels_.begin(), levels_.end());
  levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
}

std::size_t PriceLevels::index_of(Money cost) const {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), cost);
  if (it == levels_.end() || *it != cost) throw std::out_of_range("cost is not a price level");
  return static_cast<std::size_t>(it - levels_.begin());
}

namespace {

constexpr int kNone = -1;
constexpr int kExact = -2;
constexpr int kFree = -3;

// Index structures shared by the relaxation, the rounding and the exact
// search.
struct KeywordModel {
  const Instance* inst = nullptr;
  PriceLevels levels;
  std::vector<QueryIndex> keywords;
  std::vector<int> slot;                  // per query
  std::vector<int> level;                 // per query: index of c(q) in levels
  std::vector<std::vector<int>> reach;    // per slot: reachable levels, ascending
  // per slot: matched queries sorted by level, so a broad bid at level p
  // wins a prefix.
  std::vector<std::vector<QueryIndex>> targets;
  std::vector<std::vector<int>> others;   // per query: slots of matching keywords other than q

  explicit KeywordModel(const Instance& instance) : inst(&instance), levels(instance) {
    const auto n = instance.size();
    slot.assign(n, -1);
    level.resize(n);
    others.resize(n);
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(n); ++q) {
      level[static_cast<std::size_t>(q)] = static_cast<int>(levels.index_of(instance.query(q).cost));
      if (instance.query(q).biddable) {
        slot[static_cast<std::size_t>(q)] = static_cast<int>(keywords.size());
        keywords.push_back(q);
      }
    }
    for (QueryIndex s : keywords) {
      std::vector<QueryIndex> matched = instance.matched_by(s);
      std::stable_sort(matched.begin(), matched.end(), [&](QueryIndex a, QueryIndex b) {
        return level[static_cast<std::size_t>(a)] < level[static_cast<std::size_t>(b)];
      });
      std::vector<int> lv;
      for (QueryIndex q : matched) lv.push_back(level[static_cast<std::size_t>(q)]);
      lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
      reach.push_back(std::move(lv));
      targets.push_back(std::move(matched));
    }
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(n); ++q) {
      for (QueryIndex s : instance.matchers(q)) {
        if (s != q) others[static_cast<std::size_t>(q)].push_back(slot[static_cast<std::size_t>(s)]);
      }
    }
  }

  std::size_t keyword_count() const { return keywords.size(); }
};

struct LpLayout {
  std::vector<int> r;                    // per slot
  std::vector<std::vector<int>> w;       // per slot, aligned with reach
  std::vector<std::vector<int>> z;       // per slot, aligned with reach
  std::vector<int> y;                    // per query, -1 if no Y variable
};

int reach_position(const KeywordModel& model, int k, int lv) {
  const auto& levels = model.reach[static_cast<std::size_t>(k)];
  auto it = std::lower_bound(levels.begin(), levels.end(), lv);
  if (it == levels.end() || *it != lv) throw std::logic_error("level not reachable from keyword");
  return static_cast<int>(it - levels.begin());
}

LinearProgram build_lp(const KeywordModel& model, const KeywordLpOptions& options, LpLayout& layout) {
  const Instance& inst = *model.inst;
  LinearProgram lp;
  const std::size_t kc = model.keyword_count();
  layout.r.resize(kc);
  layout.w.resize(kc);
  layout.z.resize(kc);
  layout.y.assign(inst.size(), -1);

  for (std::size_t k = 0; k < kc; ++k) {
    const std::string& id = inst.query(model.keywords[k]).id;
    layout.r[k] = lp.add_variable(0.0, 0.0, options.allow_exact ? 1.0 : 0.0, "R_" + id);
    for (int lv : model.reach[k]) {
      const std::string suffix = id + "_" + model.levels[static_cast<std::size_t>(lv)].to_string();
      layout.w[k].push_back(lp.add_variable(0.0, 0.0, 1.0, "W_" + suffix));
      layout.z[k].push_back(lp.add_variable(0.0, 0.0, 1.0, "Z_" + suffix));
    }
  }

  for (std::size_t k = 0; k < kc; ++k) {
    const auto& w = layout.w[k];
    const auto& z = layout.z[k];
    for (std::size_t p = 0; p < z.size(); ++p) {
      std::vector<std::pair<int, double>> terms{{z[p], 1.0}};
      for (std::size_t t = p; t < w.size(); ++t) terms.emplace_back(w[t], -1.0);
      lp.add_row(std::move(terms), Relation::kEqual, 0.0);
    }
    if (!z.empty()) lp.add_row({{z.front(), 1.0}, {layout.r[k], 1.0}}, Relation::kLessEqual, 1.0);
  }

  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const double weight = micro2_to_double(inst.weight(q));
    const int own = model.slot[static_cast<std::size_t>(q)];
    const int lv = model.level[static_cast<std::size_t>(q)];
    const auto& others = model.others[static_cast<std::size_t>(q)];
    if (own >= 0 && others.empty()) {
      const auto k = static_cast<std::size_t>(own);
      lp.objective[static_cast<std::size_t>(layout.z[k][static_cast<std::size_t>(reach_position(model, own, lv))])] += weight;
      lp.objective[static_cast<std::size_t>(layout.r[k])] += weight;
      continue;
    }
    // Each term is a list of variables whose sum is one selection mass.
    std::vector<std::vector<int>> masses;
    if (own >= 0) {
      const auto k = static_cast<std::size_t>(own);
      masses.push_back({layout.z[k][static_cast<std::size_t>(reach_position(model, own, lv))], layout.r[k]});
    }
    for (int k : others) {
      masses.push_back({layout.z[static_cast<std::size_t>(k)][static_cast<std::size_t>(reach_position(model, k, lv))]});
    }
    const int y = lp.add_variable(weight, 0.0, masses.empty() ? 0.0 : 1.0, "Y_" + inst.query(q).id);
    layout.y[static_cast<std::size_t>(q)] = y;
    if (masses.empty()) continue;
    std::vector<std::pair<int, double>> upper{{y, 1.0}};
    for (const auto& mass : masses) {
      for (int v : mass) upper.emplace_back(v, -1.0);
      std::vector<std::pair<int, double>> lower{{y, 1.0}};
      for (int v : mass) lower.emplace_back(v, -1.0);
      lp.add_row(std::move(lower), Relation::kGreaterEqual, 0.0);
    }
    lp.add_row(std::move(upper), Relation::kLessEqual, 0.0);
  }
  return lp;
}

KeywordFractional extract(const KeywordModel& model, const LpLayout& layout, VertexSolution vertex) {
  const Instance& inst = *model.inst;
  KeywordFractional frac;
  frac.levels = model.levels;
  frac.keywords = model.keywords;
  frac.slot = model.slot;
  const std::size_t kc = model.keyword_count();
  const std::size_t levels = model.levels.size();
  frac.W.assign(kc, std::vector<double>(levels, 0.0));
  frac.Z.assign(kc, std::vector<double>(levels, 0.0));
  frac.R.assign(kc, 0.0);
  auto value_of = [&](int var) { return vertex.values[static_cast<std::size_t>(var)]; };
  for (std::size_t k = 0; k < kc; ++k) {
    frac.R[k] = value_of(layout.r[k]);
    for (std::size_t i = 0; i < model.reach[k].size(); ++i) {
      frac.W[k][static_cast<std::size_t>(model.reach[k][i])] = value_of(layout.w[k][i]);
    }
    double running = 0.0;
    for (std::size_t p = levels; p-- > 0;) {
      running += frac.W[k][p];
      frac.Z[k][p] = running;
    }
  }
  frac.Y.assign(inst.size(), 0.0);
  for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
    const auto qi = static_cast<std::size_t>(q);
    double y;
    if (layout.y[qi] >= 0) {
      y = value_of(layout.y[qi]);
    } else {
      const auto k = static_cast<std::size_t>(model.slot[qi]);
      y = frac.Z[k][static_cast<std::size_t>(model.level[qi])] + frac.R[k];
    }
    frac.Y[qi] = y;
    frac.V_frac += y * micro2_to_double(inst.value_amount(q));
    frac.C_frac += y * micro2_to_double(inst.cost_amount(q));
  }
  frac.objective = vertex.objective_value;
  frac.vertex = std::move(vertex);
  return frac;
}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in [0, 1)");
  }
}

// Per keyword slot: kNone, kExact or a level index.
std::vector<int> draw_choices(const KeywordFractional& frac, double epsilon, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> choice(frac.keywords.size(), kNone);
  for (std::size_t k = 0; k < frac.keywords.size(); ++k) {
    double u = rng.uniform();
    if (u < frac.R[k]) {
      choice[k] = kExact;
      continue;
    }
    u -= frac.R[k];
    for (std::size_t p = 0; p < frac.W[k].size(); ++p) {
      const double mass = (1.0 - epsilon) * frac.W[k][p];
      if (u < mass) {
        choice[k] = static_cast<int>(p);
        break;
      }
      u -= mass;
    }
  }
  return choice;
}

BidVector choices_to_bid(const Instance& inst, const std::vector<QueryIndex>& keywords,
                         const PriceLevels& levels, const std::vector<int>& choice) {
  BidVector bid(inst.size());
  for (std::size_t k = 0; k < keywords.size(); ++k) {
    const QueryIndex s = keywords[k];
    if (choice[k] == kExact) {
      bid[s].exact = inst.query(s).cost;
    } else if (choice[k] >= 0) {
      bid[s].broad = levels[static_cast<std::size_t>(choice[k])];
    }
  }
  return bid;
}

// Tracks how many chosen bids reach each query and the resulting utility.
class WinTracker {
 public:
  explicit WinTracker(const KeywordModel& model)
      : model_(model), count_(model.inst->size(), 0) {
    weight_.reserve(model.inst->size());
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(model.inst->size()); ++q) {
      weight_.push_back(model.inst->weight(q));
    }
  }

  void apply(std::size_t k, int choice, int delta) {
    if (choice == kNone) return;
    if (choice == kExact) {
      touch(model_.keywords[k], delta);
      return;
    }
    for (QueryIndex q : model_.targets[k]) {
      if (model_.level[static_cast<std::size_t>(q)] > choice) break;
      touch(q, delta);
    }
  }

  Wide utility() const { return utility_; }

 private:
  void touch(QueryIndex q, int delta) {
    int& c = count_[static_cast<std::size_t>(q)];
    if (delta > 0 && c++ == 0) utility_ += weight_[static_cast<std::size_t>(q)];
    if (delta < 0 && --c == 0) utility_ -= weight_[static_cast<std::size_t>(q)];
  }

  const KeywordModel& model_;
  std::vector<int> count_;
  std::vector<Wide> weight_;
  Wide utility_ = 0;
};

std::vector<std::vector<int>> choice_sets(const KeywordModel& model, bool allow_exact) {
  std::vector<std::vector<int>> sets(model.keyword_count());
  for (std::size_t k = 0; k < sets.size(); ++k) {
    sets[k].push_back(kNone);
    if (allow_exact) sets[k].push_back(kExact);
    for (int lv : model.reach[k]) sets[k].push_back(lv);
  }
  return sets;
}

class Enumerator {
 public:
  Enumerator(const KeywordModel& model, std::vector<std::vector<int>> sets)
      : sets_(std::move(sets)), tracker_(model), current_(sets_.size(), kNone),
        best_choice_(sets_.size(), kNone) {}

  std::vector<int> run() {
    visit(0);
    return best_choice_;
  }

 private:
  void visit(std::size_t k) {
    if (k == sets_.size()) {
      if (tracker_.utility() > best_) {
        best_ = tracker_.utility();
        best_choice_ = current_;
      }
      return;
    }
    for (int c : sets_[k]) {
      tracker_.apply(k, c, +1);
      current_[k] = c;
      visit(k + 1);
      tracker_.apply(k, c, -1);
    }
    current_[k] = kNone;
  }

  std::vector<std::vector<int>> sets_;
  WinTracker tracker_;
  std::vector<int> current_;
  std::vector<int> best_choice_;
  Wide best_ = 0;
};

class BranchAndBound {
 public:
  BranchAndBound(const KeywordModel& model, const KeywordExactOptions& options)
      : model_(model), options_(options), sets_(choice_sets(model, options.allow_exact)),
        best_choice_(model.keyword_count(), kNone) {
    base_ = build_lp(model, KeywordLpOptions{options.allow_exact}, layout_);
  }

  std::vector<int> run() {
    std::vector<int> fixed(model_.keyword_count(), kFree);
    visit(fixed);
    return best_choice_;
  }

 private:
  Wide evaluate(const std::vector<int>& choice) const {
    WinTracker tracker(model_);
    for (std::size_t k = 0; k < choice.size(); ++k) tracker.apply(k, choice[k], +1);
    return tracker.utility();
  }

  void offer(const std::vector<int>& choice) {
    const Wide u = evaluate(choice);
    if (u > best_) {
      best_ = u;
      best_choice_ = choice;
    }
  }

  void fix(LinearProgram& lp, std::size_t k, int choice) const {
    const auto r = static_cast<std::size_t>(layout_.r[k]);
    const auto& reach = model_.reach[k];
    if (choice == kExact) {
      lp.lower[r] = 1.0;
    } else {
      lp.upper[r] = 0.0;
    }
    for (std::size_t i = 0; i < reach.size(); ++i) {
      const auto w = static_cast<std::size_t>(layout_.w[k][i]);
      if (reach[i] == choice) {
        lp.lower[w] = 1.0;
      } else {
        lp.upper[w] = 0.0;
      }
    }
  }

  void visit(std::vector<int>& fixed) {
    if (++nodes_ > options_.max_nodes) {
      throw SizeLimitError("keyword branch and bound exceeded " + std::to_string(options_.max_nodes) +
                           " nodes");
    }
    const auto free_it = std::find(fixed.begin(), fixed.end(), kFree);
    if (free_it == fixed.end()) {
      offer(fixed);
      return;
    }
    LinearProgram lp = base_;
    for (std::size_t k = 0; k < fixed.size(); ++k) {
      if (fixed[k] != kFree) fix(lp, k, fixed[k]);
    }
    const VertexSolution vertex = solve(lp);
    if (vertex.status != LpStatus::kOptimal) return;
    const double incumbent = micro2_to_double(best_);
    if (vertex.objective_value <= incumbent + 1e-8 * std::max(1.0, std::abs(incumbent))) return;

    // Mass of each choice of each free keyword at this vertex.
    std::size_t branch = fixed.size();
    double worst = -1.0;
    std::vector<int> rounded = fixed;
    std::vector<std::vector<double>> mass(fixed.size());
    for (std::size_t k = 0; k < fixed.size(); ++k) {
      if (fixed[k] != kFree) continue;
      for (int c : sets_[k]) mass[k].push_back(choice_mass(vertex, k, c));
      const auto top = std::max_element(mass[k].begin(), mass[k].end());
      rounded[k] = sets_[k][static_cast<std::size_t>(top - mass[k].begin())];
      const double fractionality = 1.0 - *top;
      if (fractionality > worst) {
        worst = fractionality;
        branch = k;
      }
    }
    offer(rounded);
    if (worst <= 1e-9) {
      const double value = micro2_to_double(evaluate(rounded));
      if (std::abs(value - vertex.objective_value) <= 1e-7 * std::max(1.0, std::abs(value))) return;
    }

    std::vector<std::size_t> order(sets_[branch].size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mass[branch][a] > mass[branch][b]; });
    for (std::size_t i : order) {
      fixed[branch] = sets_[branch][i];
      visit(fixed);
    }
    fixed[branch] = kFree;
  }

  double choice_mass(const VertexSolution& vertex, std::size_t k, int choice) const {
    auto value_of = [&](int var) { return vertex.values[static_cast<std::size_t>(var)]; };
    double r = value_of(layout_.r[k]);
    double broad = 0.0;
    for (int var : layout_.w[k]) broad += value_of(var);
    if (choice == kNone) return std::max(0.0, 1.0 - r - broad);
    if (choice == kExact) return r;
    return value_of(layout_.w[k][static_cast<std::size_t>(reach_position(model_, static_cast<int>(k), choice))]);
  }

  const KeywordModel& model_;
  KeywordExactOptions options_;
  std::vector<std::vector<int>> sets_;
  LpLayout layout_;
  LinearProgram base_;
  std::vector<int> best_choice_;
  Wide best_ = 0;
  std::int64_t nodes_ = 0;
};

}  // namespace

LinearProgram build_ilp_approx(const Instance& inst, const KeywordLpOptions& options) {
  const KeywordModel model(inst);
  LpLayout layout;
  return build_lp(model, options, layout);
}

KeywordFractional solve_relaxation(const Instance& inst, const KeywordLpOptions& options) {
  const KeywordModel model(inst);
  LpLayout layout;
  const LinearProgram lp = build_lp(model, options, layout);
  VertexSolution vertex = solve(lp);
  if (vertex.status != LpStatus::kOptimal) {
    throw SolverError(std::string("keyword relaxation ended ") + to_string(vertex.status));
  }
  return extract(model, layout, std::move(vertex));
}

RoundedBid round_bid(const Instance& inst, const KeywordFractional& frac, double epsilon,
                     std::uint64_t seed) {
  check_epsilon(epsilon);
  RoundedBid out;
  out.epsilon = epsilon;
  out.seed = seed;
  out.bid = choices_to_bid(inst, frac.keywords, frac.levels, draw_choices(frac, epsilon, seed));
  return out;
}

double selection_probability(const Instance& inst, const KeywordFractional& frac, double epsilon,
                             QueryIndex q) {
  check_epsilon(epsilon);
  const auto lv = frac.levels.index_of(inst.query(q).cost);
  double miss = 1.0;
  for (QueryIndex s : inst.matchers(q)) {
    const auto k = static_cast<std::size_t>(frac.slot[static_cast<std::size_t>(s)]);
    double hit = (1.0 - epsilon) * frac.Z[k][lv];
    if (s == q) hit += frac.R[k];
    miss *= 1.0 - hit;
  }
  return 1.0 - miss;
}

double utility_bound(double v_frac, double c_frac, double epsilon) {
  check_epsilon(epsilon);
  return (1.0 - epsilon) * (1.0 - 0.5 * (1.0 - epsilon)) * v_frac -
         std::max(1.0, 2.0 - 2.0 * epsilon) * c_frac;
}

RoundingSummary run_rounding_trials(const Instance& inst, const KeywordFractional& frac,
                                    double epsilon, int trials, std::uint64_t seed,
                                    bool keep_trials) {
  check_epsilon(epsilon);
  if (trials <= 0) throw ValidationError("trial count must be positive");
  const KeywordModel model(inst);
  RoundingSummary summary;
  summary.trial_count = trials;
  summary.wins.assign(inst.size(), 0);
  std::vector<char> won(inst.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const std::vector<int> choice = draw_choices(frac, epsilon, trial_seed);
    std::fill(won.begin(), won.end(), 0);
    for (std::size_t k = 0; k < choice.size(); ++k) {
      if (choice[k] == kExact) {
        won[static_cast<std::size_t>(model.keywords[k])] = 1;
      } else if (choice[k] >= 0) {
        for (QueryIndex q : model.targets[k]) {
          if (model.level[static_cast<std::size_t>(q)] > choice[k]) break;
          won[static_cast<std::size_t>(q)] = 1;
        }
      }
    }
    Wide value = 0;
    Wide spend = 0;
    for (QueryIndex q = 0; q < static_cast<QueryIndex>(inst.size()); ++q) {
      if (!won[static_cast<std::size_t>(q)]) continue;
      ++summary.wins[static_cast<std::size_t>(q)];
      value += inst.value_amount(q);
      spend += inst.cost_amount(q);
    }
    const double utility = micro2_to_double(value - spend);
    sum += utility;
    sum_sq += utility * utility;
    if (keep_trials) {
      summary.trials.push_back({i, trial_seed, utility, micro2_to_double(spend), micro2_to_double(value)});
    }
  }
  summary.mean = sum / trials;
  if (trials > 1) {
    const double var = (sum_sq - trials * summary.mean * summary.mean) / (trials - 1);
    summary.std = std::sqrt(std::max(0.0, var));
  }
  summary.bound = utility_bound(frac, epsilon);
  summary.bound_satisfied =
      summary.mean >= summary.bound - 3.0 * summary.std / std::sqrt(static_cast<double>(trials));
  return summary;
}

OptimalBidResult solve_keyword_exact(const Instance& inst, const KeywordExactOptions& options) {
  const KeywordModel model(inst);
  auto sets = choice_sets(model, options.allow_exact);
  double combinations = 1.0;
  for (const auto& set : sets) combinations *= static_cast<double>(set.size());
  const bool small = combinations <= static_cast<double>(options.max_nodes);

  std::vector<int> best;
  if (options.method == KeywordExactMethod::kEnumerate ||
      (options.method == KeywordExactMethod::kAuto && small)) {
    if (!small) {
      throw SizeLimitError("keyword enumeration needs " + std::to_string(combinations) +
                           " combinations, limit " + std::to_string(options.max_nodes));
    }
    best = Enumerator(model, std::move(sets)).run();
  } else {
    best = BranchAndBound(model, options).run();
  }

  OptimalBidResult result;
  result.method = SolveMethod::kKeywordExact;
  result.bid = choices_to_bid(inst, model.keywords, model.levels, best);
  result.winning_set = interpret_bid(inst, result.bid);
  return result;
}

}  // namespace broadbid

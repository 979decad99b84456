#include "broadbid/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "broadbid/errors.hpp"

namespace broadbid {

int LinearProgram::add_variable(double cost, double lo, double hi, std::string name) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return static_cast<int>(objective.size()) - 1;
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> terms, Relation relation,
                            double rhs) {
  rows.push_back({std::move(terms), relation, rhs});
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

using SparseColumn = std::vector<std::pair<int, double>>;

enum class Position { kLower, kUpper, kFree, kBasic };

class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const SimplexOptions& options)
      : options_(options),
        m_(static_cast<int>(lp.rows.size())),
        n_(lp.variable_count()) {
    validate(lp);
    scale_and_load(lp);
    max_iterations_ = options_.max_iterations > 0 ? options_.max_iterations
                                                  : 20 * (m_ + n_) + 10000;
  }

  VertexSolution run(const LinearProgram& lp) {
    VertexSolution out;
    initialize_basis();
    refactor();

    if (artificial_begin_ < total_) {
      std::vector<double> phase1(static_cast<std::size_t>(total_), 0.0);
      for (int j = artificial_begin_; j < total_; ++j) phase1[static_cast<std::size_t>(j)] = -1.0;
      iterate(phase1);
      double infeasibility = 0.0;
      double scale = 1.0;
      for (int j = artificial_begin_; j < total_; ++j) infeasibility += x_[static_cast<std::size_t>(j)];
      for (double v : rhs_) scale = std::max(scale, std::abs(v));
      if (infeasibility > options_.feasibility_tolerance * scale) {
        out.status = LpStatus::kInfeasible;
        out.iterations = iterations_;
        return out;
      }
      for (int j = artificial_begin_; j < total_; ++j) {
        hi_[static_cast<std::size_t>(j)] = 0.0;
        if (position_[static_cast<std::size_t>(j)] != Position::kBasic) {
          position_[static_cast<std::size_t>(j)] = Position::kLower;
          x_[static_cast<std::size_t>(j)] = 0.0;
        }
      }
      refactor();
    }

    std::vector<double> phase2(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) phase2[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)];
    if (!iterate(phase2)) {
      out.status = LpStatus::kUnbounded;
      out.iterations = iterations_;
      return out;
    }
    refactor();

    out.status = LpStatus::kOptimal;
    out.iterations = iterations_;
    out.values.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      double v = x_[static_cast<std::size_t>(j)];
      const double lo = lp.lower[static_cast<std::size_t>(j)];
      const double hi = lp.upper[static_cast<std::size_t>(j)];
      if (std::isfinite(lo) && std::abs(v - lo) <= options_.feasibility_tolerance) v = lo;
      if (std::isfinite(hi) && std::abs(v - hi) <= options_.feasibility_tolerance) v = hi;
      out.values[static_cast<std::size_t>(j)] = v;
      out.objective_value += lp.objective[static_cast<std::size_t>(j)] * v;
    }
    for (int r = 0; r < m_; ++r) {
      const int var = basis_[static_cast<std::size_t>(r)];
      if (var < artificial_begin_) out.basis.push_back(var);
    }
    std::sort(out.basis.begin(), out.basis.end());
    return out;
  }

 private:
  void validate(const LinearProgram& lp) const {
    if (lp.lower.size() != lp.objective.size() || lp.upper.size() != lp.objective.size()) {
      throw std::invalid_argument("LP bound vectors differ in dimension from the objective");
    }
    for (int j = 0; j < n_; ++j) {
      if (lp.lower[static_cast<std::size_t>(j)] > lp.upper[static_cast<std::size_t>(j)]) {
        throw std::invalid_argument("LP variable with lower bound above upper bound");
      }
    }
    for (const LinearRow& row : lp.rows) {
      for (const auto& [var, coef] : row.terms) {
        if (var < 0 || var >= n_) throw std::invalid_argument("LP row references unknown variable");
        if (!std::isfinite(coef)) throw std::invalid_argument("non-finite LP coefficient");
      }
    }
  }

  void scale_and_load(const LinearProgram& lp) {
    double objective_max = 0.0;
    for (double c : lp.objective) objective_max = std::max(objective_max, std::abs(c));
    objective_scale_ = objective_max > 0.0 ? 1.0 / objective_max : 1.0;

    columns_.assign(static_cast<std::size_t>(n_ + m_), {});
    rhs_.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const LinearRow& row = lp.rows[static_cast<std::size_t>(i)];
      std::map<int, double> merged;
      for (const auto& [var, coef] : row.terms) merged[var] += coef;
      double row_max = 0.0;
      for (const auto& [var, coef] : merged) row_max = std::max(row_max, std::abs(coef));
      const double scale = row_max > 0.0 ? 1.0 / row_max : 1.0;
      for (const auto& [var, coef] : merged) {
        if (coef != 0.0) columns_[static_cast<std::size_t>(var)].emplace_back(i, coef * scale);
      }
      rhs_[static_cast<std::size_t>(i)] = row.rhs * scale;
      columns_[static_cast<std::size_t>(n_ + i)].emplace_back(i, 1.0);
    }

    lo_.assign(lp.lower.begin(), lp.lower.end());
    hi_.assign(lp.upper.begin(), lp.upper.end());
    cost_.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      cost_[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)] * objective_scale_;
    }
    for (int i = 0; i < m_; ++i) {
      switch (lp.rows[static_cast<std::size_t>(i)].relation) {
        case Relation::kLessEqual: lo_.push_back(0.0); hi_.push_back(kInfinity); break;
        case Relation::kGreaterEqual: lo_.push_back(-kInfinity); hi_.push_back(0.0); break;
        case Relation::kEqual: lo_.push_back(0.0); hi_.push_back(0.0); break;
      }
    }
    total_ = n_ + m_;
    artificial_begin_ = total_;
  }

  void initialize_basis() {
    x_.assign(static_cast<std::size_t>(total_), 0.0);
    position_.assign(static_cast<std::size_t>(total_), Position::kLower);
    for (int j = 0; j < n_; ++j) {
      const double lo = lo_[static_cast<std::size_t>(j)];
      const double hi = hi_[static_cast<std::size_t>(j)];
      if (std::isfinite(lo)) {
        x_[static_cast<std::size_t>(j)] = lo;
        position_[static_cast<std::size_t>(j)] = Position::kLower;
      } else if (std::isfinite(hi)) {
        x_[static_cast<std::size_t>(j)] = hi;
        position_[static_cast<std::size_t>(j)] = Position::kUpper;
      } else {
        position_[static_cast<std::size_t>(j)] = Position::kFree;
      }
    }
    std::vector<double> residual = rhs_;
    for (int j = 0; j < n_; ++j) {
      const double xj = x_[static_cast<std::size_t>(j)];
      if (xj == 0.0) continue;
      for (const auto& [row, a] : columns_[static_cast<std::size_t>(j)]) {
        residual[static_cast<std::size_t>(row)] -= a * xj;
      }
    }
    basis_.assign(static_cast<std::size_t>(m_), -1);
    for (int i = 0; i < m_; ++i) {
      const int slack = n_ + i;
      const double r = residual[static_cast<std::size_t>(i)];
      const double lo = lo_[static_cast<std::size_t>(slack)];
      const double hi = hi_[static_cast<std::size_t>(slack)];
      if (r >= lo - options_.feasibility_tolerance && r <= hi + options_.feasibility_tolerance) {
        basis_[static_cast<std::size_t>(i)] = slack;
        position_[static_cast<std::size_t>(slack)] = Position::kBasic;
        x_[static_cast<std::size_t>(slack)] = r;
        continue;
      }
      // Slack parks at 0 (its only finite bound); an artificial absorbs r.
      position_[static_cast<std::size_t>(slack)] =
          std::isfinite(lo) ? Position::kLower : Position::kUpper;
      x_[static_cast<std::size_t>(slack)] = 0.0;
      const double sign = r > 0.0 ? 1.0 : -1.0;
      const int artificial = total_++;
      columns_.push_back({{i, sign}});
      lo_.push_back(0.0);
      hi_.push_back(kInfinity);
      x_.push_back(std::abs(r));
      position_.push_back(Position::kBasic);
      basis_[static_cast<std::size_t>(i)] = artificial;
    }
    artificial_begin_ = n_ + m_;
  }

  double& binv(int i, int k) {
    return binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)];
  }

  void refactor() {
    const std::size_t m = static_cast<std::size_t>(m_);
    std::vector<double> dense(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (const auto& [row, a] : columns_[static_cast<std::size_t>(basis_[r])]) {
        dense[static_cast<std::size_t>(row) * m + r] = a;
      }
    }
    binv_.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) binv_[i * m + i] = 1.0;
    // Gauss-Jordan with partial pivoting on [B | I].
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < m; ++r) {
        if (std::abs(dense[r * m + col]) > std::abs(dense[pivot * m + col])) pivot = r;
      }
      if (std::abs(dense[pivot * m + col]) < 1e-14) {
        throw SolverError("simplex basis became singular");
      }
      if (pivot != col) {
        for (std::size_t k = 0; k < m; ++k) {
          std::swap(dense[pivot * m + k], dense[col * m + k]);
          std::swap(binv_[pivot * m + k], binv_[col * m + k]);
        }
      }
      const double inv = 1.0 / dense[col * m + col];
      for (std::size_t k = 0; k < m; ++k) {
        dense[col * m + k] *= inv;
        binv_[col * m + k] *= inv;
      }
      for (std::size_t r = 0; r < m; ++r) {
        const double factor = dense[r * m + col];
        if (r == col || factor == 0.0) continue;
        for (std::size_t k = 0; k < m; ++k) {
          dense[r * m + k] -= factor * dense[col * m + k];
          binv_[r * m + k] -= factor * binv_[col * m + k];
        }
      }
    }
    // x_B = B^-1 (b - N x_N)
    std::vector<double> residual = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (position_[static_cast<std::size_t>(j)] == Position::kBasic) continue;
      const double xj = x_[static_cast<std::size_t>(j)];
      if (xj == 0.0) continue;
      for (const auto& [row, a] : columns_[static_cast<std::size_t>(j)]) {
        residual[static_cast<std::size_t>(row)] -= a * xj;
      }
    }
    for (int r = 0; r < m_; ++r) {
      double v = 0.0;
      for (int k = 0; k < m_; ++k) v += binv(r, k) * residual[static_cast<std::size_t>(k)];
      x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = v;
    }
    pivots_since_refactor_ = 0;
  }

  // Returns false if the phase objective is unbounded.
  bool iterate(const std::vector<double>& cost) {
    int stalled = 0;
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> alpha(static_cast<std::size_t>(m_));
    while (true) {
      if (iterations_ >= max_iterations_) {
        throw IterationLimitError("simplex iteration limit exceeded");
      }
      for (int k = 0; k < m_; ++k) {
        double v = 0.0;
        for (int r = 0; r < m_; ++r) {
          const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
          if (cb != 0.0) v += cb * binv(r, k);
        }
        y[static_cast<std::size_t>(k)] = v;
      }

      const bool bland = stalled >= options_.stall_threshold;
      int entering = -1;
      double entering_dir = 0.0;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        const Position pos = position_[static_cast<std::size_t>(j)];
        if (pos == Position::kBasic) continue;
        if (hi_[static_cast<std::size_t>(j)] - lo_[static_cast<std::size_t>(j)] <= 0.0) continue;
        double d = cost[static_cast<std::size_t>(j)];
        for (const auto& [row, a] : columns_[static_cast<std::size_t>(j)]) {
          d -= y[static_cast<std::size_t>(row)] * a;
        }
        double dir = 0.0;
        if (d > options_.optimality_tolerance && pos != Position::kUpper) dir = 1.0;
        if (d < -options_.optimality_tolerance && pos != Position::kLower) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          entering_dir = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          entering_dir = dir;
        }
      }
      if (entering < 0) return true;
      ++iterations_;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for (const auto& [row, a] : columns_[static_cast<std::size_t>(entering)]) {
        for (int r = 0; r < m_; ++r) alpha[static_cast<std::size_t>(r)] += binv(r, row) * a;
      }

      // Ratio test; ties go to the lowest variable index.
      const double span = hi_[static_cast<std::size_t>(entering)] - lo_[static_cast<std::size_t>(entering)];
      double step = span;
      int leaving_row = -1;
      bool leaving_to_upper = false;
      for (int r = 0; r < m_; ++r) {
        const double rate = entering_dir * alpha[static_cast<std::size_t>(r)];
        if (std::abs(rate) <= options_.pivot_tolerance) continue;
        const int var = basis_[static_cast<std::size_t>(r)];
        const double xb = x_[static_cast<std::size_t>(var)];
        double limit;
        bool to_upper;
        if (rate > 0.0) {
          const double lo = lo_[static_cast<std::size_t>(var)];
          if (!std::isfinite(lo)) continue;
          limit = std::max(0.0, (xb - lo) / rate);
          to_upper = false;
        } else {
          const double hi = hi_[static_cast<std::size_t>(var)];
          if (!std::isfinite(hi)) continue;
          limit = std::max(0.0, (hi - xb) / -rate);
          to_upper = true;
        }
        const bool better = limit < step - 1e-12 * std::max(1.0, step);
        const bool tie = !better && limit <= step + 1e-12 * std::max(1.0, step) && leaving_row >= 0 &&
                         var < basis_[static_cast<std::size_t>(leaving_row)];
        if (better || tie || (leaving_row < 0 && limit < step)) {
          step = limit;
          leaving_row = r;
          leaving_to_upper = to_upper;
        }
      }
      if (!std::isfinite(step)) return false;

      stalled = step <= 1e-12 ? stalled + 1 : 0;

      // Move entering variable and update the basic values.
      x_[static_cast<std::size_t>(entering)] += entering_dir * step;
      for (int r = 0; r < m_; ++r) {
        const double a = alpha[static_cast<std::size_t>(r)];
        if (a != 0.0) {
          x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] -= entering_dir * step * a;
        }
      }

      if (leaving_row < 0) {
        // Bound flip.
        const bool to_upper = entering_dir > 0.0;
        position_[static_cast<std::size_t>(entering)] = to_upper ? Position::kUpper : Position::kLower;
        x_[static_cast<std::size_t>(entering)] =
            to_upper ? hi_[static_cast<std::size_t>(entering)] : lo_[static_cast<std::size_t>(entering)];
        continue;
      }

      const int leaving = basis_[static_cast<std::size_t>(leaving_row)];
      position_[static_cast<std::size_t>(leaving)] = leaving_to_upper ? Position::kUpper : Position::kLower;
      x_[static_cast<std::size_t>(leaving)] =
          leaving_to_upper ? hi_[static_cast<std::size_t>(leaving)] : lo_[static_cast<std::size_t>(leaving)];
      basis_[static_cast<std::size_t>(leaving_row)] = entering;
      position_[static_cast<std::size_t>(entering)] = Position::kBasic;

      const double pivot = alpha[static_cast<std::size_t>(leaving_row)];
      for (int k = 0; k < m_; ++k) binv(leaving_row, k) /= pivot;
      for (int r = 0; r < m_; ++r) {
        const double a = alpha[static_cast<std::size_t>(r)];
        if (r == leaving_row || a == 0.0) continue;
        for (int k = 0; k < m_; ++k) binv(r, k) -= a * binv(leaving_row, k);
      }
      if (++pivots_since_refactor_ >= options_.refactor_interval) refactor();
    }
  }

  SimplexOptions options_;
  int m_;
  int n_;
  int total_ = 0;
  int artificial_begin_ = 0;
  int max_iterations_ = 0;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
  double objective_scale_ = 1.0;
  std::vector<SparseColumn> columns_;
  std::vector<double> rhs_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<Position> position_;
  std::vector<int> basis_;
  std::vector<double> binv_;
};

}  // namespace

VertexSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  BoundedSimplex simplex(lp, options);
  return simplex.run(lp);
}

double max_violation(const LinearProgram& lp, const std::vector<double>& values) {
  double worst = 0.0;
  for (int j = 0; j < lp.variable_count(); ++j) {
    const double v = values[static_cast<std::size_t>(j)];
    worst = std::max(worst, lp.lower[static_cast<std::size_t>(j)] - v);
    worst = std::max(worst, v - lp.upper[static_cast<std::size_t>(j)]);
  }
  for (const LinearRow& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [var, coef] : row.terms) lhs += coef * values[static_cast<std::size_t>(var)];
    const double gap = lhs - row.rhs;
    switch (row.relation) {
      case Relation::kLessEqual: worst = std::max(worst, gap); break;
      case Relation::kGreaterEqual: worst = std::max(worst, -gap); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

std::string to_lp_text(const LinearProgram& lp) {
  auto name = [&](int j) {
    const std::string& given = j < static_cast<int>(lp.names.size()) ? lp.names[static_cast<std::size_t>(j)]
                                                                      : std::string();
    return given.empty() ? "x" + std::to_string(j) : given;
  };
  auto term_list = [&](const std::vector<std::pair<int, double>>& terms) {
    std::ostringstream out;
    out.precision(17);
    bool first = true;
    for (const auto& [var, coef] : terms) {
      if (coef == 0.0) continue;
      out << (coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + ")) << std::abs(coef) << ' '
          << name(var);
      first = false;
    }
    if (first) out << '0';
    return out.str();
  };
  std::ostringstream out;
  out.precision(17);
  std::vector<std::pair<int, double>> objective;
  for (int j = 0; j < lp.variable_count(); ++j) objective.emplace_back(j, lp.objective[static_cast<std::size_t>(j)]);
  out << "Maximize\n obj: " << term_list(objective) << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const LinearRow& row = lp.rows[i];
    const char* rel = row.relation == Relation::kLessEqual ? "<=" : row.relation == Relation::kEqual ? "=" : ">=";
    out << " r" << i << ": " << term_list(row.terms) << ' ' << rel << ' ' << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.variable_count(); ++j) {
    out << ' ' << lp.lower[static_cast<std::size_t>(j)] << " <= " << name(j) << " <= "
        << lp.upper[static_cast<std::size_t>(j)] << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace broadbid

#include "evflex/solver/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <queue>

namespace evflex {

void check_config(const BnbConfig& c) {
  if (!(c.gap >= 0.0)) throw std::invalid_argument("gap must be non-negative");
  if (!(c.integrality_tolerance > 0.0 && c.integrality_tolerance < 0.5))
    throw std::invalid_argument("integrality tolerance must lie in (0, 0.5)");
  if (c.node_limit < 1) throw std::invalid_argument("node limit must be positive");
  if (!(c.time_limit_seconds >= 0.0)) throw std::invalid_argument("time limit must be non-negative");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr double kFloatSlack = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Applies per-binary bounds to the engine, touching only what changed.
class BinaryBounds {
 public:
  BinaryBounds(const MilpModel& model, lp::SimplexEngine& engine)
      : model_(model), engine_(engine), current_(model.binaries.size(), {0, 1}) {
    first_of_session_.assign(model.instance.sessions.size(), -1);
    for (std::size_t b = 0; b < model.binaries.size(); ++b) {
      auto& f = first_of_session_[model.binary_owner[b].first];
      if (f < 0) f = static_cast<int>(b);
    }
  }

  // fixes: (binary index, value). A 1 also zeroes the session's other segments.
  void apply(const std::vector<std::pair<int, int>>& fixes) {
    desired_.assign(model_.binaries.size(), {0, 1});
    for (auto [b, v] : fixes) {
      if (v == 1) {
        const int session = model_.binary_owner[b].first;
        for (int o = first_of_session_[session];
             o < static_cast<int>(model_.binaries.size()) && model_.binary_owner[o].first == session; ++o)
          if (o != b) desired_[o] = {0, 0};
        desired_[b] = {1, 1};
      } else {
        desired_[b] = {0, 0};
      }
    }
    for (std::size_t b = 0; b < desired_.size(); ++b) {
      if (desired_[b] == current_[b]) continue;
      engine_.set_column_bounds(model_.binaries[b], desired_[b].first, desired_[b].second);
      current_[b] = desired_[b];
    }
  }

 private:
  const MilpModel& model_;
  lp::SimplexEngine& engine_;
  std::vector<std::pair<int, int>> current_;
  std::vector<std::pair<int, int>> desired_;
  std::vector<int> first_of_session_;
};

SolveResult from_lp(const MilpModel& m, const std::vector<double>& primal) {
  const auto& inst = m.instance;
  SolveResult r;
  r.schedule = Schedule(static_cast<int>(inst.sessions.size()), inst.grid.num_slots);
  for (std::size_t n = 0; n < inst.sessions.size(); ++n) {
    const auto& s = inst.sessions[n];
    for (int t = s.arrival_slot; t <= s.departure_slot; ++t)
      r.schedule.at(static_cast<int>(n), t) =
          std::clamp(primal[m.sessions[n].power[t - s.arrival_slot]], 0.0, s.max_power_kw);
  }
  canonicalize(inst, r);
  return r;
}

struct Node {
  double bound = 0.0;
  std::int64_t id = 0;
  std::vector<std::pair<int, int>> fixes;
  std::shared_ptr<const lp::Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

}  // namespace

SolveResult solve(const MilpModel& model, const BnbConfig& config) {
  check_config(config);
  const auto t0 = Clock::now();
  const double prune_gap = std::max(config.gap, kFloatSlack);

  SolveResult best;
  double incumbent = kNegInf;
  if (config.greedy_start) {
    best = greedy_incumbent(model.instance);
    incumbent = best.objective;
  }
  auto offer = [&](SolveResult candidate) {
    if (candidate.objective > incumbent + kFloatSlack || !best.has_solution) {
      incumbent = candidate.objective;
      best = std::move(candidate);
    }
  };

  lp::SimplexEngine engine(model.program, config.lp);
  BinaryBounds bounds(model, engine);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> dive;
  std::int64_t next_id = 1;
  std::int64_t nodes = 0;
  double gap_pruned_bound = kNegInf;
  bool first_integral = false;
  bool limit_hit = false;
  bool infeasible_root = false;

  dive = Node{std::numeric_limits<double>::infinity(), 0, {}, nullptr};

  while (dive || !open.empty()) {
    if (nodes >= config.node_limit || seconds_since(t0) > config.time_limit_seconds) {
      limit_hit = true;
      break;
    }
    Node node;
    if (dive) {
      node = std::move(*dive);
      dive.reset();
    } else {
      node = open.top();
      open.pop();
    }
    if (node.bound <= incumbent + prune_gap) {
      if (node.bound > incumbent + kFloatSlack) gap_pruned_bound = std::max(gap_pruned_bound, node.bound);
      continue;
    }

    bounds.apply(node.fixes);
    lp::LpSolution sol;
    if (node.basis) {
      engine.load_basis(*node.basis);
      sol = engine.solve_dual();
    } else {
      sol = engine.solve_primal();
    }
    if (sol.status == lp::LpStatus::IterationLimit) {
      engine.reset_basis();
      sol = engine.solve_primal();
    }
    ++nodes;
    if (sol.status == lp::LpStatus::IterationLimit) {
      open.push(std::move(node));
      limit_hit = true;
      break;
    }
    if (sol.status == lp::LpStatus::Infeasible) {
      if (node.id == 0) infeasible_root = true;
      continue;
    }

    offer(from_lp(model, sol.primal));
    const double bound = sol.objective;

    // Branching candidate.
    int pick = -1;
    double pick_score = -1.0;
    for (std::size_t b = 0; b < model.binaries.size(); ++b) {
      const double v = sol.primal[model.binaries[b]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac <= config.integrality_tolerance) continue;
      if (config.branching == BranchRule::FirstFractional) {
        pick = static_cast<int>(b);
        break;
      }
      if (frac > pick_score) {
        pick_score = frac;
        pick = static_cast<int>(b);
      }
    }
    if (pick < 0) {
      first_integral = true;
      continue;
    }
    if (bound <= incumbent + prune_gap) {
      if (bound > incumbent + kFloatSlack) gap_pruned_bound = std::max(gap_pruned_bound, bound);
      continue;
    }

    auto basis = std::make_shared<const lp::Basis>(std::move(sol.basis));
    const bool up_first = sol.primal[model.binaries[pick]] >= 0.5;
    Node up{bound, 0, node.fixes, basis};
    up.fixes.emplace_back(pick, 1);
    Node down{bound, 0, std::move(node.fixes), basis};
    down.fixes.emplace_back(pick, 0);
    Node& preferred = up_first ? up : down;
    Node& other = up_first ? down : up;
    preferred.id = next_id++;
    other.id = next_id++;
    if (!first_integral) {
      dive = std::move(preferred);
    } else {
      open.push(std::move(preferred));
    }
    open.push(std::move(other));
  }

  if (infeasible_root && !best.has_solution) {
    best.status = SolveStatus::Infeasible;
  } else {
    double open_bound = kNegInf;
    if (dive) open_bound = std::max(open_bound, dive->bound);
    if (!open.empty()) open_bound = std::max(open_bound, open.top().bound);
    best.best_bound = std::max({incumbent, gap_pruned_bound, limit_hit ? open_bound : kNegInf});
    if (limit_hit) {
      best.status = SolveStatus::Limit;
    } else if (gap_pruned_bound > incumbent + kFloatSlack) {
      best.status = SolveStatus::GapReached;
    } else {
      best.status = SolveStatus::Optimal;
    }
    best.gap = best.has_solution ? best.best_bound - best.objective : std::numeric_limits<double>::infinity();
  }
  best.nodes = nodes;
  best.lp_iterations = engine.total_iterations();
  best.wall_seconds = seconds_since(t0);
  return best;
}

BudgetError::BudgetError(std::int64_t required, std::int64_t budget)
    : std::runtime_error("brute force needs " + std::to_string(required) + " LP solves, budget is " +
                         std::to_string(budget)),
      required_(required) {}

SolveResult brute_force(const Instance& instance, std::int64_t budget) {
  const auto t0 = Clock::now();
  const MilpModel model = build_model(instance);

  std::int64_t required = 1;
  bool overflow = false;
  for (const auto& s : instance.sessions) {
    const std::int64_t options = s.utility.segments() + 1;
    if (required > std::numeric_limits<std::int64_t>::max() / options) {
      overflow = true;
      break;
    }
    required *= options;
  }
  if (overflow) throw BudgetError(std::numeric_limits<std::int64_t>::max(), budget);
  if (required > budget) throw BudgetError(required, budget);

  lp::SimplexEngine engine(model.program);
  const std::size_t n_sessions = instance.sessions.size();
  std::vector<int> choice(n_sessions, 0);
  // Offset of each session's first binary.
  std::vector<int> first(n_sessions, 0);
  for (std::size_t n = 1; n < n_sessions; ++n) first[n] = first[n - 1] + instance.sessions[n - 1].utility.segments();

  SolveResult best;
  double best_lp = kNegInf;
  std::vector<double> best_primal;
  std::int64_t solves = 0;
  while (true) {
    for (std::size_t n = 0; n < n_sessions; ++n) {
      const int kappa = instance.sessions[n].utility.segments();
      for (int k = 1; k <= kappa; ++k) {
        const double v = choice[n] == k ? 1.0 : 0.0;
        engine.set_column_bounds(model.binaries[first[n] + k - 1], v, v);
      }
    }
    engine.reset_basis();
    auto sol = engine.solve_primal();
    ++solves;
    if (sol.status == lp::LpStatus::Optimal && sol.objective > best_lp) {
      best_lp = sol.objective;
      best_primal = std::move(sol.primal);
    }
    std::size_t n = 0;
    while (n < n_sessions && ++choice[n] > instance.sessions[n].utility.segments()) choice[n++] = 0;
    if (n == n_sessions) break;
  }

  if (best_primal.empty()) {
    best.status = SolveStatus::Infeasible;
  } else {
    best = from_lp(model, best_primal);
    best.status = SolveStatus::Optimal;
    best.best_bound = best.objective;
  }
  best.nodes = solves;
  best.lp_iterations = engine.total_iterations();
  best.wall_seconds = seconds_since(t0);
  return best;
}

}  // namespace evflex

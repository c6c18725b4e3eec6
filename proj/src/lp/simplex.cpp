#include "evflex/lp/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <span>
#include <stdexcept>

namespace evflex::lp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

std::mutex g_duality_mutex;
DualityStats g_duality;

void record_duality_gap(double gap) {
  std::lock_guard lock(g_duality_mutex);
  ++g_duality.checks;
  g_duality.worst_relative_gap = std::max(g_duality.worst_relative_gap, gap);
}

// LU of the basis matrix plus a product-form eta file for the updates since
// the last refactorization.
class BasisFactor {
 public:
  bool factorize(const CscMatrix& a, std::span<const int> head) {
    const int m = a.rows;
    triplets_.clear();
    for (int pos = 0; pos < m; ++pos) {
      const int v = head[pos];
      if (v < a.cols) {
        for (int p = a.start[v]; p < a.start[v + 1]; ++p) triplets_.emplace_back(a.index[p], pos, a.value[p]);
      } else {
        triplets_.emplace_back(v - a.cols, pos, -1.0);
      }
    }
    matrix_.resize(m, m);
    matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
    matrix_.makeCompressed();
    etas_.clear();
    size_ = m;
    if (m == 0) return true;
    lu_.compute(matrix_);
    return lu_.info() == Eigen::Success;
  }

  void ftran(std::vector<double>& v) const {
    if (size_ == 0) return;
    Eigen::Map<Eigen::VectorXd> vm(v.data(), size_);
    work_ = lu_.solve(vm);
    vm = work_;
    for (const auto& eta : etas_) {
      const double wr = v[eta.r] / eta.pivot;
      v[eta.r] = wr;
      if (wr == 0.0) continue;
      for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * wr;
    }
  }

  void btran(std::vector<double>& v) const {
    if (size_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->r];
      for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->r] = s / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> vm(v.data(), size_);
    work_ = lu_.transpose().solve(vm);
    vm = work_;
  }

  void update(int r, const std::vector<double>& alpha) {
    Eta eta;
    eta.r = r;
    eta.pivot = alpha[r];
    for (int i = 0; i < static_cast<int>(alpha.size()); ++i) {
      if (i == r || alpha[i] == 0.0) continue;
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
    etas_.push_back(std::move(eta));
  }

  [[nodiscard]] int num_updates() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int r = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  int size_ = 0;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> matrix_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  mutable Eigen::VectorXd work_;
  std::vector<Eta> etas_;
};

}  // namespace

class SimplexEngine::Impl {
 public:
  Impl(const LinearProgram& lp, SimplexOptions options) : options_(options) {
    lp.check_well_formed();
    m_ = lp.num_rows();
    n_ = lp.num_columns();
    const int total = n_ + m_;

    std::vector<int> counts(n_, 0);
    for (const auto& row : lp.rows())
      for (const auto& t : row.terms) ++counts[t.column];
    a_.rows = m_;
    a_.cols = n_;
    a_.start.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) a_.start[j + 1] = a_.start[j] + counts[j];
    a_.index.resize(a_.start[n_]);
    a_.value.resize(a_.start[n_]);
    std::vector<int> fill(a_.start.begin(), a_.start.end() - 1);
    for (int i = 0; i < m_; ++i) {
      for (const auto& t : lp.row(i).terms) {
        if (t.coefficient == 0.0) continue;
        a_.index[fill[t.column]] = i;
        a_.value[fill[t.column]] = t.coefficient;
        ++fill[t.column];
      }
    }
    // Zero coefficients were skipped; compact the columns.
    {
      int out = 0;
      std::vector<int> new_start(n_ + 1, 0);
      for (int j = 0; j < n_; ++j) {
        new_start[j] = out;
        for (int p = a_.start[j]; p < fill[j]; ++p) {
          a_.index[out] = a_.index[p];
          a_.value[out] = a_.value[p];
          ++out;
        }
      }
      new_start[n_] = out;
      a_.start = std::move(new_start);
      a_.index.resize(out);
      a_.value.resize(out);
    }

    lower_.resize(total);
    upper_.resize(total);
    cost_.assign(total, 0.0);
    user_cost_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = lp.column(j).lower;
      upper_[j] = lp.column(j).upper;
      user_cost_[j] = lp.column(j).objective;
      cost_[j] = -user_cost_[j];
    }
    for (int i = 0; i < m_; ++i) {
      lower_[n_ + i] = lp.row(i).lower;
      upper_[n_ + i] = lp.row(i).upper;
    }
    base_lower_.assign(lower_.begin(), lower_.begin() + n_);
    base_upper_.assign(upper_.begin(), upper_.begin() + n_);

    x_.assign(total, 0.0);
    status_.assign(total, VarStatus::AtLower);
    head_.assign(m_, 0);
    pi_.assign(m_, 0.0);
    cb_.assign(m_, 0.0);
    d_.assign(total, 0.0);
    alpha_.assign(m_, 0.0);
    rho_.assign(m_, 0.0);
    row_alpha_.assign(total, 0.0);
    reset_basis();
  }

  void reset_basis() {
    for (int j = 0; j < n_; ++j) {
      status_[j] = VarStatus::AtLower;
      x_[j] = lower_[j];
    }
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      status_[n_ + i] = VarStatus::Basic;
    }
    need_refactor_ = true;
  }

  void load_basis(const Basis& basis) {
    if (basis.status.size() != status_.size() || basis.head.size() != head_.size())
      throw std::invalid_argument("basis does not match the program dimensions");
    status_ = basis.status;
    head_ = basis.head;
    for (int v = 0; v < n_ + m_; ++v)
      if (status_[v] != VarStatus::Basic) place_nonbasic(v, status_[v]);
    need_refactor_ = true;
  }

  [[nodiscard]] Basis basis() const { return {status_, head_}; }

  void set_column_bounds(int j, double lo, double hi) {
    if (j < 0 || j >= n_) throw std::out_of_range("column index");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) throw std::invalid_argument("invalid column bounds");
    lower_[j] = lo;
    upper_[j] = hi;
    if (status_[j] != VarStatus::Basic) {
      place_nonbasic(j, status_[j]);
      need_primal_ = true;
    }
  }

  void reset_column_bounds() {
    for (int j = 0; j < n_; ++j) set_column_bounds(j, base_lower_[j], base_upper_[j]);
  }

  [[nodiscard]] double column_lower(int j) const { return lower_.at(j); }
  [[nodiscard]] double column_upper(int j) const { return upper_.at(j); }
  [[nodiscard]] std::int64_t total_iterations() const { return total_iterations_; }

  LpSolution solve_primal() {
    prepare();
    std::int64_t iterations = 0;
    int degenerate_run = 0;
    bool bland = false;
    while (true) {
      if (iterations >= options_.max_iterations) return finish(LpStatus::IterationLimit, iterations);
      if (factor_.num_updates() >= options_.refactor_interval) refresh();

      const bool phase1 = load_phase_costs();
      compute_duals(phase1);
      const int q = bland ? bland_select() : dantzig_select();
      if (q < 0) {
        if (factor_.num_updates() > 0) {
          refresh();
          continue;
        }
        return finish(phase1 ? LpStatus::Infeasible : LpStatus::Optimal, iterations);
      }

      load_column(q);
      factor_.ftran(alpha_);
      const int dir = status_[q] == VarStatus::AtLower ? 1 : -1;
      const Ratio ratio = primal_ratio(q, dir, bland);
      if (ratio.pos < 0 && !ratio.flip) {
        // Unbounded direction: impossible with boxed columns unless numerics
        // went wrong. Refactor and retry once; then give up.
        if (factor_.num_updates() > 0) {
          refresh();
          continue;
        }
        throw std::runtime_error("simplex: unbounded ray in a bounded program");
      }

      apply_primal_step(q, dir, ratio);
      ++iterations;
      ++total_iterations_;
      if (ratio.theta <= 1e-12) {
        if (++degenerate_run >= options_.bland_after) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  LpSolution solve_dual() {
    prepare();
    std::int64_t iterations = 0;
    int trouble = 0;
    while (true) {
      if (iterations >= options_.max_iterations) return finish(LpStatus::IterationLimit, iterations);
      if (factor_.num_updates() >= options_.refactor_interval) refresh();

      load_phase2_costs();
      compute_duals(false);
      bool flipped = false;
      for (int v = 0; v < n_ + m_; ++v) {
        const VarStatus s = status_[v];
        if (s == VarStatus::Basic || lower_[v] == upper_[v]) continue;
        const double dv = d_[v];
        if (s == VarStatus::AtLower && dv < -options_.optimality_tolerance) {
          if (!std::isfinite(upper_[v])) return fall_back_to_primal(iterations);
          place_nonbasic(v, VarStatus::AtUpper);
          flipped = true;
        } else if (s == VarStatus::AtUpper && dv > options_.optimality_tolerance) {
          if (!std::isfinite(lower_[v])) return fall_back_to_primal(iterations);
          place_nonbasic(v, VarStatus::AtLower);
          flipped = true;
        }
      }
      if (flipped) recompute_primal();

      const int r = dual_leaving_row();
      if (r < 0) {
        if (factor_.num_updates() > 0) {
          refresh();
          continue;
        }
        return finish(LpStatus::Optimal, iterations);
      }

      const int leaving = head_[r];
      const bool to_lower = x_[leaving] < lower_[leaving];
      const double target = to_lower ? lower_[leaving] : upper_[leaving];

      std::fill(rho_.begin(), rho_.end(), 0.0);
      rho_[r] = 1.0;
      factor_.btran(rho_);
      compute_row(rho_);

      const int q = dual_entering(to_lower);
      if (q < 0) {
        infeasibility_multipliers_ = rho_;
        return finish(LpStatus::Infeasible, iterations);
      }

      load_column(q);
      factor_.ftran(alpha_);
      const double pivot = alpha_[r];
      if (std::abs(pivot) <= options_.pivot_tolerance ||
          std::abs(pivot - row_alpha_[q]) > 1e-6 * (1.0 + std::abs(pivot))) {
        if (++trouble > 5) return fall_back_to_primal(iterations);
        refresh();
        continue;
      }

      const double delta = (x_[leaving] - target) / pivot;
      for (int pos = 0; pos < m_; ++pos)
        if (alpha_[pos] != 0.0) x_[head_[pos]] -= alpha_[pos] * delta;
      x_[q] += delta;
      x_[leaving] = target;
      status_[leaving] = to_lower ? VarStatus::AtLower : VarStatus::AtUpper;
      head_[r] = q;
      status_[q] = VarStatus::Basic;
      factor_.update(r, alpha_);
      ++iterations;
      ++total_iterations_;
    }
  }

 private:
  struct Ratio {
    int pos = -1;
    double theta = 0.0;
    bool flip = false;
    bool to_lower = true;
  };

  void place_nonbasic(int v, VarStatus preferred) {
    VarStatus s = preferred;
    if (s == VarStatus::AtLower && !std::isfinite(lower_[v])) s = VarStatus::AtUpper;
    if (s == VarStatus::AtUpper && !std::isfinite(upper_[v])) s = VarStatus::AtLower;
    status_[v] = s;
    x_[v] = s == VarStatus::AtUpper ? upper_[v] : lower_[v];
  }

  void prepare() {
    if (need_refactor_) {
      refresh();
    } else if (need_primal_) {
      recompute_primal();
    }
    need_refactor_ = false;
    need_primal_ = false;
    infeasibility_multipliers_.clear();
  }

  void refresh() {
    if (!factor_.factorize(a_, head_)) {
      // Singular basis: restart from the logical basis, which is always
      // nonsingular. Nonbasic columns keep their current bound.
      for (int pos = 0; pos < m_; ++pos) {
        const int v = head_[pos];
        if (v < n_) {
          const double mid = 0.5 * (lower_[v] + upper_[v]);
          place_nonbasic(v, x_[v] > mid ? VarStatus::AtUpper : VarStatus::AtLower);
        }
      }
      for (int i = 0; i < m_; ++i) {
        head_[i] = n_ + i;
        status_[n_ + i] = VarStatus::Basic;
      }
      if (!factor_.factorize(a_, head_)) throw std::runtime_error("simplex: logical basis failed to factorize");
    }
    recompute_primal();
  }

  void recompute_primal() {
    std::vector<double>& rhs = alpha_;
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
      for (int p = a_.start[j]; p < a_.start[j + 1]; ++p) rhs[a_.index[p]] -= a_.value[p] * x_[j];
    }
    for (int i = 0; i < m_; ++i)
      if (status_[n_ + i] != VarStatus::Basic) rhs[i] += x_[n_ + i];
    factor_.ftran(rhs);
    for (int pos = 0; pos < m_; ++pos) x_[head_[pos]] = rhs[pos];
  }

  // Phase-1 costs penalize the basic infeasibilities; returns whether any
  // basic variable is outside its bounds.
  bool load_phase_costs() {
    const double tol = options_.feasibility_tolerance;
    bool infeasible = false;
    for (int pos = 0; pos < m_; ++pos) {
      const int v = head_[pos];
      double c = 0.0;
      if (x_[v] < lower_[v] - tol) {
        c = -1.0;
      } else if (x_[v] > upper_[v] + tol) {
        c = 1.0;
      }
      if (c != 0.0) infeasible = true;
      cb_[pos] = c;
    }
    if (!infeasible) load_phase2_costs();
    return infeasible;
  }

  void load_phase2_costs() {
    for (int pos = 0; pos < m_; ++pos) cb_[pos] = cost_[head_[pos]];
  }

  void compute_duals(bool phase1) {
    pi_ = cb_;
    factor_.btran(pi_);
    std::span<double> structural(d_.data(), n_);
    if (options_.parallel_kernels) {
      kernels::transpose_product_parallel(a_, pi_, structural);
    } else {
      kernels::transpose_product_serial(a_, pi_, structural);
    }
    for (int j = 0; j < n_; ++j) d_[j] = (phase1 ? 0.0 : cost_[j]) - d_[j];
    for (int i = 0; i < m_; ++i) d_[n_ + i] = pi_[i];
    for (int pos = 0; pos < m_; ++pos) d_[head_[pos]] = 0.0;
  }

  void compute_row(const std::vector<double>& rho) {
    std::span<double> structural(row_alpha_.data(), n_);
    if (options_.parallel_kernels) {
      kernels::transpose_product_parallel(a_, rho, structural);
    } else {
      kernels::transpose_product_serial(a_, rho, structural);
    }
    for (int i = 0; i < m_; ++i) row_alpha_[n_ + i] = -rho[i];
  }

  int dantzig_select() const {
    const double tol = options_.optimality_tolerance;
    if (options_.parallel_kernels) return kernels::dantzig_select_parallel(d_, status_, lower_, upper_, tol);
    return kernels::dantzig_select_serial(d_, status_, lower_, upper_, tol);
  }

  int bland_select() const {
    const double tol = options_.optimality_tolerance;
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == VarStatus::Basic || lower_[v] == upper_[v]) continue;
      if (status_[v] == VarStatus::AtLower && d_[v] < -tol) return v;
      if (status_[v] == VarStatus::AtUpper && d_[v] > tol) return v;
    }
    return -1;
  }

  void load_column(int v) {
    std::fill(alpha_.begin(), alpha_.end(), 0.0);
    if (v < n_) {
      for (int p = a_.start[v]; p < a_.start[v + 1]; ++p) alpha_[a_.index[p]] = a_.value[p];
    } else {
      alpha_[v - n_] = -1.0;
    }
  }

  Ratio primal_ratio(int q, int dir, bool bland) {
    const double tol = options_.feasibility_tolerance;
    const double piv = options_.pivot_tolerance;
    // Per position: distance to the blocking bound and its side; negative
    // distance marks a non-blocking position.
    auto blocking = [&](int pos, double& dist, bool& to_lower, double& rate) {
      const double a = alpha_[pos];
      if (std::abs(a) <= piv) return false;
      rate = -dir * a;
      const int v = head_[pos];
      const double xv = x_[v];
      const double lo = lower_[v];
      const double hi = upper_[v];
      if (xv < lo - tol) {
        if (rate <= 0.0) return false;
        dist = lo - xv;
        to_lower = true;
        return true;
      }
      if (xv > hi + tol) {
        if (rate >= 0.0) return false;
        dist = xv - hi;
        to_lower = false;
        return true;
      }
      if (rate < 0.0 && std::isfinite(lo)) {
        dist = std::max(0.0, xv - lo);
        to_lower = true;
        return true;
      }
      if (rate > 0.0 && std::isfinite(hi)) {
        dist = std::max(0.0, hi - xv);
        to_lower = false;
        return true;
      }
      return false;
    };

    Ratio best;
    double dist = 0.0;
    double rate = 0.0;
    bool to_lower = true;
    if (bland) {
      double best_theta = kInfinity;
      int best_var = -1;
      for (int pos = 0; pos < m_; ++pos) {
        if (!blocking(pos, dist, to_lower, rate)) continue;
        const double theta = dist / std::abs(rate);
        const int v = head_[pos];
        if (theta < best_theta - 1e-12 || (theta <= best_theta + 1e-12 && v < best_var)) {
          best_theta = std::min(theta, best_theta);
          best_var = v;
          best.pos = pos;
          best.to_lower = to_lower;
        }
      }
      best.theta = best.pos >= 0 ? best_theta : kInfinity;
    } else {
      double theta_max = kInfinity;
      for (int pos = 0; pos < m_; ++pos) {
        if (!blocking(pos, dist, to_lower, rate)) continue;
        theta_max = std::min(theta_max, (dist + tol) / std::abs(rate));
      }
      double best_alpha = 0.0;
      int best_var = -1;
      for (int pos = 0; pos < m_; ++pos) {
        if (!blocking(pos, dist, to_lower, rate)) continue;
        const double theta = dist / std::abs(rate);
        if (theta > theta_max) continue;
        const double mag = std::abs(alpha_[pos]);
        const int v = head_[pos];
        if (mag > best_alpha || (mag == best_alpha && v < best_var)) {
          best_alpha = mag;
          best_var = v;
          best.pos = pos;
          best.theta = theta;
          best.to_lower = to_lower;
        }
      }
      if (best.pos < 0) best.theta = kInfinity;
    }

    const double span = upper_[q] - lower_[q];
    if (std::isfinite(span) && span <= best.theta) {
      best.flip = true;
      best.theta = span;
    }
    return best;
  }

  void apply_primal_step(int q, int dir, const Ratio& ratio) {
    const double theta = ratio.theta;
    if (theta != 0.0) {
      for (int pos = 0; pos < m_; ++pos)
        if (alpha_[pos] != 0.0) x_[head_[pos]] -= dir * alpha_[pos] * theta;
    }
    if (ratio.flip) {
      place_nonbasic(q, status_[q] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower);
      return;
    }
    x_[q] += dir * theta;
    const int leaving = head_[ratio.pos];
    place_nonbasic(leaving, ratio.to_lower ? VarStatus::AtLower : VarStatus::AtUpper);
    head_[ratio.pos] = q;
    status_[q] = VarStatus::Basic;
    factor_.update(ratio.pos, alpha_);
  }

  int dual_leaving_row() const {
    const double tol = options_.feasibility_tolerance;
    int best = -1;
    double worst = 0.0;
    int best_var = -1;
    for (int pos = 0; pos < m_; ++pos) {
      const int v = head_[pos];
      double infeas = 0.0;
      if (x_[v] < lower_[v] - tol) {
        infeas = lower_[v] - x_[v];
      } else if (x_[v] > upper_[v] + tol) {
        infeas = x_[v] - upper_[v];
      }
      if (infeas > worst || (infeas > 0.0 && infeas == worst && v < best_var)) {
        worst = infeas;
        best = pos;
        best_var = v;
      }
    }
    return best;
  }

  int dual_entering(bool leaving_to_lower) const {
    const double piv = options_.pivot_tolerance;
    const double tol = options_.optimality_tolerance;
    auto eligible = [&](int v) {
      if (status_[v] == VarStatus::Basic || lower_[v] == upper_[v]) return false;
      const double a = row_alpha_[v];
      if (std::abs(a) <= piv) return false;
      if (leaving_to_lower) return status_[v] == VarStatus::AtLower ? a < 0.0 : a > 0.0;
      return status_[v] == VarStatus::AtLower ? a > 0.0 : a < 0.0;
    };
    double theta_max = kInfinity;
    for (int v = 0; v < n_ + m_; ++v) {
      if (!eligible(v)) continue;
      theta_max = std::min(theta_max, (std::abs(d_[v]) + tol) / std::abs(row_alpha_[v]));
    }
    int best = -1;
    double best_alpha = 0.0;
    for (int v = 0; v < n_ + m_; ++v) {
      if (!eligible(v)) continue;
      const double ratio = std::abs(d_[v]) / std::abs(row_alpha_[v]);
      if (ratio > theta_max) continue;
      const double mag = std::abs(row_alpha_[v]);
      if (mag > best_alpha) {
        best_alpha = mag;
        best = v;
      }
    }
    return best;
  }

  LpSolution fall_back_to_primal(std::int64_t iterations_so_far) {
    need_refactor_ = true;
    LpSolution s = solve_primal();
    s.iterations += iterations_so_far;
    return s;
  }

  LpSolution finish(LpStatus status, std::int64_t iterations) {
    LpSolution s;
    s.status = status;
    s.iterations = iterations;
    s.primal.assign(x_.begin(), x_.begin() + n_);
    s.row_activity.assign(x_.begin() + n_, x_.end());
    s.objective = 0.0;
    for (int j = 0; j < n_; ++j) s.objective += user_cost_[j] * x_[j];
    s.basis = basis();

    if (status == LpStatus::Infeasible) {
      const std::vector<double>& mult = infeasibility_multipliers_.empty() ? pi_ : infeasibility_multipliers_;
      for (int i = 0; i < m_; ++i)
        if (std::abs(mult[i]) > 1e-9) s.infeasible_rows.push_back(i);
      return s;
    }
    if (status != LpStatus::Optimal) return s;

    load_phase2_costs();
    compute_duals(false);
    s.row_duals.resize(m_);
    s.reduced_costs.resize(n_);
    for (int i = 0; i < m_; ++i) s.row_duals[i] = -pi_[i];
    for (int j = 0; j < n_; ++j) s.reduced_costs[j] = -d_[j];

    // Dual objective of the minimization form, taking each reduced cost at
    // the bound its sign selects.
    const double tol = 1e-7;
    double dual = 0.0;
    for (int v = 0; v < n_ + m_; ++v) {
      const double dv = d_[v];
      if (std::abs(dv) <= 1e-13) continue;
      const double bound = dv > 0.0 ? lower_[v] : upper_[v];
      if (!std::isfinite(bound)) {
        if (std::abs(dv) <= tol) continue;
        dual = -kInfinity;
        break;
      }
      dual += dv * bound;
    }
    s.dual_objective = -dual;
    const double gap = std::abs(s.objective - s.dual_objective) / std::max(1.0, std::abs(s.objective));
    record_duality_gap(std::isfinite(gap) ? gap : kInfinity);
    return s;
  }

  SimplexOptions options_;
  int m_ = 0;
  int n_ = 0;
  CscMatrix a_;
  std::vector<double> lower_, upper_, cost_, user_cost_;
  std::vector<double> base_lower_, base_upper_;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  BasisFactor factor_;
  bool need_refactor_ = true;
  bool need_primal_ = false;
  std::int64_t total_iterations_ = 0;

  std::vector<double> pi_, cb_, d_, alpha_, rho_, row_alpha_;
  std::vector<double> infeasibility_multipliers_;
};

SimplexEngine::SimplexEngine(const LinearProgram& lp, SimplexOptions options)
    : impl_(std::make_unique<Impl>(lp, options)) {}
SimplexEngine::~SimplexEngine() = default;
SimplexEngine::SimplexEngine(SimplexEngine&&) noexcept = default;
SimplexEngine& SimplexEngine::operator=(SimplexEngine&&) noexcept = default;

void SimplexEngine::set_column_bounds(int column, double lower, double upper) {
  impl_->set_column_bounds(column, lower, upper);
}
void SimplexEngine::reset_column_bounds() { impl_->reset_column_bounds(); }
double SimplexEngine::column_lower(int column) const { return impl_->column_lower(column); }
double SimplexEngine::column_upper(int column) const { return impl_->column_upper(column); }
void SimplexEngine::load_basis(const Basis& basis) { impl_->load_basis(basis); }
void SimplexEngine::reset_basis() { impl_->reset_basis(); }
Basis SimplexEngine::basis() const { return impl_->basis(); }
LpSolution SimplexEngine::solve_primal() { return impl_->solve_primal(); }
LpSolution SimplexEngine::solve_dual() { return impl_->solve_dual(); }
std::int64_t SimplexEngine::total_iterations() const { return impl_->total_iterations(); }

LpSolution solve_lp(const LinearProgram& lp, std::int64_t max_iters) {
  SimplexOptions options;
  options.max_iterations = max_iters;
  return solve_lp(lp, options);
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  SimplexEngine engine(lp, options);
  return engine.solve_primal();
}

DualityStats duality_stats() {
  std::lock_guard lock(g_duality_mutex);
  return g_duality;
}

void reset_duality_stats() {
  std::lock_guard lock(g_duality_mutex);
  g_duality = {};
}

}  // namespace evflex::lp

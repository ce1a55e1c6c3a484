#include "drmpc/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace drmpc {

namespace {

constexpr double kPivotTol = 1e-8;      // smallest ratio-test pivot magnitude
constexpr double kSingularTol = 1e-11;  // refactorization pivot floor
constexpr double kDropTol = 1e-13;      // eta entries below this are dropped
constexpr double kRatioTieTol = 1e-9;
constexpr int kRefactorInterval = 100;
constexpr int kStallLimit = 400;  // degenerate pivots before switching to Bland

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, FreeAtZero };

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Product-form basis inverse: a sequence of Gauss-Jordan eta transforms.
class EtaFile {
 public:
  void clear() {
    etas_.clear();
    rows_.clear();
    vals_.clear();
  }

  long entry_count() const { return static_cast<long>(rows_.size()); }

  // `spike` holds the transformed column, `touched` its (deduplicated)
  // support; entries other than the pivot row are copied into the file.
  void add(int pivot_row, const std::vector<double>& spike, const std::vector<int>& touched) {
    Eta eta;
    eta.pivot_row = pivot_row;
    eta.pivot_val = spike[pivot_row];
    eta.start = static_cast<int>(rows_.size());
    for (int r : touched) {
      if (r == pivot_row) continue;
      const double v = spike[r];
      if (std::abs(v) <= kDropTol) continue;
      rows_.push_back(r);
      vals_.push_back(v);
    }
    eta.end = static_cast<int>(rows_.size());
    etas_.push_back(eta);
  }

  // v := B^{-1} v. Newly touched positions are appended to `touched`;
  // the caller must deduplicate before using it as a support list.
  void ftran(std::vector<double>& v, std::vector<int>& touched) const {
    for (const Eta& e : etas_) {
      double t = v[e.pivot_row];
      if (t == 0.0) continue;
      t /= e.pivot_val;
      v[e.pivot_row] = t;
      for (int k = e.start; k < e.end; ++k) {
        double& cell = v[rows_[k]];
        if (cell == 0.0) touched.push_back(rows_[k]);
        cell -= vals_[k] * t;
      }
    }
  }

  // y := B^{-T} y, dense.
  void btran(std::vector<double>& y) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = y[it->pivot_row];
      for (int k = it->start; k < it->end; ++k) acc -= vals_[k] * y[rows_[k]];
      y[it->pivot_row] = acc / it->pivot_val;
    }
  }

 private:
  struct Eta {
    int pivot_row = 0;
    double pivot_val = 1.0;
    int start = 0;
    int end = 0;
  };
  std::vector<Eta> etas_;
  std::vector<int> rows_;
  std::vector<double> vals_;
};

class Simplex {
 public:
  Simplex(const LpProblem& problem, const SolverOptions& options)
      : options_(options), m_(problem.num_rows()), nstruct_(problem.num_vars()) {
    build_columns(problem);
    rhs_.assign(problem.row_rhs.begin(), problem.row_rhs.end());
    work_.assign(m_, 0.0);
    price_.assign(m_, 0.0);
    max_iterations_ = options.max_iterations > 0
                          ? options.max_iterations
                          : std::max<long>(1000, 50L * (nstruct_ + m_));
  }

  LpSolution run(const LpProblem& problem) {
    LpSolution result;
    set_default_start();

    bool started_from_hint = false;
    if (options_.basis_hint) started_from_hint = try_hint_start(*options_.basis_hint);
    if (!started_from_hint) {
      set_default_start();
      install_slack_basis();
      if (needs_phase1()) {
        add_artificials();
        phase1_ = true;
        const SolveStatus st = iterate();
        if (st != SolveStatus::Optimal) {
          throw std::runtime_error("phase 1 terminated abnormally");
        }
        double infeasibility = 0.0;
        for (int j = first_artificial_; j < ncols_; ++j) infeasibility += x_[j];
        if (infeasibility > options_.feasibility_tol) {
          result.status = SolveStatus::Infeasible;
          result.iterations = iterations_;
          return result;
        }
        retire_artificials();
      }
    }

    phase1_ = false;
    const SolveStatus st = iterate();
    result.status = st;
    result.iterations = iterations_;
    if (st == SolveStatus::Optimal) {
      refresh_basis();
      result.values.assign(x_.begin(), x_.begin() + nstruct_);
      double obj = problem.objective_constant;
      for (int j = 0; j < nstruct_; ++j) obj += cost_[j] * x_[j];
      result.objective = obj;
    }
    return result;
  }

 private:
  // --- setup ---------------------------------------------------------------

  void build_columns(const LpProblem& problem) {
    ncols_ = nstruct_ + m_;
    first_artificial_ = ncols_;
    col_starts_.assign(ncols_ + 1, 0);
    std::vector<int> counts(nstruct_, 0);
    for (int c : problem.row_cols) counts[c]++;
    for (int j = 0; j < nstruct_; ++j) col_starts_[j + 1] = col_starts_[j] + counts[j];
    for (int j = nstruct_; j < ncols_; ++j) col_starts_[j + 1] = col_starts_[j] + 1;
    col_rows_.resize(col_starts_[ncols_]);
    col_vals_.resize(col_starts_[ncols_]);
    std::vector<int> fill(col_starts_.begin(), col_starts_.begin() + nstruct_);
    for (int i = 0; i < m_; ++i) {
      for (int k = problem.row_starts[i]; k < problem.row_starts[i + 1]; ++k) {
        const int j = problem.row_cols[k];
        col_rows_[fill[j]] = i;
        col_vals_[fill[j]] = problem.row_coefs[k];
        fill[j]++;
      }
    }
    for (int i = 0; i < m_; ++i) {
      col_rows_[col_starts_[nstruct_ + i]] = i;
      col_vals_[col_starts_[nstruct_ + i]] = 1.0;
    }

    lo_.assign(problem.lower.begin(), problem.lower.end());
    up_.assign(problem.upper.begin(), problem.upper.end());
    cost_.assign(problem.objective.begin(), problem.objective.end());
    lo_.resize(ncols_);
    up_.resize(ncols_);
    cost_.resize(ncols_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const int j = nstruct_ + i;
      switch (problem.row_sense[i]) {
        case RowSense::LessEqual:
          lo_[j] = 0.0;
          up_[j] = kInfinity;
          break;
        case RowSense::Equal:
          lo_[j] = 0.0;
          up_[j] = 0.0;
          break;
        case RowSense::GreaterEqual:
          lo_[j] = -kInfinity;
          up_[j] = 0.0;
          break;
      }
    }
  }

  void set_default_start() {
    x_.assign(ncols_, 0.0);
    stat_.assign(ncols_, VarStatus::AtLower);
    for (int j = 0; j < ncols_; ++j) {
      if (lo_[j] > -kInfinity) {
        stat_[j] = VarStatus::AtLower;
        x_[j] = lo_[j];
      } else if (up_[j] < kInfinity) {
        stat_[j] = VarStatus::AtUpper;
        x_[j] = up_[j];
      } else {
        stat_[j] = VarStatus::FreeAtZero;
        x_[j] = 0.0;
      }
    }
  }

  void install_slack_basis() {
    basic_var_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basic_var_[i] = nstruct_ + i;
      stat_[nstruct_ + i] = VarStatus::Basic;
    }
    if (!refactor()) throw std::runtime_error("slack basis factorization failed");
    recompute_basics();
  }

  bool needs_phase1() const {
    for (int i = 0; i < m_; ++i) {
      const int j = basic_var_[i];
      if (x_[j] < lo_[j] - options_.feasibility_tol ||
          x_[j] > up_[j] + options_.feasibility_tol) {
        return true;
      }
    }
    return false;
  }

  // One artificial column per violated row; it absorbs the violation so the
  // starting point is basic feasible for the phase-1 objective.
  void add_artificials() {
    for (int i = 0; i < m_; ++i) {
      const int j = basic_var_[i];
      double excess = 0.0;
      if (x_[j] > up_[j]) {
        excess = x_[j] - up_[j];
        x_[j] = up_[j];
        stat_[j] = VarStatus::AtUpper;
      } else if (x_[j] < lo_[j]) {
        excess = x_[j] - lo_[j];
        x_[j] = lo_[j];
        stat_[j] = VarStatus::AtLower;
      } else {
        continue;
      }
      const int art = ncols_;
      col_starts_.push_back(col_starts_.back() + 1);
      col_rows_.push_back(i);
      col_vals_.push_back(excess >= 0.0 ? 1.0 : -1.0);
      lo_.push_back(0.0);
      up_.push_back(kInfinity);
      cost_.push_back(0.0);
      x_.push_back(std::abs(excess));
      stat_.push_back(VarStatus::Basic);
      basic_var_[i] = art;
      ncols_ = art + 1;
    }
    if (!refactor()) throw std::runtime_error("phase-1 basis factorization failed");
    recompute_basics();
  }

  void retire_artificials() {
    for (int j = first_artificial_; j < ncols_; ++j) {
      lo_[j] = 0.0;
      up_[j] = 0.0;
      if (stat_[j] != VarStatus::Basic) {
        stat_[j] = VarStatus::AtLower;
        x_[j] = 0.0;
      }
    }
  }

  bool try_hint_start(const std::vector<int>& hint) {
    if (static_cast<int>(hint.size()) != m_) return false;
    std::vector<char> used(ncols_, 0);
    for (int j : hint) {
      if (j < 0 || j >= ncols_ || used[j]) return false;
      used[j] = 1;
    }
    basic_var_ = hint;
    for (int i = 0; i < m_; ++i) stat_[basic_var_[i]] = VarStatus::Basic;
    if (!refactor()) return false;
    recompute_basics();
    return !needs_phase1();
  }

  // --- factorization -------------------------------------------------------

  // Rebuilds the eta file from the current basis. The pivot order comes from
  // two-ended peeling (row singletons to the front, column singletons to the
  // back); leftover "bump" columns pivot on their largest usable spike entry,
  // chosen when the spike is computed.
  bool refactor() {
    etas_.clear();
    if (m_ == 0) {
      base_eta_entries_ = 0;
      return true;
    }

    // basis pattern, column-wise and row-wise (flat CSR layout)
    std::vector<int> bc_starts(m_ + 1, 0), br_starts(m_ + 2, 0);
    for (int p = 0; p < m_; ++p) {
      const int j = basic_var_[p];
      bc_starts[p + 1] = bc_starts[p] + (col_starts_[j + 1] - col_starts_[j]);
      for (int k = col_starts_[j]; k < col_starts_[j + 1]; ++k) {
        br_starts[col_rows_[k] + 2]++;
      }
    }
    const int nnz = bc_starts[m_];
    std::vector<int> bc_rows(nnz);
    std::vector<double> bc_vals(nnz);
    for (int i = 0; i < m_; ++i) br_starts[i + 2] += br_starts[i + 1];
    std::vector<int> br_cols(nnz);
    for (int p = 0; p < m_; ++p) {
      const int j = basic_var_[p];
      int out = bc_starts[p];
      for (int k = col_starts_[j]; k < col_starts_[j + 1]; ++k) {
        bc_rows[out] = col_rows_[k];
        bc_vals[out] = col_vals_[k];
        out++;
        br_cols[br_starts[col_rows_[k] + 1]++] = p;
      }
    }

    std::vector<int> row_cnt(m_, 0), col_cnt(m_, 0);
    for (int p = 0; p < m_; ++p) col_cnt[p] = bc_starts[p + 1] - bc_starts[p];
    for (int i = 0; i < m_; ++i) row_cnt[i] = br_starts[i + 1] - br_starts[i];

    std::vector<char> row_done(m_, 0), col_done(m_, 0);
    std::vector<int> row_stack, col_stack;
    for (int i = 0; i < m_; ++i) {
      if (row_cnt[i] == 1) row_stack.push_back(i);
      if (row_cnt[i] == 0) return false;  // zero row: singular
    }
    for (int p = 0; p < m_; ++p) {
      if (col_cnt[p] == 1) col_stack.push_back(p);
      if (col_cnt[p] == 0) return false;
    }

    std::vector<int> front, back;
    front.reserve(m_);
    std::vector<int> pivot_row_of_col(m_, -1);  // -1 = choose at spike time

    auto deactivate = [&](int p, int r) {
      col_done[p] = 1;
      row_done[r] = 1;
      pivot_row_of_col[p] = r;
      for (int k = bc_starts[p]; k < bc_starts[p + 1]; ++k) {
        const int i = bc_rows[k];
        if (!row_done[i] && --row_cnt[i] == 1) row_stack.push_back(i);
      }
      for (int k = br_starts[r]; k < br_starts[r + 1]; ++k) {
        const int q = br_cols[k];
        if (!col_done[q] && --col_cnt[q] == 1) col_stack.push_back(q);
      }
    };

    int assigned = 0;
    while (assigned < m_) {
      int pick_row = -1;
      while (!row_stack.empty()) {
        const int r = row_stack.back();
        row_stack.pop_back();
        if (!row_done[r] && row_cnt[r] == 1) {
          pick_row = r;
          break;
        }
      }
      if (pick_row >= 0) {
        int p = -1;
        for (int k = br_starts[pick_row]; k < br_starts[pick_row + 1]; ++k) {
          if (!col_done[br_cols[k]]) {
            p = br_cols[k];
            break;
          }
        }
        front.push_back(p);
        deactivate(p, pick_row);
        assigned++;
        continue;
      }
      int pick_col = -1;
      while (!col_stack.empty()) {
        const int p = col_stack.back();
        col_stack.pop_back();
        if (!col_done[p] && col_cnt[p] == 1) {
          pick_col = p;
          break;
        }
      }
      if (pick_col >= 0) {
        int r = -1;
        for (int k = bc_starts[pick_col]; k < bc_starts[pick_col + 1]; ++k) {
          if (!row_done[bc_rows[k]]) {
            r = bc_rows[k];
            break;
          }
        }
        back.push_back(pick_col);
        deactivate(pick_col, r);
        assigned++;
        continue;
      }
      // bump: smallest active column, pivot row resolved at spike time
      int best = -1, best_cnt = m_ + 1;
      for (int p = 0; p < m_; ++p) {
        if (!col_done[p] && col_cnt[p] > 0 && col_cnt[p] < best_cnt) {
          best = p;
          best_cnt = col_cnt[p];
        }
      }
      if (best >= 0) {
        int r = -1;
        double best_val = 0.0;
        for (int k = bc_starts[best]; k < bc_starts[best + 1]; ++k) {
          if (!row_done[bc_rows[k]] && std::abs(bc_vals[k]) > best_val) {
            best_val = std::abs(bc_vals[k]);
            r = bc_rows[k];
          }
        }
        front.push_back(best);
        deactivate(best, r);
        assigned++;
        continue;
      }
      // remaining columns have no active entries; defer their pivot rows
      for (int p = 0; p < m_; ++p) {
        if (!col_done[p]) {
          col_done[p] = 1;
          front.push_back(p);
          assigned++;
        }
      }
    }

    std::vector<int> order(std::move(front));
    order.insert(order.end(), back.rbegin(), back.rend());

    // build etas in order; row usage is tracked live so stale preassignments
    // fall back to a fresh choice
    std::vector<char> row_used(m_, 0);
    std::vector<int> pivot_row_of_position(m_, -1);
    std::vector<int> touched;
    for (int k = 0; k < m_; ++k) {
      const int p = order[k];
      const int j = basic_var_[p];
      touched.clear();
      bool needs_ftran = false;
      for (int t = col_starts_[j]; t < col_starts_[j + 1]; ++t) {
        const int row = col_rows_[t];
        work_[row] = col_vals_[t];
        touched.push_back(row);
        if (row_used[row]) needs_ftran = true;
      }
      if (needs_ftran) {
        etas_.ftran(work_, touched);
        sort_unique(touched);
      }
      int r = pivot_row_of_col[p];
      if (r < 0 || row_used[r] || std::abs(work_[r]) <= kSingularTol) {
        r = -1;
        double best_val = kSingularTol;
        for (int row : touched) {
          if (!row_used[row] && std::abs(work_[row]) > best_val) {
            best_val = std::abs(work_[row]);
            r = row;
          }
        }
      }
      if (r < 0) {
        for (int row : touched) work_[row] = 0.0;
        etas_.clear();
        return false;
      }
      etas_.add(r, work_, touched);
      row_used[r] = 1;
      pivot_row_of_position[p] = r;
      for (int row : touched) work_[row] = 0.0;
    }

    // the factorization owns the (variable, row) pairing from here on
    std::vector<int> repinned(m_, -1);
    for (int p = 0; p < m_; ++p) repinned[pivot_row_of_position[p]] = basic_var_[p];
    basic_var_ = std::move(repinned);

    base_eta_entries_ = etas_.entry_count();
    return true;
  }

  void recompute_basics() {
    std::fill(work_.begin(), work_.end(), 0.0);
    std::vector<int> touched;
    for (int i = 0; i < m_; ++i) work_[i] = rhs_[i];
    for (int j = 0; j < ncols_; ++j) {
      if (stat_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
      for (int k = col_starts_[j]; k < col_starts_[j + 1]; ++k) {
        work_[col_rows_[k]] -= col_vals_[k] * x_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (work_[i] != 0.0) touched.push_back(i);
    }
    etas_.ftran(work_, touched);
    for (int i = 0; i < m_; ++i) x_[basic_var_[i]] = work_[i];
    std::fill(work_.begin(), work_.end(), 0.0);
  }

  void refresh_basis() {
    if (!refactor()) throw std::runtime_error("basis refactorization failed");
    recompute_basics();
  }

  // --- pricing and pivoting --------------------------------------------------

  double phase_cost(int j) const {
    if (phase1_) return j >= first_artificial_ ? 1.0 : 0.0;
    return cost_[j];
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    double d = phase_cost(j);
    for (int k = col_starts_[j]; k < col_starts_[j + 1]; ++k) {
      d -= col_vals_[k] * y[col_rows_[k]];
    }
    return d;
  }

  SolveStatus iterate() {
    int since_refactor = 0;
    int stall = 0;
    bool bland = false;

    while (true) {
      if (iterations_ >= max_iterations_) {
        throw std::runtime_error("simplex iteration cap exceeded after " +
                                 std::to_string(iterations_) + " iterations");
      }
      if (since_refactor >= kRefactorInterval ||
          etas_.entry_count() > 8 * std::max<long>(base_eta_entries_, m_)) {
        refresh_basis();
        since_refactor = 0;
      }

      // price: y = B^{-T} c_B
      std::fill(price_.begin(), price_.end(), 0.0);
      bool any_cost = false;
      for (int i = 0; i < m_; ++i) {
        const double c = phase_cost(basic_var_[i]);
        if (c != 0.0) {
          price_[i] = c;
          any_cost = true;
        }
      }
      if (any_cost) etas_.btran(price_);

      // entering variable: largest reduced-cost violation, lowest index on
      // ties; plain Bland when stalling
      const double entry_tol = phase1_ ? 1e-9 : options_.optimality_tol;
      int enter = -1;
      int enter_dir = +1;
      double best_viol = entry_tol;
      for (int j = 0; j < ncols_; ++j) {
        const VarStatus s = stat_[j];
        if (s == VarStatus::Basic || lo_[j] == up_[j]) continue;
        const double d = reduced_cost(j, price_);
        double viol;
        int dir;
        if (s == VarStatus::AtLower && d < -entry_tol) {
          viol = -d;
          dir = +1;
        } else if (s == VarStatus::AtUpper && d > entry_tol) {
          viol = d;
          dir = -1;
        } else if (s == VarStatus::FreeAtZero && std::abs(d) > entry_tol) {
          viol = std::abs(d);
          dir = d < 0.0 ? +1 : -1;
        } else {
          continue;
        }
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (viol > best_viol) {
          best_viol = viol;
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;

      // spike = B^{-1} A_enter
      spike_touched_.clear();
      for (int k = col_starts_[enter]; k < col_starts_[enter + 1]; ++k) {
        work_[col_rows_[k]] = col_vals_[k];
        spike_touched_.push_back(col_rows_[k]);
      }
      etas_.ftran(work_, spike_touched_);
      sort_unique(spike_touched_);

      // ratio test
      double limit = kInfinity;
      int leave_row = -1;
      bool leave_to_upper = false;
      double leave_alpha = 0.0;
      const bool has_flip = lo_[enter] > -kInfinity && up_[enter] < kInfinity;
      const double flip_delta = has_flip ? up_[enter] - lo_[enter] : kInfinity;

      for (int r : spike_touched_) {
        const double alpha = work_[r];
        if (std::abs(alpha) <= kPivotTol) continue;
        const int j = basic_var_[r];
        const double rate = -enter_dir * alpha;  // d(basic value)/d(step)
        double bound_delta;
        bool to_upper;
        if (rate > 0.0) {
          if (up_[j] == kInfinity) continue;
          bound_delta = (up_[j] - x_[j]) / rate;
          to_upper = true;
        } else {
          if (lo_[j] == -kInfinity) continue;
          bound_delta = (lo_[j] - x_[j]) / rate;
          to_upper = false;
        }
        if (bound_delta < 0.0) bound_delta = 0.0;
        bool take;
        if (leave_row < 0) {
          take = true;
        } else if (bound_delta < limit - kRatioTieTol) {
          take = true;
        } else if (bound_delta <= limit + kRatioTieTol) {
          if (bland) {
            take = j < basic_var_[leave_row];
          } else {
            const double mag = std::abs(alpha), best_mag = std::abs(leave_alpha);
            take = mag > best_mag + 1e-12 ||
                   (mag >= best_mag - 1e-12 && j < basic_var_[leave_row]);
          }
        } else {
          take = false;
        }
        if (take) {
          limit = bound_delta;
          leave_row = r;
          leave_to_upper = to_upper;
          leave_alpha = alpha;
        }
      }

      const double step = std::min(limit, flip_delta);
      if (step == kInfinity) {
        clear_spike();
        if (phase1_) throw std::runtime_error("phase-1 objective unbounded");
        return SolveStatus::Unbounded;
      }

      if (step != 0.0) {
        for (int r : spike_touched_) {
          const double alpha = work_[r];
          if (alpha == 0.0) continue;
          x_[basic_var_[r]] -= enter_dir * step * alpha;
        }
      }

      iterations_++;
      if (flip_delta <= limit) {  // bound flip, basis unchanged
        x_[enter] = enter_dir > 0 ? up_[enter] : lo_[enter];
        stat_[enter] = enter_dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      } else {
        const int leave = basic_var_[leave_row];
        x_[enter] = x_[enter] + enter_dir * step;
        x_[leave] = leave_to_upper ? up_[leave] : lo_[leave];
        stat_[leave] = leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
        stat_[enter] = VarStatus::Basic;
        basic_var_[leave_row] = enter;
        etas_.add(leave_row, work_, spike_touched_);
        since_refactor++;
      }
      clear_spike();

      if (step > 1e-12) {
        stall = 0;
        bland = false;
      } else if (++stall >= kStallLimit) {
        bland = true;
      }
    }
  }

  void clear_spike() {
    for (int r : spike_touched_) work_[r] = 0.0;
    spike_touched_.clear();
  }

  // --- data ------------------------------------------------------------------

  SolverOptions options_;
  int m_ = 0;
  int nstruct_ = 0;
  int ncols_ = 0;
  int first_artificial_ = 0;
  bool phase1_ = false;

  std::vector<int> col_starts_;
  std::vector<int> col_rows_;
  std::vector<double> col_vals_;
  std::vector<double> lo_, up_, cost_;
  std::vector<double> x_;
  std::vector<VarStatus> stat_;
  std::vector<int> basic_var_;
  std::vector<double> rhs_;

  EtaFile etas_;
  long base_eta_entries_ = 0;
  std::vector<double> work_;
  std::vector<int> spike_touched_;
  std::vector<double> price_;

  long iterations_ = 0;
  long max_iterations_ = 0;
};

}  // namespace

LpSolution solve(const LpProblem& problem, const SolverOptions& options) {
  problem.validate();
  Simplex simplex(problem, options);
  return simplex.run(problem);
}

std::vector<Violation> check_feasibility(const LpProblem& problem,
                                         const std::vector<double>& values, double row_tol,
                                         double bound_tol) {
  if (static_cast<int>(values.size()) != problem.num_vars()) {
    throw std::invalid_argument("value vector length must match variable count");
  }
  std::vector<Violation> report;
  for (int i = 0; i < problem.num_rows(); ++i) {
    double activity = 0.0;
    for (int k = problem.row_starts[i]; k < problem.row_starts[i + 1]; ++k) {
      activity += problem.row_coefs[k] * values[problem.row_cols[k]];
    }
    const double diff = activity - problem.row_rhs[i];
    double residual = 0.0;
    switch (problem.row_sense[i]) {
      case RowSense::LessEqual: residual = diff; break;
      case RowSense::GreaterEqual: residual = -diff; break;
      case RowSense::Equal: residual = std::abs(diff); break;
    }
    if (residual > row_tol) report.push_back({Violation::Kind::Row, i, residual});
  }
  for (int j = 0; j < problem.num_vars(); ++j) {
    if (values[j] < problem.lower[j] - bound_tol) {
      report.push_back({Violation::Kind::LowerBound, j, problem.lower[j] - values[j]});
    } else if (values[j] > problem.upper[j] + bound_tol) {
      report.push_back({Violation::Kind::UpperBound, j, values[j] - problem.upper[j]});
    }
  }
  return report;
}

}  // namespace drmpc

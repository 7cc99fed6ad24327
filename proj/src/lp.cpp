#include "premarshal/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace premarshal::lp {

int LpProblem::add_row(RowSense sense, double rhs_value, RowTag tag) {
  senses.push_back(sense);
  rhs.push_back(rhs_value);
  tags.push_back(tag);
  return num_rows() - 1;
}

int LpProblem::add_column(double cost, std::vector<std::pair<int, double>> entries) {
  Column column;
  column.cost = cost;
  column.entries = std::move(entries);
  columns.push_back(std::move(column));
  return num_columns() - 1;
}

std::string LpProblem::dump() const {
  std::ostringstream out;
  out << "min";
  for (int j = 0; j < num_columns(); ++j) out << " " << columns[j].cost << "*x" << j;
  out << "\n";
  std::vector<std::vector<std::pair<int, double>>> rows(num_rows());
  for (int j = 0; j < num_columns(); ++j)
    for (const auto& [row, coeff] : columns[j].entries) rows[row].push_back({j, coeff});
  for (int i = 0; i < num_rows(); ++i) {
    out << "r" << i << ":";
    for (const auto& [j, coeff] : rows[i]) out << " " << coeff << "*x" << j;
    const char* sense = senses[i] == RowSense::GreaterEqual ? ">="
                        : senses[i] == RowSense::LessEqual  ? "<="
                                                            : "==";
    out << " " << sense << " " << rhs[i] << "\n";
  }
  return out.str();
}

namespace {

constexpr double kRcTol = 1e-9;
constexpr double kPivotTol = 1e-7; // ratio-test eligibility
constexpr double kBasisTol = 1e-8; // refactorization singularity
constexpr double kFeasTol = 1e-7;
constexpr int kDegenerateLimit = 500;
constexpr int kRefactorInterval = 64;
constexpr int kIterationLimit = 500000;
constexpr int kArtificialToken = std::numeric_limits<int>::min();

struct SingularBasis {};

/// Simplex working state over extended ids:
/// [0,n) structural, [n,n+r) slack of row, [n+r,n+2r) artificial of row.
class Simplex {
public:
  Simplex(const LpProblem& problem, const Basis* warm)
      : problem_(problem), n_(problem.num_columns()), r_(problem.num_rows()) {
    flip_.assign(r_, false);
    rhs_.resize(r_);
    sense_le_.assign(r_, false);
    has_slack_.assign(r_, false);
    for (int i = 0; i < r_; ++i) {
      RowSense sense = problem.senses[i];
      double b = problem.rhs[i];
      if (b < 0) {
        flip_[i] = true;
        b = -b;
        if (sense == RowSense::GreaterEqual)
          sense = RowSense::LessEqual;
        else if (sense == RowSense::LessEqual)
          sense = RowSense::GreaterEqual;
      }
      rhs_[i] = b;
      sense_le_[i] = sense == RowSense::LessEqual;
      has_slack_[i] = sense != RowSense::Equal;
    }
    if (!warm || !try_warm_start(*warm)) cold_start();
  }

  LpResult solve() {
    LpResult result;
    if (needs_phase1_) {
      run(/*phase1=*/true);
      double infeasibility = 0.0;
      for (int i = 0; i < r_; ++i)
        if (is_artificial(basis_[i])) infeasibility += x_[i];
      if (infeasibility > kFeasTol) {
        result.status = LpStatus::Infeasible;
        return result;
      }
      pivot_out_artificials();
    }
    if (!run(/*phase1=*/false)) {
      result.status = LpStatus::Unbounded;
      return result;
    }
    // certify optimality against a fresh factorization so the reported
    // duals match the basis to machine precision
    for (int round = 0; round < 8; ++round) {
      const int before = iterations_;
      refactor();
      if (!run(/*phase1=*/false)) {
        result.status = LpStatus::Unbounded;
        return result;
      }
      if (iterations_ == before + 1) break; // no pivots under the fresh inverse
    }
    result.status = LpStatus::Optimal;
    result.iterations = iterations_;
    result.primal.assign(n_, 0.0);
    for (int i = 0; i < r_; ++i)
      if (basis_[i] < n_) result.primal[basis_[i]] = x_[i];
    for (int j = 0; j < n_; ++j)
      result.objective += problem_.columns[j].cost * result.primal[j];

    const std::vector<double> y = duals(/*phase1=*/false);
    result.duals.resize(r_);
    for (int i = 0; i < r_; ++i) {
      const double orig = flip_[i] ? -y[i] : y[i];
      result.dual_objective += orig * problem_.rhs[i];
      result.duals[i] =
          problem_.senses[i] == RowSense::LessEqual ? -orig : orig;
    }
    result.basis.resize(r_);
    for (int i = 0; i < r_; ++i) {
      const int id = basis_[i];
      result.basis[i] = id < n_          ? id
                        : is_slack(id)   ? -(id - n_) - 1
                                         : kArtificialToken;
    }
    return result;
  }

private:
  bool is_slack(int id) const { return id >= n_ && id < n_ + r_; }
  bool is_artificial(int id) const { return id >= n_ + r_; }

  double cost_of(int id, bool phase1) const {
    if (phase1) return is_artificial(id) ? 1.0 : 0.0;
    return id < n_ ? problem_.columns[id].cost : 0.0;
  }

  /// Column of extended variable `id` in the internal (flipped) system.
  void fetch_column(int id, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    if (id < n_) {
      for (const auto& [row, coeff] : problem_.columns[id].entries)
        dense[row] = flip_[row] ? -coeff : coeff;
    } else if (is_slack(id)) {
      const int row = id - n_;
      dense[row] = sense_le_[row] ? 1.0 : -1.0;
    } else {
      dense[id - n_ - r_] = 1.0;
    }
  }

  void cold_start() {
    basis_.resize(r_);
    needs_phase1_ = false;
    for (int i = 0; i < r_; ++i) {
      if (sense_le_[i] && has_slack_[i]) {
        basis_[i] = n_ + i; // slack basic at rhs >= 0
      } else if (has_slack_[i] && rhs_[i] <= kFeasTol) {
        basis_[i] = n_ + i; // >=-row with zero rhs: slack basic at 0
      } else {
        basis_[i] = n_ + r_ + i;
        needs_phase1_ = true;
      }
    }
    refactor();
  }

  bool try_warm_start(const Basis& warm) {
    if (static_cast<int>(warm.size()) != r_) return false;
    std::vector<int> candidate(r_);
    for (int i = 0; i < r_; ++i) {
      const int token = warm[i];
      if (token == kArtificialToken) return false;
      if (token >= 0) {
        if (token >= n_) return false;
        candidate[i] = token;
      } else {
        const int row = -token - 1;
        if (row >= r_ || !has_slack_[row]) return false;
        candidate[i] = n_ + row;
      }
    }
    basis_ = candidate;
    if (!refactor_checked()) return false;
    for (double v : x_)
      if (v < -kFeasTol) return false; // stale basis; fall back
    needs_phase1_ = false;
    return true;
  }

  void refactor() {
    if (!refactor_checked()) throw SingularBasis{};
  }

  /// Rebuilds the dense basis inverse by Gauss-Jordan; false if singular.
  bool refactor_checked() {
    const int r = r_;
    std::vector<double> mat(r * r, 0.0);
    std::vector<double> col(r);
    for (int j = 0; j < r; ++j) {
      fetch_column(basis_[j], col);
      for (int i = 0; i < r; ++i) mat[i * r + j] = col[i];
    }
    std::vector<double> inv(r * r, 0.0);
    for (int i = 0; i < r; ++i) inv[i * r + i] = 1.0;
    for (int c = 0; c < r; ++c) {
      int pivot_row = -1;
      double best = kBasisTol;
      for (int i = c; i < r; ++i)
        if (std::abs(mat[i * r + c]) > best) {
          best = std::abs(mat[i * r + c]);
          pivot_row = i;
        }
      if (pivot_row < 0) return false;
      if (pivot_row != c) {
        for (int j = 0; j < r; ++j) {
          std::swap(mat[pivot_row * r + j], mat[c * r + j]);
          std::swap(inv[pivot_row * r + j], inv[c * r + j]);
        }
      }
      const double piv = mat[c * r + c];
      for (int j = 0; j < r; ++j) {
        mat[c * r + j] /= piv;
        inv[c * r + j] /= piv;
      }
      for (int i = 0; i < r; ++i) {
        if (i == c) continue;
        const double factor = mat[i * r + c];
        if (factor == 0.0) continue;
        for (int j = 0; j < r; ++j) {
          mat[i * r + j] -= factor * mat[c * r + j];
          inv[i * r + j] -= factor * inv[c * r + j];
        }
      }
    }
    binv_ = std::move(inv);
    x_.assign(r, 0.0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) x_[i] += binv_[i * r + j] * rhs_[j];
    return true;
  }

  std::vector<double> duals(bool phase1) const {
    std::vector<double> y(r_, 0.0);
    for (int k = 0; k < r_; ++k) {
      const double ck = cost_of(basis_[k], phase1);
      if (ck == 0.0) continue;
      for (int i = 0; i < r_; ++i) y[i] += ck * binv_[k * r_ + i];
    }
    return y;
  }

  double reduced_cost(int id, const std::vector<double>& y, bool phase1) const {
    double rc = cost_of(id, phase1);
    if (id < n_) {
      for (const auto& [row, coeff] : problem_.columns[id].entries)
        rc -= y[row] * (flip_[row] ? -coeff : coeff);
    } else if (is_slack(id)) {
      const int row = id - n_;
      rc -= y[row] * (sense_le_[row] ? 1.0 : -1.0);
    } else {
      rc -= y[id - n_ - r_];
    }
    return rc;
  }

  /// Runs the current phase to optimality. Returns false on unbounded.
  /// Dantzig pricing with a largest-pivot ratio test; long degenerate
  /// stretches switch to Bland's rule on a fresh factorization.
  bool run(bool phase1) {
    std::vector<double> col(r_), direction(r_);
    std::vector<char> in_basis(n_ + 2 * r_, 0);
    int since_refactor = 0;
    int degenerate_streak = 0;
    bool bland = false;
    for (;;) {
      if (++iterations_ > kIterationLimit)
        throw std::runtime_error(
            "simplex iteration limit exceeded (" + std::to_string(r_) + " rows, " +
            std::to_string(n_) + " columns)");
      const std::vector<double> y = duals(phase1);

      std::fill(in_basis.begin(), in_basis.end(), 0);
      for (int i = 0; i < r_; ++i) in_basis[basis_[i]] = 1;

      int entering = -1;
      double best_rc = -kRcTol;
      for (int id = 0; id < n_ + r_; ++id) {
        if (in_basis[id]) continue; // basic rc is 0 by construction
        if (is_slack(id) && !has_slack_[id - n_]) continue;
        const double rc = reduced_cost(id, y, phase1);
        if (rc < best_rc) {
          best_rc = rc;
          entering = id;
          if (bland) break; // lowest-index rule
        }
      }
      if (entering < 0) return true;

      fetch_column(entering, col);
      for (int i = 0; i < r_; ++i) {
        double v = 0.0;
        for (int j = 0; j < r_; ++j) v += binv_[i * r_ + j] * col[j];
        direction[i] = v;
      }

      // min-ratio rows, then the largest pivot element for conditioning
      // (lowest basic index instead while Bland's rule is active)
      auto ratio_test = [&](double min_pivot) {
        int leave = -1;
        double theta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < r_; ++i) {
          double ratio;
          if (direction[i] > min_pivot) {
            ratio = std::max(x_[i], 0.0) / direction[i];
          } else if (direction[i] < -min_pivot && is_artificial(basis_[i]) &&
                     x_[i] <= kFeasTol) {
            ratio = 0.0; // a zero artificial must never grow again
          } else {
            continue;
          }
          bool better = leave < 0 || ratio < theta - kRcTol;
          if (!better && ratio < theta + kRcTol) {
            if (bland)
              better = basis_[i] < basis_[leave];
            else
              better = std::abs(direction[i]) > std::abs(direction[leave]);
          }
          if (better) {
            leave = i;
            theta = std::min(ratio, theta);
          }
        }
        return std::pair<int, double>{leave, theta};
      };
      auto [leave, theta] = ratio_test(kPivotTol);
      if (leave < 0) std::tie(leave, theta) = ratio_test(1e-10);
      if (leave < 0) return false; // unbounded ray

      pivot(entering, leave, direction);
      if (theta <= kFeasTol) {
        if (++degenerate_streak == kDegenerateLimit && !bland) {
          bland = true;
          refactor();
          since_refactor = 0;
        }
      } else {
        degenerate_streak = 0;
        bland = false;
      }
      if (++since_refactor >= kRefactorInterval) {
        refactor();
        since_refactor = 0;
      }
    }
  }

  void pivot(int entering, int leave, const std::vector<double>& direction) {
    const double piv = direction[leave];
    const double theta = x_[leave] / piv;
    for (int i = 0; i < r_; ++i) {
      if (i == leave) continue;
      x_[i] -= theta * direction[i];
      if (x_[i] < 0 && x_[i] > -kFeasTol) x_[i] = 0.0;
    }
    x_[leave] = theta;
    for (int j = 0; j < r_; ++j) binv_[leave * r_ + j] /= piv;
    for (int i = 0; i < r_; ++i) {
      if (i == leave) continue;
      const double factor = direction[i];
      if (factor == 0.0) continue;
      for (int j = 0; j < r_; ++j)
        binv_[i * r_ + j] -= factor * binv_[leave * r_ + j];
    }
    basis_[leave] = entering;
  }

  /// After phase 1, swap basic zero artificials for real columns where a
  /// nonzero pivot exists; redundant rows keep their pinned artificial.
  void pivot_out_artificials() {
    std::vector<double> col(r_), direction(r_);
    for (int i = 0; i < r_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int id = 0; id < n_ + r_; ++id) {
        if (is_slack(id) && !has_slack_[id - n_]) continue;
        bool already_basic = false;
        for (int k = 0; k < r_; ++k)
          if (basis_[k] == id) already_basic = true;
        if (already_basic) continue;
        fetch_column(id, col);
        double v = 0.0;
        for (int j = 0; j < r_; ++j) v += binv_[i * r_ + j] * col[j];
        if (std::abs(v) > 1e-6) {
          for (int k = 0; k < r_; ++k) {
            double d = 0.0;
            for (int j = 0; j < r_; ++j) d += binv_[k * r_ + j] * col[j];
            direction[k] = d;
          }
          pivot(id, i, direction);
          break;
        }
      }
    }
  }

  const LpProblem& problem_;
  const int n_;
  const int r_;
  std::vector<bool> flip_, sense_le_, has_slack_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
  std::vector<double> binv_;
  std::vector<double> x_;
  bool needs_phase1_ = false;
  int iterations_ = 0;
};

} // namespace

LpResult lp_solve(const LpProblem& problem, const Basis* warm_start) {
  try {
    return Simplex(problem, warm_start).solve();
  } catch (const SingularBasis&) {
    // basis degraded numerically; restart cold once
    try {
      return Simplex(problem, nullptr).solve();
    } catch (const SingularBasis&) {
      throw std::runtime_error("LP basis singular even after cold restart");
    }
  }
}

double primal_residual(const LpProblem& problem, const std::vector<double>& primal) {
  std::vector<double> activity(problem.num_rows(), 0.0);
  for (int j = 0; j < problem.num_columns(); ++j)
    for (const auto& [row, coeff] : problem.columns[j].entries)
      activity[row] += coeff * primal[j];
  double worst = 0.0;
  for (int i = 0; i < problem.num_rows(); ++i) {
    const double diff = activity[i] - problem.rhs[i];
    switch (problem.senses[i]) {
      case RowSense::GreaterEqual: worst = std::max(worst, -diff); break;
      case RowSense::LessEqual: worst = std::max(worst, diff); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  for (double v : primal) worst = std::max(worst, -v);
  return worst;
}

} // namespace premarshal::lp

#pragma once

// Dense two-phase primal simplex in exact rational arithmetic, with Bland's
// rule for both entering and leaving choices (termination guaranteed, pivots
// deterministic). Sized for the small LPs this project solves.

#include <stdexcept>
#include <vector>

#include "smallness/rational.hpp"

namespace smallness {

struct SimplexResult {
  bool feasible = false;
  Rat value;
  std::vector<Rat> x;
};

namespace detail {

class Tableau {
 public:
  // min c.x  s.t.  A x >= b, x >= 0, with b >= 0.
  Tableau(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
          const std::vector<Rat>& c)
      : m_(static_cast<int>(A.size())), n_(static_cast<int>(c.size())), cost_(c) {
    for (const Rat& bi : b)
      if (bi < 0) throw std::invalid_argument("simplex requires b >= 0");
    total_ = n_ + 2 * m_;  // x | surplus | artificial
    rows_.assign(m_, std::vector<Rat>(total_ + 1, Rat(0)));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) rows_[i][j] = A[i][j];
      rows_[i][n_ + i] = -1;       // surplus
      rows_[i][n_ + m_ + i] = 1;   // artificial
      rows_[i][total_] = b[i];
      basis_[i] = n_ + m_ + i;
    }
  }

  SimplexResult solve() {
    // Phase 1: minimize the sum of artificials.
    std::vector<Rat> c1(total_, Rat(0));
    for (int j = n_ + m_; j < total_; ++j) c1[j] = 1;
    run(c1, total_);
    Rat phase1 = objective(c1);
    SimplexResult res;
    if (phase1 != 0) return res;  // infeasible
    drive_out_artificials();
    // Phase 2: artificial columns barred from entering.
    std::vector<Rat> c2(total_, Rat(0));
    for (int j = 0; j < n_; ++j) c2[j] = cost_[j];
    run(c2, n_ + m_);
    res.feasible = true;
    res.value = objective(c2);
    res.x.assign(n_, Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) res.x[basis_[i]] = rows_[i][total_];
    return res;
  }

 private:
  Rat objective(const std::vector<Rat>& c) const {
    Rat v = 0;
    for (int i = 0; i < m_; ++i)
      if (c[basis_[i]] != 0) v += c[basis_[i]] * rows_[i][total_];
    return v;
  }

  void run(const std::vector<Rat>& c, int enter_limit) {
    for (;;) {
      // Reduced costs r_j = c_j - y.A_j with y from the current basis.
      int enter = -1;
      for (int j = 0; j < enter_limit; ++j) {
        if (is_basic(j)) continue;
        Rat r = c[j];
        for (int i = 0; i < m_; ++i)
          if (c[basis_[i]] != 0 && rows_[i][j] != 0) r -= c[basis_[i]] * rows_[i][j];
        if (r < 0) { enter = j; break; }  // Bland: first improving index
      }
      if (enter < 0) return;
      int leave = -1;
      Rat best_ratio;
      for (int i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= 0) continue;
        Rat ratio = rows_[i][total_] / rows_[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded LP");
      pivot(leave, enter);
    }
  }

  bool is_basic(int j) const {
    for (int i = 0; i < m_; ++i)
      if (basis_[i] == j) return true;
    return false;
  }

  void pivot(int r, int c) {
    Rat piv = rows_[r][c];
    for (auto& v : rows_[r]) v /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      Rat f = rows_[i][c];
      for (int j = 0; j <= total_; ++j)
        if (rows_[r][j] != 0) rows_[i][j] -= f * rows_[r][j];
    }
    basis_[r] = c;
  }

  // Pivot any artificial still basic (at level zero after a feasible phase 1)
  // onto a structural column when possible; a fully zero row is redundant.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_ + m_) continue;
      for (int j = 0; j < n_ + m_; ++j) {
        if (rows_[i][j] != 0) { pivot(i, j); break; }
      }
    }
  }

  int m_, n_, total_;
  std::vector<Rat> cost_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<int> basis_;
};

}  // namespace detail

inline SimplexResult simplex_min_ge(const std::vector<std::vector<Rat>>& A,
                                    const std::vector<Rat>& b, const std::vector<Rat>& c) {
  if (A.size() != b.size()) throw std::invalid_argument("simplex: row count mismatch");
  for (auto& row : A)
    if (row.size() != c.size()) throw std::invalid_argument("simplex: column count mismatch");
  detail::Tableau t(A, b, c);
  return t.solve();
}

}  // namespace smallness

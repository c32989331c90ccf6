#include "hierarb/lp.hpp"

#include <cstddef>
#include <optional>

namespace hierarb::lp {

namespace {

class Tableau {
 public:
  Tableau(std::vector<RationalVector> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return rows_.empty() ? 0 : rows_.front().size() - 1; }
  const Rational& rhs(std::size_t r) const { return rows_[r].back(); }
  const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  // Runs primal simplex for `cost` restricted to columns < active_cols.
  // Returns false when unbounded.
  bool optimize(const RationalVector& cost, std::size_t active_cols) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < active_cols; ++j) {
        if (is_basic(j)) continue;
        Rational reduced = cost[j];
        for (std::size_t r = 0; r < rows_.size(); ++r) reduced -= cost[basis_[r]] * rows_[r][j];
        if (reduced > 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Rational& a = rows_[r][*entering];
        if (a <= 0) continue;
        Rational ratio = rows_[r].back() / a;
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = rows_[row][col];
    for (auto& v : rows_[row]) v /= p;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == row) continue;
      const Rational factor = rows_[r][col];
      if (factor == 0) continue;
      for (std::size_t c = 0; c < rows_[r].size(); ++c) rows_[r][c] -= factor * rows_[row][c];
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t row) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

  bool is_basic(std::size_t col) const {
    for (auto b : basis_) {
      if (b == col) return true;
    }
    return false;
  }

 private:
  std::vector<RationalVector> rows_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution maximize(const std::vector<RationalVector>& A, const RationalVector& b,
                  const RationalVector& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw DomainError("lp: rhs length mismatch");
  for (const auto& row : A) {
    if (row.size() != n) throw DomainError("lp: row length mismatch");
  }

  // Phase 1: artificial variables n..n+m-1 form the starting basis.
  std::vector<RationalVector> rows(m, RationalVector(n + m + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = b[r] < 0;
    for (std::size_t j = 0; j < n; ++j) rows[r][j] = flip ? -A[r][j] : A[r][j];
    rows[r][n + r] = 1;
    rows[r].back() = flip ? -b[r] : b[r];
    basis[r] = n + r;
  }
  Tableau t(std::move(rows), std::move(basis));

  RationalVector phase1(n + m, Rational(0));
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = -1;
  t.optimize(phase1, n + m);
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    if (t.basis()[r] >= n && t.rhs(r) != 0) return {Status::Infeasible, {}, 0};
  }

  // Drive zero-valued artificials out of the basis; drop redundant rows.
  for (std::size_t r = 0; r < t.num_rows();) {
    if (t.basis()[r] < n) {
      ++r;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.at(r, j) != 0) {
        col = j;
        break;
      }
    }
    if (col) {
      t.pivot(r, *col);
      ++r;
    } else {
      t.drop_row(r);
    }
  }

  RationalVector phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!t.optimize(phase2, n)) return {Status::Unbounded, {}, 0};

  Solution sol;
  sol.status = Status::Optimal;
  sol.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    if (t.basis()[r] < n) sol.x[t.basis()[r]] = t.rhs(r);
  }
  for (std::size_t j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
  return sol;
}

}  // namespace hierarb::lp

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace liftvf {

struct SparseEntry {
  std::size_t col;
  Integer value;
};

// Sorted by column, no zero values.
using SparseRow = std::vector<SparseEntry>;

using RationalRow = std::vector<std::pair<std::size_t, Rational>>;

namespace detail {

inline void make_primitive(SparseRow& row) {
  if (row.empty()) return;
  Integer g = 0;
  for (const auto& e : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.value.get_mpz_t());
    if (g == 1) break;
  }
  if (row.front().value < 0) g = -g;
  if (g != 1)
    for (auto& e : row) mpz_divexact(e.value.get_mpz_t(), e.value.get_mpz_t(), g.get_mpz_t());
}

// a*r - c*b
inline SparseRow combine(const SparseRow& r, const Integer& a, const SparseRow& b, const Integer& c) {
  SparseRow out;
  out.reserve(r.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < b.size()) {
    if (j == b.size() || (i < r.size() && r[i].col < b[j].col)) {
      out.push_back({r[i].col, a * r[i].value});
      ++i;
    } else if (i == r.size() || b[j].col < r[i].col) {
      out.push_back({b[j].col, -c * b[j].value});
      ++j;
    } else {
      Integer v = a * r[i].value - c * b[j].value;
      if (v != 0) out.push_back({r[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

inline SparseRow to_integer_row(const RationalRow& row) {
  Integer l = 1;
  for (const auto& [c, q] : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  SparseRow out;
  out.reserve(row.size());
  for (const auto& [c, q] : row) {
    if (q == 0) continue;
    Integer v = l / q.get_den() * q.get_num();
    out.push_back({c, std::move(v)});
  }
  std::sort(out.begin(), out.end(), [](const SparseEntry& x, const SparseEntry& y) { return x.col < y.col; });
  return out;
}

// Row echelon basis under fraction-free elimination; the pivot of a row is its first column.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t ncols = 0) : ncols_(ncols), pivot_row_(ncols, -1) {}

  std::size_t ncols() const { return ncols_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseRow>& rows() const { return rows_; }

  bool has_pivot(std::size_t col) const { return pivot_row_[col] >= 0; }

  // The unique representative of row + span that vanishes on every pivot column.
  SparseRow reduce(SparseRow row) const { return reduce_from(std::move(row), 0); }

  // Inserts the reduced row when nonzero; returns its pivot column.
  std::optional<std::size_t> insert(SparseRow row) {
    row = reduce(std::move(row));
    if (row.empty()) return std::nullopt;
    detail::make_primitive(row);
    std::size_t piv = row.front().col;
    pivot_row_[piv] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    return piv;
  }

  bool contains(const SparseRow& row) const { return reduce(row).empty(); }

  // Reduced row echelon form with unit pivots, rows ordered by pivot column.
  std::vector<RationalRow> rref() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].front().col > rows_[b].front().col; });
    EchelonBasis tail(ncols_);
    std::vector<RationalRow> out;
    out.reserve(rows_.size());
    for (std::size_t idx : order) {
      SparseRow row = tail.reduce_from(rows_[idx], 1);
      Rational lead(row.front().value);
      RationalRow q;
      q.reserve(row.size());
      for (const auto& e : row) q.emplace_back(e.col, Rational(e.value) / lead);
      tail.pivot_row_[row.front().col] = static_cast<int>(tail.rows_.size());
      tail.rows_.push_back(std::move(row));
      out.push_back(std::move(q));
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  void check_col(std::size_t col) const {
    if (col >= ncols_) throw std::out_of_range("echelon column out of range");
  }

  SparseRow reduce_from(SparseRow row, std::size_t k) const {
    while (k < row.size()) {
      check_col(row[k].col);
      int pr = pivot_row_[row[k].col];
      if (pr < 0) {
        ++k;
        continue;
      }
      const SparseRow& b = rows_[static_cast<std::size_t>(pr)];
      Integer g;
      mpz_gcd(g.get_mpz_t(), b.front().value.get_mpz_t(), row[k].value.get_mpz_t());
      Integer a = b.front().value / g;
      Integer c = row[k].value / g;
      row = detail::combine(row, a, b, c);
      detail::make_primitive(row);
    }
    return row;
  }

  std::size_t ncols_;
  std::vector<SparseRow> rows_;
  std::vector<int> pivot_row_;
};

// Equations sum_c a_c x_c = b_j over n unknowns and a fixed number of right-hand sides,
// stored as rows whose columns n..n+k-1 hold the right-hand sides.
class LinearSystem {
 public:
  enum class Status { Independent, Redundant, Inconsistent };

  LinearSystem(std::size_t unknowns, std::size_t rhs_count)
      : unknowns_(unknowns), rhs_count_(rhs_count), basis_(unknowns + rhs_count) {}

  std::size_t unknowns() const { return unknowns_; }
  std::size_t rank() const { return basis_.rank(); }

  Status add_equation(SparseRow row) {
    auto piv = basis_.insert(std::move(row));
    if (!piv) return Status::Redundant;
    if (*piv >= unknowns_) {
      constraint_rows_.push_back(basis_.rows().size() - 1);
      return Status::Inconsistent;
    }
    return Status::Independent;
  }

  bool consistent(std::size_t rhs) const {
    const std::size_t col = unknowns_ + rhs;
    for (std::size_t idx : constraint_rows_)
      for (const auto& e : basis_.rows()[idx])
        if (e.col == col) return false;
    return true;
  }

  // Particular solution with every free unknown set to zero.
  std::vector<Rational> solution(std::size_t rhs) const {
    if (!consistent(rhs)) throw std::runtime_error("linear system is inconsistent");
    const std::size_t col_b = unknowns_ + rhs;
    std::vector<const SparseRow*> pivots;
    for (const auto& r : basis_.rows())
      if (r.front().col < unknowns_) pivots.push_back(&r);
    std::sort(pivots.begin(), pivots.end(),
              [](const SparseRow* a, const SparseRow* b) { return a->front().col > b->front().col; });
    std::vector<Rational> x(unknowns_);
    for (const SparseRow* r : pivots) {
      Rational acc = 0;
      for (std::size_t k = 1; k < r->size(); ++k) {
        const auto& e = (*r)[k];
        if (e.col < unknowns_) {
          if (x[e.col] != 0) acc -= Rational(e.value) * x[e.col];
        } else if (e.col == col_b) {
          acc += Rational(e.value);
        }
      }
      x[r->front().col] = acc / Rational(r->front().value);
    }
    return x;
  }

 private:
  std::size_t unknowns_;
  std::size_t rhs_count_;
  EchelonBasis basis_;
  std::vector<std::size_t> constraint_rows_;
};

// Basis of the relations {c : sum_i c_i v_i = 0} among vectors in dimension dim, in reduced form.
inline std::vector<RationalRow> nullspace(const std::vector<SparseRow>& vectors, std::size_t dim) {
  const std::size_t k = vectors.size();
  EchelonBasis basis(dim + k);
  for (std::size_t i = 0; i < k; ++i) {
    SparseRow row = vectors[i];
    row.push_back({dim + i, Integer(1)});
    basis.insert(std::move(row));
  }
  EchelonBasis relations(k);
  for (const auto& r : basis.rows()) {
    if (r.front().col < dim) continue;
    SparseRow rel;
    for (const auto& e : r) rel.push_back({e.col - dim, e.value});
    relations.insert(std::move(rel));
  }
  return relations.rref();
}

}  // namespace liftvf

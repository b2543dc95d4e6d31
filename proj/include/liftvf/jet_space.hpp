#pragma once

#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "free_module.hpp"
#include "linalg.hpp"

namespace liftvf {

struct JetAmbient {
  std::size_t rank = 1;
  std::size_t nvars = 1;
  unsigned order = 1;

  friend bool operator==(const JetAmbient&, const JetAmbient&) = default;
};

// Coordinates of K[x]^rank / m^order: column = component * (#monomials) + monomial position.
class JetCoordinates {
 public:
  explicit JetCoordinates(JetAmbient ambient) : ambient_(ambient), monomials_(monomials_below(ambient.nvars, ambient.order)) {
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
  }

  const JetAmbient& ambient() const { return ambient_; }
  std::size_t dimension() const { return ambient_.rank * monomials_.size(); }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  SparseRow row(const FreeModuleElement& v) const {
    if (v.rank() != ambient_.rank || v.nvars() != ambient_.nvars)
      throw std::invalid_argument("jet ambient mismatch");
    RationalRow q;
    for (std::size_t c = 0; c < v.rank(); ++c)
      for (const auto& t : v[c].terms())
        if (t.mono.degree() < ambient_.order) q.emplace_back(c * monomials_.size() + index_.at(t.mono), t.coef);
    return to_integer_row(q);
  }

  FreeModuleElement element(const RationalRow& row) const {
    std::vector<std::vector<Term>> comps(ambient_.rank);
    for (const auto& [col, q] : row) comps[col / monomials_.size()].push_back({monomials_[col % monomials_.size()], q});
    std::vector<Polynomial> polys;
    for (auto& terms : comps) polys.push_back(Polynomial::from_terms(ambient_.nvars, std::move(terms)));
    return FreeModuleElement(std::move(polys));
  }

 private:
  JetAmbient ambient_;
  std::vector<Monomial> monomials_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

// A subspace of a jet space, held in reduced row echelon form.
class JetSubspace {
 public:
  explicit JetSubspace(JetAmbient ambient)
      : coords_(std::make_shared<JetCoordinates>(ambient)), basis_(coords_->dimension()) {}

  const JetAmbient& ambient() const { return coords_->ambient(); }
  std::size_t dimension() const { return basis_.rank(); }
  std::vector<RationalRow> basis() const { return basis_.rref(); }
  const JetCoordinates& coordinates() const { return *coords_; }

  bool add(const FreeModuleElement& v) { return basis_.insert(coords_->row(v)).has_value(); }

  bool contains(const FreeModuleElement& v) const { return basis_.contains(coords_->row(v)); }

  std::vector<FreeModuleElement> basis_elements() const {
    std::vector<FreeModuleElement> out;
    for (const auto& r : basis()) out.push_back(coords_->element(r));
    return out;
  }

  friend JetSubspace sum(const JetSubspace& a, const JetSubspace& b) {
    check(a, b);
    JetSubspace r(a);
    for (const auto& row : b.basis_.rows()) r.basis_.insert(row);
    return r;
  }

  friend JetSubspace intersection(const JetSubspace& a, const JetSubspace& b) {
    check(a, b);
    const std::size_t n = a.coords_->dimension();
    EchelonBasis z(2 * n);
    for (const auto& row : a.basis_.rows()) {
      SparseRow doubled = row;
      for (const auto& e : row) doubled.push_back({e.col + n, e.value});
      z.insert(std::move(doubled));
    }
    for (const auto& row : b.basis_.rows()) z.insert(row);
    JetSubspace r(a.coords_, n);
    for (const auto& row : z.rows()) {
      if (row.front().col < n) continue;
      SparseRow tail;
      for (const auto& e : row) tail.push_back({e.col - n, e.value});
      r.basis_.insert(std::move(tail));
    }
    return r;
  }

  // dim A/(A ∩ B), i.e. dim(A+B) - dim B.
  friend std::size_t quotient_dimension(const JetSubspace& a, const JetSubspace& b) {
    return sum(a, b).dimension() - b.dimension();
  }

  friend bool operator==(const JetSubspace& a, const JetSubspace& b) {
    return a.ambient() == b.ambient() && a.dimension() == b.dimension() && sum(a, b).dimension() == a.dimension();
  }

 private:
  JetSubspace(std::shared_ptr<const JetCoordinates> coords, std::size_t dim) : coords_(std::move(coords)), basis_(dim) {}

  static void check(const JetSubspace& a, const JetSubspace& b) {
    if (!(a.ambient() == b.ambient())) throw std::invalid_argument("jet subspace ambient mismatch");
  }

  std::shared_ptr<const JetCoordinates> coords_;
  EchelonBasis basis_;
};

inline JetSubspace jet_span(const std::vector<FreeModuleElement>& vectors, JetAmbient ambient) {
  JetSubspace s(ambient);
  for (const auto& v : vectors) s.add(v);
  return s;
}

}  // namespace liftvf

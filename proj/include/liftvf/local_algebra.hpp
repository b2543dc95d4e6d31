#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "germ.hpp"
#include "groebner.hpp"
#include "linalg.hpp"

namespace liftvf {

struct ModuleTermHash {
  std::size_t operator()(const ModuleTerm& t) const { return t.mono.hash() * 31u + t.comp; }
};

// Coordinates on K[x]^r / (submodule + m^T) given by the standard terms of a truncated standard basis.
class StandardCoordinates {
 public:
  explicit StandardCoordinates(const GroebnerBasis& gb) : rank_(gb.rank()), nvars_(gb.nvars()), terms_(gb.standard_terms()) {
    for (std::size_t k = 0; k < terms_.size(); ++k) index_.emplace(terms_[k], k);
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<ModuleTerm>& terms() const { return terms_; }
  std::size_t index(const ModuleTerm& t) const { return index_.at(t); }

  // Row of a fully reduced vector; every entry must sit on a standard term.
  RationalRow rational_row(const ModuleVector& nf, std::size_t offset = 0) const {
    RationalRow out;
    out.reserve(nf.size());
    for (const auto& e : nf) out.emplace_back(offset + index_.at(e.term), e.coef);
    return out;
  }

  FreeModuleElement element(const RationalRow& row, std::size_t offset = 0) const {
    std::vector<std::vector<Term>> comps(rank_);
    for (const auto& [col, q] : row) {
      if (col < offset || col >= offset + terms_.size()) continue;
      const auto& t = terms_[col - offset];
      comps[t.comp].push_back({t.mono, q});
    }
    std::vector<Polynomial> polys;
    for (auto& terms : comps) polys.push_back(Polynomial::from_terms(nvars_, std::move(terms)));
    return FreeModuleElement(std::move(polys));
  }

 private:
  std::size_t rank_;
  std::size_t nvars_;
  std::vector<ModuleTerm> terms_;
  std::unordered_map<ModuleTerm, std::size_t, ModuleTermHash> index_;
};

// Products f^alpha of the components of one branch, |alpha| = k, in graded-lex order of alpha.
inline std::vector<std::pair<Monomial, Polynomial>> power_products(const Branch& b, unsigned k, unsigned order) {
  const std::size_t p = b.p();
  std::unordered_map<Monomial, Polynomial, MonomialHash> prev;
  prev.emplace(Monomial(p), Polynomial::constant(b.n(), 1).truncate(order));
  for (unsigned d = 1; d <= k; ++d) {
    std::unordered_map<Monomial, Polynomial, MonomialHash> cur;
    for (const auto& alpha : monomials_of_degree(p, d, MonomialOrder::Grlex)) {
      std::size_t q = 0;
      while (alpha[q] == 0) ++q;
      Monomial lower = alpha;
      lower.set(q, alpha[q] - 1);
      cur.emplace(alpha, Polynomial::multiply(prev.at(lower), b.components[q], order));
    }
    prev = std::move(cur);
  }
  std::vector<std::pair<Monomial, Polynomial>> out;
  for (const auto& alpha : monomials_of_degree(p, k, MonomialOrder::Grlex)) out.emplace_back(alpha, prev.at(alpha));
  return out;
}

struct BranchMultiplicity {
  unsigned delta = 0;
  // Least M with m^M inside f*m C + m^(M+1).
  unsigned ell = 0;
};

// Colength of (f_1, ..., f_p) + m^M for M = 1, 2, ... until two consecutive orders agree.
inline BranchMultiplicity branch_multiplicity(const Branch& b, unsigned cap) {
  std::vector<FreeModuleElement> gens;
  for (const auto& c : b.components) gens.emplace_back(std::vector<Polynomial>{c});
  auto colength = [&](unsigned M) { return truncated_standard_basis(gens, 1, b.n(), M).colength(); };
  std::size_t prev = colength(1);
  for (unsigned M = 1; M < cap; ++M) {
    std::size_t next = colength(M + 1);
    if (next == prev) return {static_cast<unsigned>(prev), M};
    prev = next;
  }
  throw CapReachedError("branch '" + b.label + "': not finite multiplicity up to jet order " + std::to_string(cap));
}

// Ideal-theoretic data of one branch, with standard bases cached by (power, truncation).
class BranchAlgebra {
 public:
  BranchAlgebra(Branch b, BranchMultiplicity mult) : branch_(std::move(b)), mult_(mult) {}

  const Branch& branch() const { return branch_; }
  unsigned delta() const { return mult_.delta; }
  unsigned ell() const { return mult_.ell; }
  std::size_t n() const { return branch_.n(); }
  std::size_t p() const { return branch_.p(); }

  // Standard basis of I^k + m^T in the local order; I^0 is the unit ideal.
  std::shared_ptr<const GroebnerBasis> ideal_power(unsigned k, unsigned T) const {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto key = std::make_pair(k, T);
    auto it = ideal_cache_->find(key);
    if (it != ideal_cache_->end()) return it->second;
    std::vector<FreeModuleElement> gens;
    for (auto& [alpha, poly] : power_products(branch_, k, T)) gens.emplace_back(std::vector<Polynomial>{poly});
    auto gb = std::make_shared<const GroebnerBasis>(truncated_standard_basis(gens, 1, n(), T));
    ideal_cache_->emplace(key, gb);
    return gb;
  }

  // Monomials outside the leading ideal of I + m^T; a basis of C/(I + m^T).
  std::vector<Monomial> standard_monomials(unsigned T) const {
    std::vector<Monomial> out;
    for (const auto& t : ideal_power(1, T)->standard_terms()) out.push_back(t.mono);
    return out;
  }

 private:
  Branch branch_;
  BranchMultiplicity mult_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const GroebnerBasis>>> ideal_cache_ =
      std::make_shared<std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const GroebnerBasis>>>();
};

// Componentwise normal form of a vector against a rank-one standard basis.
inline ModuleVector componentwise_normal_form(const FreeModuleElement& v, const GroebnerBasis& ideal) {
  ModuleVector out;
  for (std::size_t q = 0; q < v.rank(); ++q) {
    ModuleVector r = ideal.reduce(FreeModuleElement(std::vector<Polynomial>{v[q]}));
    for (auto& e : r) {
      e.term.comp = static_cast<std::uint32_t>(q);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace liftvf

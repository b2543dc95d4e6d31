#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "free_module.hpp"

namespace liftvf {

enum class PositionPolicy { PositionOverTerm, TermOverPosition };

struct ModuleOrder {
  MonomialOrder term = MonomialOrder::Grevlex;
  PositionPolicy position = PositionPolicy::PositionOverTerm;
};

struct ModuleTerm {
  Monomial mono;
  std::uint32_t comp = 0;

  friend bool operator==(const ModuleTerm& a, const ModuleTerm& b) { return a.comp == b.comp && a.mono == b.mono; }
};

struct ModuleEntry {
  ModuleTerm term;
  Rational coef;
};

// Entries sorted descending in the module order.
using ModuleVector = std::vector<ModuleEntry>;

inline int compare(const ModuleTerm& a, const ModuleTerm& b, const ModuleOrder& order) {
  if (order.position == PositionPolicy::PositionOverTerm) {
    if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
    return compare(a.mono, b.mono, order.term);
  }
  int c = compare(a.mono, b.mono, order.term);
  if (c != 0) return c;
  if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
  return 0;
}

struct ModuleTermGreater {
  ModuleOrder order;
  bool operator()(const ModuleTerm& a, const ModuleTerm& b) const { return compare(a, b, order) > 0; }
};

inline ModuleVector to_module_vector(const FreeModuleElement& v, const ModuleOrder& order,
                                     std::optional<unsigned> truncation = std::nullopt) {
  ModuleVector out;
  for (std::size_t c = 0; c < v.rank(); ++c)
    for (const auto& t : v[c].terms())
      if (!truncation || t.mono.degree() < *truncation)
        out.push_back({{t.mono, static_cast<std::uint32_t>(c)}, t.coef});
  std::sort(out.begin(), out.end(),
            [&](const ModuleEntry& a, const ModuleEntry& b) { return compare(a.term, b.term, order) > 0; });
  return out;
}

inline FreeModuleElement to_free_module_element(const ModuleVector& v, std::size_t rank, std::size_t nvars) {
  std::vector<std::vector<Term>> comps(rank);
  for (const auto& e : v) comps[e.term.comp].push_back({e.term.mono, e.coef});
  std::vector<Polynomial> polys;
  polys.reserve(rank);
  for (auto& terms : comps) polys.push_back(Polynomial::from_terms(nvars, std::move(terms)));
  return FreeModuleElement(std::move(polys));
}

// Buchberger basis of a submodule of K[x]^rank. With a truncation T the order must be local and the
// basis is a standard basis of (submodule + m^T K[x]^rank) in K[x]/m^T; every term of degree >= T is dropped.
class GroebnerBasis {
 public:
  GroebnerBasis(const std::vector<FreeModuleElement>& gens, std::size_t rank, std::size_t nvars, ModuleOrder order,
                std::optional<unsigned> truncation = std::nullopt)
      : rank_(rank), nvars_(nvars), order_(order), truncation_(truncation) {
    if (truncation_ && order_.term != MonomialOrder::LocalGrevlex)
      throw std::invalid_argument("truncated bases require a local order");
    if (!truncation_ && order_.term == MonomialOrder::LocalGrevlex)
      throw std::invalid_argument("local orders require a truncation");
    for (const auto& g : gens)
      if (g.rank() != rank_ || g.nvars() != nvars_) throw std::invalid_argument("generator ambient mismatch");
    compute(gens);
  }

  std::size_t rank() const { return rank_; }
  std::size_t nvars() const { return nvars_; }
  const ModuleOrder& order() const { return order_; }
  std::optional<unsigned> truncation() const { return truncation_; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<ModuleVector>& basis_vectors() const { return basis_; }

  std::vector<FreeModuleElement> generators() const {
    std::vector<FreeModuleElement> out;
    for (const auto& b : basis_) out.push_back(to_free_module_element(b, rank_, nvars_));
    return out;
  }

  std::vector<ModuleTerm> leading_terms() const {
    std::vector<ModuleTerm> out;
    for (const auto& b : basis_) out.push_back(b.front().term);
    return out;
  }

  ModuleVector reduce(ModuleVector v) const { return full_reduce(std::move(v), basis_, lead_index_); }

  ModuleVector reduce(const FreeModuleElement& v) const { return reduce(to_module_vector(v, order_, truncation_)); }

  FreeModuleElement normal_form(const FreeModuleElement& v) const {
    return to_free_module_element(reduce(v), rank_, nvars_);
  }

  bool contains(const FreeModuleElement& v) const { return reduce(v).empty(); }

  bool is_standard(const ModuleTerm& t) const { return !find_divisor(t, basis_, lead_index_); }

  // Terms outside the leading module; needs a truncation.
  std::vector<ModuleTerm> standard_terms() const {
    if (!truncation_) throw std::logic_error("standard terms need a truncation");
    std::vector<ModuleTerm> out;
    auto monos = monomials_below(nvars_, *truncation_);
    for (std::uint32_t c = 0; c < rank_; ++c)
      for (const auto& m : monos) {
        ModuleTerm t{m, c};
        if (is_standard(t)) out.push_back(t);
      }
    return out;
  }

  std::size_t colength() const { return standard_terms().size(); }

 private:
  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };

  using LeadIndex = std::vector<std::vector<std::size_t>>;

  static std::uint32_t support_mask(const Monomial& m) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) s |= 1u << i;
    return s;
  }

  std::optional<std::size_t> find_divisor(const ModuleTerm& t, const std::vector<ModuleVector>& polys,
                                          const LeadIndex& index) const {
    if (t.comp >= index.size()) return std::nullopt;
    std::uint32_t mask = support_mask(t.mono);
    std::optional<std::size_t> best;
    std::size_t best_len = 0;
    for (std::size_t k : index[t.comp]) {
      const Monomial& lm = polys[k].front().term.mono;
      if ((masks_.at(k) & ~mask) != 0) continue;
      if (!lm.divides(t.mono)) continue;
      if (!best || polys[k].size() < best_len) {
        best = k;
        best_len = polys[k].size();
        if (best_len == 1) break;
      }
    }
    return best;
  }

  using Accumulator = std::map<ModuleTerm, Rational, ModuleTermGreater>;

  void subtract_multiple(Accumulator& acc, const ModuleVector& g, const Monomial& mult, const Rational& c) const {
    for (const auto& e : g) {
      ModuleTerm t{e.term.mono * mult, e.term.comp};
      if (truncation_ && t.mono.degree() >= *truncation_) continue;
      auto [it, fresh] = acc.try_emplace(t);
      if (fresh) {
        it->second = -c * e.coef;
      } else {
        it->second -= c * e.coef;
        if (it->second == 0) acc.erase(it);
      }
    }
  }

  Accumulator make_acc(ModuleVector v) const {
    Accumulator acc(ModuleTermGreater{order_});
    for (auto& e : v)
      if (!truncation_ || e.term.mono.degree() < *truncation_) acc.emplace(e.term, std::move(e.coef));
    return acc;
  }

  ModuleVector top_reduce(ModuleVector v, const std::vector<ModuleVector>& polys, const LeadIndex& index) const {
    Accumulator acc = make_acc(std::move(v));
    while (!acc.empty()) {
      auto it = acc.begin();
      auto k = find_divisor(it->first, polys, index);
      if (!k) break;
      const ModuleVector& g = polys[*k];
      Monomial mult = g.front().term.mono.quotient_of(it->first.mono);
      Rational c = it->second / g.front().coef;
      subtract_multiple(acc, g, mult, c);
    }
    ModuleVector out;
    out.reserve(acc.size());
    for (auto& [t, c] : acc) out.push_back({t, c});
    return out;
  }

  ModuleVector full_reduce(ModuleVector v, const std::vector<ModuleVector>& polys, const LeadIndex& index) const {
    Accumulator acc = make_acc(std::move(v));
    ModuleVector out;
    while (!acc.empty()) {
      auto it = acc.begin();
      auto k = find_divisor(it->first, polys, index);
      if (!k) {
        out.push_back({it->first, std::move(it->second)});
        acc.erase(it);
        continue;
      }
      const ModuleVector& g = polys[*k];
      Monomial mult = g.front().term.mono.quotient_of(it->first.mono);
      Rational c = it->second / g.front().coef;
      subtract_multiple(acc, g, mult, c);
    }
    return out;
  }

  static void make_monic(ModuleVector& v) {
    if (v.empty() || v.front().coef == 1) return;
    Rational inv = 1 / v.front().coef;
    for (auto& e : v) e.coef *= inv;
  }

  ModuleVector s_vector(const ModuleVector& a, const ModuleVector& b, const Monomial& lcm) const {
    Accumulator acc(ModuleTermGreater{order_});
    subtract_multiple(acc, a, a.front().term.mono.quotient_of(lcm), Rational(-1));
    subtract_multiple(acc, b, b.front().term.mono.quotient_of(lcm), Rational(1));
    ModuleVector out;
    for (auto& [t, c] : acc) out.push_back({t, c});
    return out;
  }

  bool product_criterion(const ModuleVector& a, const ModuleVector& b) const {
    return rank_ == 1 && !truncation_ && a.front().term.mono.coprime(b.front().term.mono);
  }

  // Every term of a vector then has degree at least that of its lead, so a pair with lcm in m^T has zero S-vector.
  bool leads_have_least_degree() const {
    return order_.term == MonomialOrder::LocalGrevlex &&
           (rank_ == 1 || order_.position == PositionPolicy::TermOverPosition);
  }

  void update(std::size_t h, std::vector<std::size_t>& active, std::vector<Pair>& pairs) {
    const ModuleTerm& lh = polys_[h].front().term;
    std::vector<Pair> c;
    for (std::size_t g : active)
      if (polys_[g].front().term.comp == lh.comp) c.push_back({g, h, lh.mono.lcm(polys_[g].front().term.mono)});
    std::vector<Pair> d;
    for (std::size_t k = 0; k < c.size(); ++k) {
      bool keep = product_criterion(polys_[h], polys_[c[k].i]);
      if (!keep) {
        keep = true;
        for (std::size_t r = k + 1; r < c.size() && keep; ++r)
          if (c[r].lcm.divides(c[k].lcm)) keep = false;
        for (const auto& q : d)
          if (keep && q.lcm.divides(c[k].lcm)) keep = false;
      }
      if (keep) d.push_back(c[k]);
    }
    std::vector<Pair> kept;
    for (auto& p : pairs) {
      const ModuleTerm& li = polys_[p.i].front().term;
      bool drop = li.comp == lh.comp && lh.mono.divides(p.lcm) &&
                  !(lh.mono.lcm(polys_[p.i].front().term.mono) == p.lcm) &&
                  !(lh.mono.lcm(polys_[p.j].front().term.mono) == p.lcm);
      if (!drop) kept.push_back(std::move(p));
    }
    for (auto& p : d)
      if (!product_criterion(polys_[h], polys_[p.i]))
        if (!truncation_ || !leads_have_least_degree() || p.lcm.degree() < *truncation_) kept.push_back(std::move(p));
    pairs = std::move(kept);
    std::vector<std::size_t> next;
    for (std::size_t g : active) {
      const ModuleTerm& lg = polys_[g].front().term;
      if (!(lg.comp == lh.comp && lh.mono.divides(lg.mono))) next.push_back(g);
    }
    next.push_back(h);
    active = std::move(next);
    rebuild_index(active);
  }

  void rebuild_index(const std::vector<std::size_t>& active) {
    work_index_.assign(rank_, {});
    for (std::size_t g : active) work_index_[polys_[g].front().term.comp].push_back(g);
  }

  void add_poly(ModuleVector v) {
    masks_.push_back(support_mask(v.front().term.mono));
    polys_.push_back(std::move(v));
  }

  void compute(const std::vector<FreeModuleElement>& gens) {
    std::vector<std::size_t> active;
    std::vector<Pair> pairs;
    work_index_.assign(rank_, {});
    for (const auto& g : gens) {
      ModuleVector v = top_reduce(to_module_vector(g, order_, truncation_), polys_, work_index_);
      if (v.empty()) continue;
      make_monic(v);
      add_poly(std::move(v));
      update(polys_.size() - 1, active, pairs);
    }
    while (!pairs.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pairs.size(); ++k) {
        const auto& a = pairs[k].lcm;
        const auto& b = pairs[best].lcm;
        if (a.degree() < b.degree() ||
            (a.degree() == b.degree() && compare(a, b, MonomialOrder::Grevlex) < 0))
          best = k;
      }
      Pair p = pairs[best];
      pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));
      ModuleVector s = s_vector(polys_[p.i], polys_[p.j], p.lcm);
      s = top_reduce(std::move(s), polys_, work_index_);
      if (s.empty()) continue;
      make_monic(s);
      add_poly(std::move(s));
      update(polys_.size() - 1, active, pairs);
    }
    // Interreduce the minimal basis.
    std::vector<ModuleVector> minimal;
    for (std::size_t g : active) minimal.push_back(polys_[g]);
    std::sort(minimal.begin(), minimal.end(), [&](const ModuleVector& a, const ModuleVector& b) {
      return compare(a.front().term, b.front().term, order_) > 0;
    });
    std::vector<std::uint32_t> minimal_masks;
    for (const auto& v : minimal) minimal_masks.push_back(support_mask(v.front().term.mono));
    masks_ = minimal_masks;
    LeadIndex index(rank_);
    for (std::size_t k = 0; k < minimal.size(); ++k) index[minimal[k].front().term.comp].push_back(k);
    for (std::size_t k = 0; k < minimal.size(); ++k) {
      ModuleVector head{minimal[k].front()};
      ModuleVector tail(minimal[k].begin() + 1, minimal[k].end());
      tail = full_reduce(std::move(tail), minimal, index);
      head.insert(head.end(), tail.begin(), tail.end());
      minimal[k] = std::move(head);
    }
    basis_ = std::move(minimal);
    lead_index_ = std::move(index);
    polys_.clear();
    work_index_.clear();
  }

  std::size_t rank_;
  std::size_t nvars_;
  ModuleOrder order_;
  std::optional<unsigned> truncation_;
  std::vector<ModuleVector> basis_;
  LeadIndex lead_index_;
  std::vector<std::uint32_t> masks_;
  std::vector<ModuleVector> polys_;
  LeadIndex work_index_;
};

inline GroebnerBasis groebner_basis(const std::vector<FreeModuleElement>& gens, ModuleOrder order = {}) {
  if (gens.empty()) throw std::invalid_argument("groebner_basis needs generators");
  return GroebnerBasis(gens, gens.front().rank(), gens.front().nvars(), order);
}

// Standard basis of (gens) + m^T in the local order.
inline GroebnerBasis truncated_standard_basis(const std::vector<FreeModuleElement>& gens, std::size_t rank,
                                              std::size_t nvars, unsigned truncation) {
  return GroebnerBasis(gens, rank, nvars, {MonomialOrder::LocalGrevlex, PositionPolicy::TermOverPosition},
                       truncation);
}

// Generators of the syzygy module of module elements, via the augmented module (g_i ; e_i).
inline std::vector<FreeModuleElement> syzygy_basis(const std::vector<FreeModuleElement>& gens) {
  if (gens.empty()) throw std::invalid_argument("syzygy_basis needs generators");
  const std::size_t r = gens.front().rank();
  const std::size_t n = gens.front().nvars();
  const std::size_t m = gens.size();
  std::vector<FreeModuleElement> augmented;
  for (std::size_t i = 0; i < m; ++i) {
    if (gens[i].rank() != r || gens[i].nvars() != n) throw std::invalid_argument("syzygy generator mismatch");
    std::vector<Polynomial> comps = gens[i].components();
    for (std::size_t k = 0; k < m; ++k) comps.push_back(k == i ? Polynomial::constant(n, 1) : Polynomial(n));
    augmented.emplace_back(std::move(comps));
  }
  GroebnerBasis gb(augmented, r + m, n, {MonomialOrder::Grevlex, PositionPolicy::PositionOverTerm});
  std::vector<FreeModuleElement> out;
  for (const auto& v : gb.basis_vectors()) {
    if (v.front().term.comp < r) continue;
    FreeModuleElement full = to_free_module_element(v, r + m, n);
    std::vector<Polynomial> tail(full.components().begin() + static_cast<std::ptrdiff_t>(r), full.components().end());
    out.emplace_back(std::move(tail));
  }
  return out;
}

inline std::vector<FreeModuleElement> syzygy_basis(const std::vector<Polynomial>& gens) {
  std::vector<FreeModuleElement> wrapped;
  for (const auto& g : gens) wrapped.emplace_back(std::vector<Polynomial>{g});
  return syzygy_basis(wrapped);
}

}  // namespace liftvf

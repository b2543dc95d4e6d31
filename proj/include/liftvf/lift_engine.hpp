#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "groebner.hpp"
#include "ks_maps.hpp"
#include "local_algebra.hpp"

namespace liftvf {

struct Obstruction {
  std::string branch;
  unsigned degree = 0;
  std::size_t component = 0;
  Monomial monomial;
};

struct LiftCertificate {
  VectorField eta;
  unsigned cert = 0;
  bool liftable = false;
  // Per branch: n source-field components, each of degree < cert.
  std::vector<std::vector<Polynomial>> xi;
  // Lowest degree of a nonzero residual term tf(xi) - eta o f over all branches; empty when exact.
  std::optional<unsigned> residual_order;
  bool exact = false;
  std::optional<Obstruction> obstruction;
};

namespace detail {

inline FreeModuleElement lift_residual(const Branch& b, const std::vector<Polynomial>& xi, const VectorField& eta) {
  FreeModuleElement r = -Rational(1) * compose(eta, b);
  for (std::size_t v = 0; v < b.n(); ++v) r = r + xi[v] * jacobian_column(b, v);
  return r;
}

}  // namespace detail

// Solves tf(xi) = eta o f modulo m^cert on every branch, for several fields at once.
inline std::vector<LiftCertificate> solve_lift_batch(const MultiGerm& f, const std::vector<VectorField>& etas,
                                                     unsigned cert) {
  const std::size_t k = etas.size();
  std::vector<LiftCertificate> out(k);
  for (std::size_t e = 0; e < k; ++e) {
    if (etas[e].rank() != f.p() || etas[e].nvars() != f.p()) throw InputError("vector field does not match the target");
    out[e].eta = etas[e];
    out[e].cert = cert;
    out[e].liftable = true;
  }
  if (k == 0) return out;
  for (const auto& b : f.branches()) {
    const std::size_t n = b.n(), p = b.p();
    const auto monos = monomials_below(n, cert);
    std::unordered_map<Monomial, std::size_t, MonomialHash> pos;
    for (std::size_t i = 0; i < monos.size(); ++i) pos.emplace(monos[i], i);
    const std::size_t unknowns = monos.size() * n;
    std::vector<FreeModuleElement> jac;
    for (std::size_t v = 0; v < n; ++v) jac.push_back(jacobian_column(b, v).truncate(cert));
    std::vector<FreeModuleElement> rhs;
    for (const auto& eta : etas) rhs.push_back(compose(eta, b, cert));
    LinearSystem sys(unknowns, k);
    std::vector<bool> obstructed(k, false);
    for (const auto& m : monos) {
      for (std::size_t q = 0; q < p; ++q) {
        RationalRow row;
        for (std::size_t v = 0; v < n; ++v)
          for (const auto& t : jac[v][q].terms())
            if (t.mono.divides(m)) row.emplace_back(pos.at(t.mono.quotient_of(m)) * n + v, t.coef);
        for (std::size_t e = 0; e < k; ++e) {
          Rational c = rhs[e][q].coefficient(m);
          if (c != 0) row.emplace_back(unknowns + e, c);
        }
        if (sys.add_equation(to_integer_row(row)) != LinearSystem::Status::Inconsistent) continue;
        for (std::size_t e = 0; e < k; ++e) {
          if (obstructed[e] || sys.consistent(e)) continue;
          obstructed[e] = true;
          if (out[e].liftable) {
            out[e].liftable = false;
            out[e].obstruction = Obstruction{b.label, m.degree(), q, m};
          }
        }
      }
    }
    for (std::size_t e = 0; e < k; ++e) {
      if (!out[e].liftable) continue;
      auto x = sys.solution(e);
      std::vector<std::vector<Term>> comps(n);
      for (std::size_t c = 0; c < unknowns; ++c)
        if (x[c] != 0) comps[c % n].push_back({monos[c / n], x[c]});
      std::vector<Polynomial> xi;
      for (auto& terms : comps) xi.push_back(Polynomial::from_terms(n, std::move(terms)));
      out[e].xi.push_back(std::move(xi));
    }
  }
  for (auto& c : out) {
    if (!c.liftable) {
      c.xi.clear();
      continue;
    }
    std::optional<unsigned> worst;
    for (std::size_t j = 0; j < f.branch_count(); ++j) {
      auto r = detail::lift_residual(f.branch(j), c.xi[j], c.eta).order();
      if (r && (!worst || *r < *worst)) worst = r;
    }
    c.residual_order = worst;
    c.exact = !worst.has_value();
  }
  return out;
}

inline LiftCertificate solve_lift(const MultiGerm& f, const VectorField& eta, unsigned cert) {
  return solve_lift_batch(f, {eta}, cert).front();
}

// Recomputes the residual from the stored source fields; independent of the solver.
inline bool verify_certificate(const MultiGerm& f, const LiftCertificate& c) {
  if (!c.liftable || c.xi.size() != f.branch_count()) return false;
  for (std::size_t j = 0; j < f.branch_count(); ++j) {
    if (c.xi[j].size() != f.n()) return false;
    auto r = detail::lift_residual(f.branch(j), c.xi[j], c.eta).order();
    if (r && (*r < c.cert || c.exact)) return false;
  }
  return true;
}

struct LiftGenerator {
  VectorField eta;
  LiftCertificate certificate;
};

struct LiftModule {
  std::vector<LiftGenerator> generators;
  unsigned certification_order = 0;
  std::optional<std::size_t> count_expected;
  std::string provenance;
  // False when some completion was not found within the degree bound.
  bool complete = true;
  std::vector<std::string> notes;

  std::vector<VectorField> fields() const {
    std::vector<VectorField> out;
    for (const auto& g : generators) out.push_back(g.eta);
    return out;
  }
};

// Certifies every field on f; a field that does not lift is an internal-consistency failure.
inline LiftModule certified_module(const MultiGerm& f, const std::vector<VectorField>& fields, unsigned cert,
                                   std::string provenance) {
  LiftModule m;
  m.certification_order = cert;
  m.provenance = std::move(provenance);
  auto certs = solve_lift_batch(f, fields, cert);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!certs[k].liftable)
      throw ConsistencyError("generator " + std::to_string(k + 1) + " does not lift: obstruction at degree " +
                             std::to_string(certs[k].obstruction->degree) + " in branch " +
                             certs[k].obstruction->branch);
    m.generators.push_back({fields[k], std::move(certs[k])});
  }
  return m;
}

namespace detail {

// Truncated standard basis of (vectors) + m^cert in the target ring.
inline GroebnerBasis target_standard_basis(const std::vector<VectorField>& vs, std::size_t p, unsigned cert) {
  std::vector<FreeModuleElement> gens;
  for (const auto& v : vs) gens.push_back(v.truncate(cert));
  return truncated_standard_basis(gens, p, p, cert);
}

}  // namespace detail

// Greedy Nakayama elimination in input order: keeps g when it is not in span(kept) + m<G> + m^cert.
inline std::vector<std::size_t> nakayama_minimal_indices(const std::vector<VectorField>& fields, std::size_t p,
                                                         unsigned cert) {
  std::vector<VectorField> shifted;
  for (const auto& g : fields)
    for (std::size_t v = 0; v < p; ++v) shifted.push_back(Polynomial::variable(p, v) * g);
  GroebnerBasis gb = detail::target_standard_basis(shifted, p, cert);
  StandardCoordinates coords(gb);
  EchelonBasis span(coords.size());
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < fields.size(); ++k)
    if (span.insert(to_integer_row(coords.rational_row(gb.reduce(fields[k]))))) kept.push_back(k);
  return kept;
}

struct InclusionReport {
  bool equal = true;
  // First element of the reference outside <G> + m^cert, and first element of G outside <R> + m^cert.
  std::optional<std::size_t> reference_witness;
  std::optional<std::size_t> generator_witness;
  std::size_t nakayama_count = 0;
  unsigned cert = 0;
};

// Double inclusion of <G> and <R> modulo m^cert plus the minimal generator count of <G>.
inline InclusionReport verify_generating_set(const std::vector<VectorField>& G, const std::vector<VectorField>& R,
                                             std::size_t p, unsigned cert) {
  InclusionReport rep;
  rep.cert = cert;
  GroebnerBasis g = detail::target_standard_basis(G, p, cert);
  GroebnerBasis r = detail::target_standard_basis(R, p, cert);
  for (std::size_t k = 0; k < R.size() && !rep.reference_witness; ++k)
    if (!g.contains(R[k])) rep.reference_witness = k;
  for (std::size_t k = 0; k < G.size() && !rep.generator_witness; ++k)
    if (!r.contains(G[k])) rep.generator_witness = k;
  rep.equal = !rep.reference_witness && !rep.generator_witness;
  rep.nakayama_count = nakayama_minimal_indices(G, p, cert).size();
  return rep;
}

// Target jet order at which lift certificates of order `cert` determine module identities: all of `cert` when every
// field lifts exactly, else cert / l, since m_S^(lK) lies in f*m^K and every level above i1 is surjective.
inline unsigned module_comparison_order(const std::vector<LiftCertificate>& certs, unsigned cert, unsigned ell) {
  bool exact = true;
  for (const auto& c : certs) exact = exact && c.exact;
  if (exact || ell <= 1) return cert;
  return std::max(1u, cert / ell);
}

enum class CompletionStrategy { Ansatz, Iterative };

struct CompletionConfig {
  CompletionStrategy strategy = CompletionStrategy::Ansatz;
  // Zero selects 2(i+2)l.
  unsigned max_degree = 0;
  // Zero selects M + D with M = l(i+2)+1.
  unsigned cert = 0;
};

namespace detail {

// Quotients theta(f_j) / (TR_e(f_j) + I_j^k theta(f_j) + m^cert), concatenated; k = 0 means no ideal term.
class TangentQuotient {
 public:
  TangentQuotient(const GermAlgebra& g, unsigned cert, unsigned ideal_power = 0) : g_(g), cert_(cert) {
    for (const auto& a : g.branches()) {
      std::vector<FreeModuleElement> gens;
      for (std::size_t v = 0; v < a.n(); ++v) gens.push_back(jacobian_column(a.branch(), v).truncate(cert));
      if (ideal_power > 0)
        for (const auto& [beta, fb] : power_products(a.branch(), ideal_power, cert))
          for (std::size_t q = 0; q < a.p(); ++q) gens.push_back(FreeModuleElement::basis_vector(a.p(), a.n(), q, fb));
      sbs_.push_back(std::make_shared<GroebnerBasis>(truncated_standard_basis(gens, a.p(), a.n(), cert)));
      coords_.push_back(std::make_shared<StandardCoordinates>(*sbs_.back()));
      offsets_.push_back(width_);
      width_ += coords_.back()->size();
    }
  }

  std::size_t width() const { return width_; }

  // Class of (v_j)_j where v_j are already-composed vectors on each branch.
  RationalRow row(const std::vector<FreeModuleElement>& per_branch) const {
    RationalRow out;
    for (std::size_t j = 0; j < sbs_.size(); ++j)
      for (auto& e : coords_[j]->rational_row(sbs_[j]->reduce(per_branch[j]), offsets_[j])) out.push_back(std::move(e));
    return out;
  }

  RationalRow field_row(const VectorField& eta) const {
    std::vector<FreeModuleElement> per;
    for (const auto& a : g_.branches()) per.push_back(compose(eta, a.branch(), cert_));
    return row(per);
  }

 private:
  const GermAlgebra& g_;
  unsigned cert_;
  std::vector<std::shared_ptr<GroebnerBasis>> sbs_;
  std::vector<std::shared_ptr<StandardCoordinates>> coords_;
  std::vector<std::size_t> offsets_;
  std::size_t width_ = 0;
};

// Columns X^beta d/dX_q for lo <= |beta| <= hi, lowest degree first, with their classes.
struct AnsatzColumns {
  std::vector<VectorField> fields;
  std::vector<RationalRow> classes;
};

inline void append_degree(const GermAlgebra& g, const TangentQuotient& tq, unsigned d, unsigned cert,
                          AnsatzColumns& cols) {
  const std::size_t p = g.germ().p();
  std::vector<std::vector<std::pair<Monomial, Polynomial>>> powers;
  for (const auto& a : g.branches()) powers.push_back(power_products(a.branch(), d, cert));
  for (std::size_t k = 0; k < powers.front().size(); ++k)
    for (std::size_t q = 0; q < p; ++q) {
      std::vector<FreeModuleElement> per;
      for (std::size_t j = 0; j < g.branches().size(); ++j)
        per.push_back(FreeModuleElement::basis_vector(p, g.branch(j).n(), q, powers[j][k].second));
      cols.fields.push_back(VectorField::basis_vector(p, p, q, Polynomial::monomial(powers.front()[k].first)));
      cols.classes.push_back(tq.row(per));
    }
}

// Solves sum_c x_c classes[c] = -targets[e] for every e; returns the solutions of consistent right-hand sides.
inline std::vector<std::optional<std::vector<Rational>>> solve_columns(const std::vector<RationalRow>& classes,
                                                                       const std::vector<RationalRow>& targets) {
  const std::size_t unknowns = classes.size();
  std::map<std::size_t, RationalRow> rows;
  for (std::size_t c = 0; c < unknowns; ++c)
    for (const auto& [coord, v] : classes[c]) rows[coord].emplace_back(c, v);
  for (std::size_t e = 0; e < targets.size(); ++e)
    for (const auto& [coord, v] : targets[e]) rows[coord].emplace_back(unknowns + e, Rational(-v));
  LinearSystem sys(unknowns, targets.size());
  for (auto& [coord, row] : rows) sys.add_equation(to_integer_row(row));
  std::vector<std::optional<std::vector<Rational>>> out;
  for (std::size_t e = 0; e < targets.size(); ++e)
    out.push_back(sys.consistent(e) ? std::optional(sys.solution(e)) : std::nullopt);
  return out;
}

}  // namespace detail

struct CompletionPlan {
  unsigned level = 0;
  unsigned max_degree = 0;
  unsigned cert = 0;
};

inline CompletionPlan completion_plan(const GermAlgebra& g, unsigned i, const CompletionConfig& cfg) {
  CompletionPlan plan;
  plan.level = i;
  plan.max_degree = cfg.max_degree ? cfg.max_degree : 2 * (i + 2) * g.ell();
  plan.cert = cfg.cert ? cfg.cert : truncation_order(g, i) + plan.max_degree;
  return plan;
}

// Generators of Lift(f) from a kernel basis of the level i+1 map, completed in degrees >= i+2.
inline LiftModule complete_generators(const GermAlgebra& g, const KSReport& rep, const CompletionConfig& cfg) {
  if (!rep.i1.finite() || !rep.i2.finite() || rep.i1.value != rep.i2.value)
    throw HypothesisError("construction hypothesis violated (i1 != i2): i1 = " + rep.i1.str() + ", i2 = " + rep.i2.str());
  const unsigned i = rep.i1.value;
  const CompletionPlan plan = completion_plan(g, i, cfg);
  const MultiGerm& f = g.germ();
  KSMapModel kernel_model = ks_matrix(g, i + 1);
  const auto& heads = kernel_model.kernel_basis;

  std::vector<VectorField> completed = heads;
  std::vector<bool> done(heads.size(), false);
  std::vector<std::string> notes;
  detail::TangentQuotient tq(g, plan.cert);
  std::vector<RationalRow> targets;
  for (const auto& h : heads) targets.push_back(tq.field_row(h));
  for (std::size_t e = 0; e < heads.size(); ++e) done[e] = targets[e].empty();

  if (cfg.strategy == CompletionStrategy::Ansatz) {
    detail::AnsatzColumns cols;
    for (unsigned d = i + 2; d <= plan.max_degree; ++d) {
      bool all = true;
      for (bool x : done) all = all && x;
      if (all) break;
      detail::append_degree(g, tq, d, plan.cert, cols);
      std::vector<std::size_t> open;
      std::vector<RationalRow> open_targets;
      for (std::size_t e = 0; e < heads.size(); ++e)
        if (!done[e]) {
          open.push_back(e);
          open_targets.push_back(targets[e]);
        }
      auto sols = detail::solve_columns(cols.classes, open_targets);
      for (std::size_t s = 0; s < open.size(); ++s) {
        if (!sols[s]) continue;
        VectorField eta = heads[open[s]];
        for (std::size_t c = 0; c < cols.fields.size(); ++c)
          if ((*sols[s])[c] != 0) eta = eta + (*sols[s])[c] * cols.fields[c];
        completed[open[s]] = eta;
        done[open[s]] = true;
      }
    }
  } else {
    // Level-by-level correction: at level k subtract a preimage of the class modulo I^(k+1).
    for (unsigned k = i + 2; k <= plan.max_degree; ++k) {
      detail::TangentQuotient level(g, plan.cert, k + 1);
      detail::AnsatzColumns cols;
      detail::append_degree(g, level, k, plan.cert, cols);
      std::vector<RationalRow> current;
      for (const auto& eta : completed) current.push_back(level.field_row(eta));
      auto sols = detail::solve_columns(cols.classes, current);
      for (std::size_t e = 0; e < completed.size(); ++e) {
        if (!sols[e]) throw ConsistencyError("no preimage at level " + std::to_string(k) + " for kernel element " +
                                             std::to_string(e + 1));
        for (std::size_t c = 0; c < cols.fields.size(); ++c)
          if ((*sols[e])[c] != 0) completed[e] = completed[e] + (*sols[e])[c] * cols.fields[c];
      }
    }
    for (std::size_t e = 0; e < completed.size(); ++e) done[e] = tq.field_row(completed[e]).empty();
  }

  LiftModule m;
  m.certification_order = plan.cert;
  m.count_expected = heads.size();
  m.provenance = cfg.strategy == CompletionStrategy::Ansatz ? "construct:ansatz" : "construct:iterative";
  auto certs = solve_lift_batch(f, completed, plan.cert);
  for (std::size_t e = 0; e < completed.size(); ++e) {
    if (!done[e]) {
      m.complete = false;
      m.notes.push_back("generator " + std::to_string(e + 1) + ": no polynomial completion within degree " +
                        std::to_string(plan.max_degree));
    }
    if (done[e] && !certs[e].liftable)
      throw ConsistencyError("completed generator " + std::to_string(e + 1) + " failed its lift certificate");
    m.generators.push_back({completed[e], std::move(certs[e])});
  }
  return m;
}

// Lift of the germ squaring one target coordinate: d/dX_k for the others and Lambda d/dLambda.
inline std::vector<VectorField> lift_of_squaring_map(std::size_t p, std::size_t param) {
  if (param >= p) throw InputError("parameter index out of range");
  std::vector<VectorField> out;
  for (std::size_t k = 0; k < p; ++k)
    out.push_back(VectorField::basis_vector(p, p, k, k == param ? Polynomial::variable(p, k) : Polynomial::constant(p, 1)));
  return out;
}

struct DiffeoPair {
  std::vector<Polynomial> H;
  std::vector<Polynomial> H_inv;
};

// Checks H(0) = 0, H o H_inv = id and H_inv o H = id modulo m^cert.
inline void check_diffeo(const DiffeoPair& d, unsigned cert) {
  const std::size_t p = d.H.size();
  if (d.H_inv.size() != p || p == 0) throw InputError("diffeomorphism pair has mismatched arity");
  for (std::size_t k = 0; k < p; ++k) {
    if (d.H[k].constant_term() != 0 || d.H_inv[k].constant_term() != 0)
      throw HypothesisError("diffeomorphism pair fails identity check: nonzero constant term");
    Polynomial x = Polynomial::variable(p, k);
    if (!(d.H[k].substitute(d.H_inv, cert) == x.truncate(cert)) || !(d.H_inv[k].substitute(d.H, cert) == x.truncate(cert)))
      throw HypothesisError("diffeomorphism pair fails identity check in component " + std::to_string(k + 1));
  }
}

// eta -> dH . eta o H^-1 for one field.
inline VectorField transport_field(const VectorField& eta, const DiffeoPair& d) {
  const std::size_t p = d.H.size();
  std::vector<Polynomial> out;
  for (std::size_t k = 0; k < p; ++k) {
    Polynomial acc(p);
    for (std::size_t l = 0; l < p; ++l) acc += d.H[k].partial_derivative(l) * eta[l];
    out.push_back(acc.substitute(d.H_inv));
  }
  return VectorField(std::move(out));
}

inline MultiGerm compose_target(const MultiGerm& f, const std::vector<Polynomial>& H) {
  std::vector<Branch> bs;
  for (const auto& b : f.branches()) {
    Branch c = b;
    c.components.clear();
    for (const auto& h : H) c.components.push_back(h.substitute(b.components));
    bs.push_back(std::move(c));
  }
  return MultiGerm(f.target_vars(), std::move(bs));
}

// Transport of Lift(f) to Lift(H o f), certified on H o f.
inline LiftModule transport(const MultiGerm& f, const LiftModule& lift, const DiffeoPair& d) {
  const unsigned cert = lift.certification_order;
  check_diffeo(d, cert);
  std::vector<VectorField> moved;
  for (const auto& g : lift.generators) moved.push_back(transport_field(g.eta, d));
  LiftModule out = certified_module(compose_target(f, d.H), moved, cert, "transport(" + lift.provenance + ")");
  out.count_expected = lift.count_expected;
  return out;
}

// An unfolding F(x, lambda) of f with the parameter as one target coordinate.
struct UnfoldingSpec {
  MultiGerm F;
  std::size_t parameter_index = 0;
  std::size_t source_parameter_index = 0;
};

// The slice lambda = 0 of F with the parameter coordinate removed.
inline MultiGerm unfolding_base(const UnfoldingSpec& u) {
  const MultiGerm& F = u.F;
  const std::size_t n = F.n() - 1, p = F.p() - 1;
  std::vector<Polynomial> slice;
  for (std::size_t v = 0, w = 0; v <= n; ++v)
    slice.push_back(v == u.source_parameter_index ? Polynomial(n) : Polynomial::variable(n, w++));
  std::vector<std::string> tv;
  for (std::size_t k = 0; k <= p; ++k)
    if (k != u.parameter_index) tv.push_back(F.target_vars()[k]);
  std::vector<Branch> bs;
  for (const auto& b : F.branches()) {
    Branch c;
    c.label = b.label;
    for (std::size_t v = 0; v <= n; ++v)
      if (v != u.source_parameter_index) c.source_vars.push_back(b.source_vars[v]);
    for (std::size_t k = 0; k <= p; ++k)
      if (k != u.parameter_index) c.components.push_back(b.components[k].substitute(slice));
    bs.push_back(std::move(c));
  }
  return MultiGerm(tv, std::move(bs));
}

// Checks that F unfolds f: the parameter component is the parameter and the zero slice is f.
inline void check_unfolding(const MultiGerm& f, const UnfoldingSpec& u) {
  const MultiGerm& F = u.F;
  if (F.n() != f.n() + 1 || F.p() != f.p() + 1) throw InputError("unfolding dimensions do not match the germ");
  if (F.branch_count() != f.branch_count()) throw InputError("unfolding branch count differs from the germ");
  for (const auto& b : F.branches())
    if (!(b.components[u.parameter_index] == Polynomial::variable(F.n(), u.source_parameter_index)))
      throw InputError("branch '" + b.label + "': the parameter component of the unfolding is not the parameter");
  MultiGerm base = unfolding_base(u);
  for (std::size_t j = 0; j < f.branch_count(); ++j)
    if (!(base.branch(j).components == f.branch(j).components))
      throw InputError("branch '" + f.branch(j).label + "': the zero slice of the unfolding differs from the germ");
}

// F(x, lambda) = (f_j(x) + lambda m_j(x), lambda) for per-branch fields m_j; the parameter is appended last.
inline UnfoldingSpec unfold_with_fields(const MultiGerm& f, const std::vector<FreeModuleElement>& m,
                                        const std::string& source_param = "lambda",
                                        const std::string& target_param = "L") {
  if (m.size() != f.branch_count()) throw InputError("one unfolding field per branch is required");
  const std::size_t n = f.n(), p = f.p();
  std::vector<Polynomial> embed;
  for (std::size_t v = 0; v < n; ++v) embed.push_back(Polynomial::variable(n + 1, v));
  const Polynomial lam = Polynomial::variable(n + 1, n);
  std::vector<Branch> bs;
  for (std::size_t j = 0; j < f.branch_count(); ++j) {
    const Branch& b = f.branch(j);
    if (m[j].rank() != p || m[j].nvars() != n) throw InputError("branch '" + b.label + "': unfolding field has the wrong shape");
    Branch c;
    c.label = b.label;
    c.source_vars = b.source_vars;
    c.source_vars.push_back(source_param);
    for (std::size_t q = 0; q < p; ++q)
      c.components.push_back(b.components[q].substitute(embed) + lam * m[j][q].substitute(embed));
    c.components.push_back(lam);
    bs.push_back(std::move(c));
  }
  auto tv = f.target_vars();
  tv.push_back(target_param);
  return {MultiGerm(tv, std::move(bs)), p, n};
}

// Breadth-first search over (degree, branch, component, source monomial) for a field giving a stable unfolding.
inline UnfoldingSpec build_unfolding(const MultiGerm& f, unsigned cap) {
  const std::size_t n = f.n(), p = f.p();
  for (unsigned d = 0; d <= cap; ++d)
    for (std::size_t j = 0; j < f.branch_count(); ++j)
      for (std::size_t q = 0; q < p; ++q)
        for (const auto& mono : monomials_of_degree(n, d, MonomialOrder::Grlex)) {
          std::vector<FreeModuleElement> m(f.branch_count(), FreeModuleElement(p, n));
          m[j] = FreeModuleElement::basis_vector(p, n, q, Polynomial::monomial(mono));
          UnfoldingSpec u = unfold_with_fields(f, m);
          try {
            if (classify_stable(GermAlgebra(u.F)).stable) return u;
          } catch (const CapReachedError&) {
          }
        }
  throw CapReachedError("no one-parameter stable unfolding found up to degree " + std::to_string(cap));
}

struct RestrictionConfig {
  unsigned cert = 12;
  CompletionConfig completion;
  KSConfig ks;
};

// Lift(f) from Lift(F): syzygies force divisibility of the parameter component, then the parameter is set to zero.
inline LiftModule restrict_from_unfolding(const MultiGerm& f, const UnfoldingSpec& u,
                                          const std::optional<std::vector<VectorField>>& supplied,
                                          const RestrictionConfig& cfg) {
  check_unfolding(f, u);
  GermAlgebra G(u.F);
  StabilityClass cls = classify_stable(G);
  if (!cls.stable) throw HypothesisError("unfolding not stable");
  std::vector<VectorField> liftF;
  if (supplied) {
    liftF = *supplied;
    auto certs = solve_lift_batch(u.F, liftF, cfg.cert);
    for (std::size_t k = 0; k < certs.size(); ++k)
      if (!certs[k].liftable)
        throw InputError("supplied unfolding generator " + std::to_string(k + 1) + " does not lift over the unfolding");
  } else {
    if (!cls.isolated)
      throw HypothesisError("Lift(F) unavailable (F not isolated stable and no generators supplied)");
    KSConfig kcfg = cfg.ks;
    KSReport rep = locate_i1_i2(G, kcfg);
    liftF = complete_generators(G, rep, cfg.completion).fields();
  }
  const std::size_t P = u.F.p(), p = f.p(), lam = u.parameter_index;
  std::vector<Polynomial> last;
  for (const auto& eta : liftF) last.push_back(eta[lam]);
  last.push_back(Polynomial::variable(P, lam));
  std::vector<VectorField> candidates;
  std::vector<Polynomial> slice;
  for (std::size_t k = 0, w = 0; k < P; ++k)
    slice.push_back(k == lam ? Polynomial(p) : Polynomial::variable(p, w++));
  for (const auto& syz : syzygy_basis(last)) {
    VectorField combo(P, P);
    for (std::size_t k = 0; k < liftF.size(); ++k) combo = combo + syz[k] * liftF[k];
    std::vector<Polynomial> restricted;
    for (std::size_t k = 0; k < P; ++k)
      if (k != lam) restricted.push_back(combo[k].substitute(slice));
    VectorField r(std::move(restricted));
    if (!r.is_zero()) candidates.push_back(std::move(r));
  }
  std::vector<VectorField> minimal;
  for (std::size_t idx : nakayama_minimal_indices(candidates, p, cfg.cert)) minimal.push_back(candidates[idx]);
  LiftModule m = certified_module(f, minimal, cfg.cert, supplied ? "unfold:supplied" : "unfold:constructed");
  return m;
}

}  // namespace liftvf

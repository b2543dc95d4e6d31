// Acceptance run over the catalog: one PASS/FAIL line per criterion, details indented below it.

#include <chrono>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "liftvf/cli.hpp"

namespace {

using namespace liftvf;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  bool pass = true;
  std::vector<std::string> details;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back((ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { details.push_back("note  " + what); }
};

GermDocument entry(const std::string& name) { return load_catalog_entry(name); }

KSReport placement(const MultiGerm& f, const KSConfig& cfg = {}) { return locate_i1_i2(GermAlgebra(f), cfg); }

std::vector<std::string> finite_entries() {
  std::vector<std::string> out;
  for (const auto& n : catalog_names())
    if (entry(n).germ.n() <= entry(n).germ.p()) out.push_back(n);
  return out;
}

// Jet order for comparing `fields` with `reference` on f, raised until it reaches `floor`.
InclusionReport compare(const MultiGerm& f, const std::vector<VectorField>& fields, const std::vector<VectorField>& reference,
                        unsigned cert, unsigned floor = 12) {
  const unsigned ell = GermAlgebra(f).ell();
  for (;;) {
    auto certs = solve_lift_batch(f, fields, cert);
    auto rc = solve_lift_batch(f, reference, cert);
    certs.insert(certs.end(), rc.begin(), rc.end());
    for (const auto& c : certs)
      if (!c.liftable) {
        InclusionReport r;
        r.equal = false;
        r.cert = cert;
        return r;
      }
    const unsigned order = module_comparison_order(certs, cert, ell);
    if (order >= floor) return verify_generating_set(fields, reference, f.p(), order);
    cert = floor * ell;
  }
}

LiftModule construct_lift(const MultiGerm& f) {
  GermAlgebra g(f);
  KSReport rep = locate_i1_i2(g, {});
  return complete_generators(g, rep, {});
}

LiftModule restrict_lift(const GermDocument& d) {
  std::optional<std::vector<VectorField>> supplied;
  if (d.unfolding && !d.unfolding->lift.empty()) supplied = d.unfolding->lift;
  return restrict_from_unfolding(d.germ, d.unfolding_spec(), supplied, {});
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  return os.str();
}

Criterion criterion1() {
  Criterion c;
  struct Case {
    const char* name;
    std::size_t expected;
  };
  const Case cases[] = {{"ex31-n2", 2},     {"ex31-n3", 3},      {"phi-2", 4},        {"phi-3", 7},
                        {"whitney-psi2", 4}, {"whitney-psi3", 11}, {"multistable", 2}, {"ex35-quartic", 2},
                        {"cusp-pair", 2},    {"lines-cusp", 2},    {"ex36", 2},        {"fold-line", 3}};
  for (const auto& k : cases) {
    auto t0 = Clock::now();
    GermDocument d = entry(k.name);
    std::string got;
    bool ok = false;
    try {
      if (d.option_or("run", "") == "unfold") {
        LiftModule m = restrict_lift(d);
        const std::size_t count = nakayama_minimal_indices(m.fields(), d.germ.p(), m.certification_order).size();
        got = std::to_string(count) + " (minimal generators of the restricted module)";
        ok = count == k.expected && m.generators.size() == count;
      } else {
        GermAlgebra g(d.germ);
        KSConfig cfg;
        KSReport rep = locate_i1_i2(g, cfg);
        const std::size_t count = min_generators(g, rep, cfg);
        got = std::to_string(count);
        ok = count == k.expected;
      }
    } catch (const Error& e) {
      got = std::string("none: ") + e.what();
    }
    const double s = seconds_since(t0);
    ok = ok && s < 30.0;
    c.expect(ok, std::string(k.name) + ": expected " + std::to_string(k.expected) + ", got " + got + " in " + fmt_seconds(s));
  }
  return c;
}

Criterion criterion2() {
  Criterion c;
  GermAlgebra g(entry("rieger-ruas").germ);
  for (ComputationMode mode : {ComputationMode::Formula, ComputationMode::BruteForce}) {
    auto t0 = Clock::now();
    KSConfig cfg;
    cfg.mode = mode;
    KSReport rep = locate_i1_i2(g, cfg);
    const std::size_t count = min_generators(g, rep, cfg);
    const double s = seconds_since(t0);
    const double limit = mode == ComputationMode::Formula ? 5.0 : 600.0;
    c.expect(count == 17 && s < limit,
             "rieger-ruas " + to_string(mode) + ": " + std::to_string(count) + " generators in " + fmt_seconds(s));
  }
  return c;
}

Criterion criterion3() {
  Criterion c;
  for (const auto* name : {"whitney-psi2", "whitney-psi3", "multistable", "cusp-pair"}) {
    GermDocument d = entry(name);
    LiftModule m = construct_lift(d.germ);
    InclusionReport r = compare(d.germ, m.fields(), d.reference, m.certification_order);
    c.expect(r.equal, std::string(name) + ": constructed module equals the reference at jet order " + std::to_string(r.cert));
  }
  for (const auto* name : {"fold-line", "odd-cusp-k1", "odd-cusp-k2", "bigerm-69"}) {
    GermDocument d = entry(name);
    LiftModule m = restrict_lift(d);
    InclusionReport r = compare(d.germ, m.fields(), d.reference, m.certification_order);
    c.expect(r.equal, std::string(name) + ": restricted module equals the reference at jet order " + std::to_string(r.cert));
  }
  {
    GermDocument d = entry("umbrella-transport");
    LiftModule moved = transport(d.germ, construct_lift(d.germ), d.diffeo_pair());
    MultiGerm target = compose_target(d.germ, d.diffeo->H);
    InclusionReport r = compare(target, moved.fields(), d.diffeo->expect, moved.certification_order);
    c.expect(r.equal && moved.generators.size() == 4,
             "umbrella-transport: transported module equals the four listed fields at jet order " + std::to_string(r.cert));
  }
  for (const char sign : {'+', '-'})
    for (unsigned k = 0; k <= 2; ++k) {
      const std::string name = std::string("sk-") + (sign == '+' ? "plus-" : "minus-") + std::to_string(k);
      GermDocument d = entry(name);
      if (k == 0) {
        LiftModule m = restrict_lift(d);
        c.note(name + ": " + std::to_string(m.generators.size()) + " generators, no five-field relation at k = 0");
        continue;
      }
      const auto& v = d.reference;
      const Polynomial X = Polynomial::variable(3, 0), Y = Polynomial::variable(3, 1), U = Polynomial::variable(3, 2);
      bool literal = false, tripled = false;
      for (int s : {1, -1}) {
        VectorField lhs = Rational(-1) * (Y * v[0]) + U * v[1] + Rational(s) * (X * v[3]);
        literal = literal || lhs == v[4];
        tripled = tripled || lhs == Rational(3) * v[4];
      }
      c.expect(literal, name + ": -Y v1 + U v2 +- X v4 = v5 as a polynomial identity" +
                            std::string(tripled ? " (the left side equals 3 v5)" : ""));
    }
  return c;
}

Criterion criterion4() {
  Criterion c;
  auto lv = [](unsigned v) { return LevelValue{LevelValue::Kind::Finite, v}; };
  struct Case {
    const char* name;
    LevelValue i1, i2;
  };
  const Case cases[] = {{"whitney-psi2", lv(0), lv(0)},
                        {"whitney-psi3", lv(0), lv(0)},
                        {"ex31-n2", lv(0), lv(0)},
                        {"ex31-n3", lv(0), lv(0)},
                        {"phi-2", lv(0), lv(0)},
                        {"phi-3", lv(0), lv(0)},
                        {"multistable", lv(0), lv(0)},
                        {"ex35-quartic", lv(1), lv(1)},
                        {"cusp-pair", lv(1), lv(1)},
                        {"lines-cusp", lv(1), lv(1)},
                        {"ex36", lv(1), lv(1)},
                        {"embedding-e", lv(0), {LevelValue::Kind::MinusInfinity, 0}},
                        {"axes-e0", lv(0), lv(0)}};
  for (const auto& k : cases) {
    KSReport rep = placement(entry(k.name).germ);
    c.expect(rep.i1 == k.i1 && rep.i2 == k.i2, std::string(k.name) + ": (i1, i2) = (" + rep.i1.str() + ", " + rep.i2.str() +
                                                    "), expected (" + k.i1.str() + ", " + k.i2.str() + ")");
  }
  GermDocument e0 = entry("axes-e0");
  GermAlgebra g(e0.germ);
  KSConfig cfg;
  KSReport rep = locate_i1_i2(g, cfg);
  const std::size_t count = min_generators(g, rep, cfg);
  LiftModule m = construct_lift(e0.germ);
  InclusionReport r = compare(e0.germ, m.fields(), e0.reference, m.certification_order);
  c.expect(count == 2 && r.equal, "axes-e0: " + std::to_string(count) + " generators, equal to {X d/dX, Y d/dY} at jet order " +
                                      std::to_string(r.cert));
  return c;
}

Criterion criterion5() {
  Criterion c;
  std::size_t levels = 0, invariants = 0;
  for (const auto& name : finite_entries()) {
    GermAlgebra g(entry(name).germ);
    KSConfig cfg;
    cfg.cap = 6;
    KSReport rep = locate_i1_i2(g, cfg);
    const unsigned top = rep.i1.finite() ? rep.i1.value + 2 : cfg.cap;
    for (unsigned i = 0; i <= top; ++i) {
      KSMapModel m = ks_matrix(g, i + 1);
      if (!m.surjective()) continue;
      const Integer formula = kernel_dimension_formula(g, i, ComputationMode::BruteForce);
      const bool ok = formula == static_cast<unsigned long>(m.kernel_dimension());
      ++levels;
      if (!ok)
        c.expect(false, name + " level " + std::to_string(i + 1) + ": formula " + formula.get_str() + ", matrix " +
                            std::to_string(m.kernel_dimension()));
    }
    for (unsigned i = 0; i <= 3; ++i) {
      auto a = higher_invariants_formula(g, i);
      auto b = higher_invariants_bruteforce(g, i);
      ++invariants;
      if (a.delta != b.delta || a.gamma != b.gamma)
        c.expect(false, name + " i = " + std::to_string(i) + ": higher invariants differ between formula and brute force");
    }
  }
  c.expect(c.pass, std::to_string(levels) + " surjective levels and " + std::to_string(invariants) +
                       " higher-invariant pairs compared over " + std::to_string(finite_entries().size()) + " germs");
  c.note("suspended-69 (n > p) is covered through its core bigerm-69");
  return c;
}

Criterion criterion6() {
  Criterion c;
  std::size_t mono = 0, order = 0, pattern = 0, mather = 0, additive = 0;
  for (const auto& name : finite_entries()) {
    const MultiGerm f = entry(name).germ;
    KSConfig cfg;
    cfg.cap = 4;
    cfg.scan_all = true;
    KSReport rep = placement(f, cfg);
    for (std::size_t a = 0; a < rep.levels.size(); ++a)
      for (std::size_t b = a + 1; b < rep.levels.size(); ++b) {
        ++mono;
        if ((rep.levels[a].surjective && !rep.levels[b].surjective) || (rep.levels[b].injective && !rep.levels[a].injective))
          c.expect(false, name + ": monotonicity fails between levels " + std::to_string(a) + " and " + std::to_string(b));
      }
    if (rep.i1.finite() && rep.i2.finite()) {
      ++order;
      if (rep.i1.value < rep.i2.value) c.expect(false, name + ": i1 < i2");
    }
    if (rep.i1.finite() && rep.i1 == rep.i2) {
      ++pattern;
      const unsigned i = rep.i1.value;
      for (const auto& l : rep.levels) {
        const bool ok = l.i < i ? (l.injective && !l.surjective) : l.i > i ? (l.surjective && !l.injective) : (l.surjective && l.injective);
        if (!ok) c.expect(false, name + ": level pattern broken at level " + std::to_string(l.i));
      }
    }
    GermAlgebra g(f);
    StabilityClass cls = classify_stable(g);
    if (cls.stable) {
      ++mather;
      auto h = higher_invariants(g, 0, ComputationMode::Both);
      const Integer rhs = (Integer(static_cast<unsigned long>(f.p())) - static_cast<unsigned long>(f.n())) * h.delta + h.gamma;
      const bool holds = rhs == static_cast<unsigned long>(f.p());
      if (holds != cls.isolated)
        c.expect(false, name + ": p = (p-n) delta + gamma is " + (holds ? "true" : "false") + " but level 0 is " +
                            (cls.isolated ? "" : "not ") + "injective");
      if (!cls.isolated) c.note(name + ": stable, not isolated; (p-n) delta + gamma = " + rhs.get_str() + " against p = " + std::to_string(f.p()));
    }
    unsigned sum = 0;
    for (const auto& b : f.branches()) sum += GermAlgebra(MultiGerm(f.target_vars(), {b})).delta();
    ++additive;
    if (sum != g.delta()) c.expect(false, name + ": delta is not additive over branches");
  }
  c.expect(c.pass, std::to_string(mono) + " monotonicity pairs, " + std::to_string(order) + " orderings, " +
                       std::to_string(pattern) + " level patterns, " + std::to_string(mather) + " stable germs, " +
                       std::to_string(additive) + " additivity checks");
  return c;
}

Criterion criterion7() {
  Criterion c;
  GermDocument d = entry("suspended-69");
  MultiGerm core = reduce_to_core(d.germ);
  GermDocument core_doc = d;
  core_doc.germ = core;
  LiftModule m = restrict_lift(core_doc);
  InclusionReport r = compare(core, m.fields(), d.reference, std::max(12u, m.certification_order));
  c.expect(r.equal, "core lift equals the two-generator module at jet order " + std::to_string(r.cert));
  LiftModule on_f = certified_module(d.germ, m.fields(), std::max(12u, m.certification_order), "reduce");
  c.expect(on_f.generators.size() == 2, "core generators lift on the suspended germ");
  const VectorField minus = parse_field_list("(9*Y^2, -2*X^2*Y);", d.germ.target_vars()).at(0);
  const VectorField plus = parse_field_list("(9*Y^2, 2*X^2*Y);", d.germ.target_vars()).at(0);
  const bool minus_lifts = solve_lift(d.germ, minus, 12).liftable;
  const bool plus_lifts = solve_lift(d.germ, plus, 12).liftable;
  c.expect(minus_lifts != plus_lifts, std::string("certified sign: 9Y^2 d/dX ") + (minus_lifts ? "-" : "+") +
                                          " 2X^2Y d/dY lifts, the other sign does not");
  return c;
}

MultiGerm germ_from_json(const Json& j) {
  std::vector<std::string> target = j["target"].get<std::vector<std::string>>();
  std::vector<Branch> bs;
  for (const auto& b : j["branches"]) {
    Branch br;
    br.label = b["label"].get<std::string>();
    br.source_vars = b["source"].get<std::vector<std::string>>();
    for (const auto& comp : b["components"]) br.components.push_back(parse_polynomial(comp.get<std::string>(), br.source_vars));
    bs.push_back(std::move(br));
  }
  return MultiGerm(target, std::move(bs));
}

// Re-solves every emitted generator from its printed form, independently of the stored certificate.
Criterion criterion8() {
  Criterion c;
  std::size_t total = 0, failed = 0;
  for (const auto& name : catalog_names()) {
    RunResult run = run_catalog_entry(entry(name));
    const Json& rep = run.report;
    std::vector<std::pair<std::string, std::string>> sections = {{"lift", "germ"},
                                                                 {"transported_lift", "transported_germ"},
                                                                 {"original_lift", "germ"}};
    if (rep.contains("core")) sections[0].second = "core";
    for (const auto& [lift_key, germ_key] : sections) {
      if (!rep.contains(lift_key) || !rep.contains(germ_key)) continue;
      const MultiGerm on = germ_from_json(rep[germ_key]);
      const unsigned cert = rep[lift_key]["certification_order"].get<unsigned>();
      for (const auto& g : rep[lift_key]["generators"]) {
        std::string text;
        std::vector<std::string> comps = g["components"].get<std::vector<std::string>>();
        text = "(";
        for (std::size_t k = 0; k < comps.size(); ++k) text += (k ? ", " : "") + comps[k];
        text += ");";
        const VectorField eta = parse_field_list(text, on.target_vars()).at(0);
        LiftCertificate fresh = solve_lift(on, eta, cert);
        ++total;
        if (!fresh.liftable || !verify_certificate(on, fresh)) {
          ++failed;
          c.expect(false, name + ": " + lift_key + " generator " + g["field"].get<std::string>() + " does not re-verify");
        }
      }
    }
  }
  c.expect(failed == 0, std::to_string(total) + " emitted generators re-solved, " + std::to_string(failed) + " failures");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
      {"minimal generator counts", criterion1},
      {"rieger-ruas count through the formula path", criterion2},
      {"explicit generator sets and the five-field relation", criterion3},
      {"placements of i1 and i2", criterion4},
      {"formula against brute force", criterion5},
      {"property suites over the catalog", criterion6},
      {"suspended bigerm against its core", criterion7},
      {"independent re-verification of emitted generators", criterion8}};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = Clock::now();
    Criterion c;
    try {
      c = criteria[k].second();
    } catch (const std::exception& e) {
      c.expect(false, std::string("aborted: ") + e.what());
    }
    all = all && c.pass;
    std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << (k + 1) << ": " << criteria[k].first << "  ("
              << fmt_seconds(seconds_since(t0)) << ")\n";
    for (const auto& d : c.details)
      if (verbose || d.rfind("ok", 0) != 0) std::cout << "        " << d << "\n";
  }
  return all ? 0 : 1;
}

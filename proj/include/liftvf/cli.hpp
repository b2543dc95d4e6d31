#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "document.hpp"
#include "invariants.hpp"
#include "ks_maps.hpp"
#include "lift_engine.hpp"
#include "report.hpp"

namespace liftvf {

struct RunOptions {
  std::optional<unsigned> max_i;
  std::optional<unsigned> max_degree;
  std::optional<unsigned> cert;
  std::optional<ComputationMode> mode;
  std::optional<CompletionStrategy> strategy;
  unsigned level = 1;
  // kernel: also export the level matrix and its domain basis.
  bool export_matrix = false;
  std::optional<std::string> fields_text;
  bool inject_fault = false;
};

struct RunResult {
  Json report;
  ExitCode code = ExitCode::Ok;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze", "kernel", "construct", "unfold", "check", "transport", "reduce"};
  return names;
}

inline CompletionStrategy parse_strategy(const std::string& s) {
  if (s == "ansatz") return CompletionStrategy::Ansatz;
  if (s == "iterative") return CompletionStrategy::Iterative;
  throw InputError("unknown completion strategy '" + s + "' (expected ansatz or iterative)");
}

inline std::string to_string(CompletionStrategy s) { return s == CompletionStrategy::Ansatz ? "ansatz" : "iterative"; }

namespace detail {

inline std::string error_kind(ExitCode c) {
  switch (c) {
    case ExitCode::Ok:
      return "";
    case ExitCode::HypothesisViolated:
      return "hypothesis";
    case ExitCode::CapReached:
      return "cap";
    case ExitCode::InputError:
      return "input";
    case ExitCode::ConsistencyFailure:
      return "consistency";
  }
  return "internal";
}

class Runner {
 public:
  Runner(const GermDocument& doc, const RunOptions& opt, const std::string& command)
      : doc_(doc), opt_(opt), rep_(command, doc.name) {
    max_i_ = opt.max_i ? *opt.max_i : doc.option_unsigned("max_i").value_or(6);
    max_degree_ = opt.max_degree ? opt.max_degree : doc.option_unsigned("max_degree");
    cert_ = opt.cert ? opt.cert : doc.option_unsigned("cert");
    mode_ = opt.mode ? *opt.mode : parse_mode(doc.option_or("mode", "both"));
    strategy_ = opt.strategy ? *opt.strategy : parse_strategy(doc.option_or("strategy", "ansatz"));
    auto& c = rep_["config"];
    c["max_i"] = max_i_;
    c["max_degree"] = max_degree_ ? Json(*max_degree_) : Json("auto");
    c["cert_order"] = cert_ ? Json(*cert_) : Json("auto");
    c["mode"] = to_string(mode_);
    c["strategy"] = to_string(strategy_);
    if (command == "kernel") c["level"] = opt.level;
    if (opt.inject_fault) c["inject_fault"] = true;
  }

  RunResult run(const std::string& command) {
    ExitCode code = ExitCode::Ok;
    std::string message;
    try {
      rep_["germ"] = germ_json(doc_.name, doc_.germ);
      if (command == "analyze")
        analyze(doc_.germ);
      else if (command == "kernel")
        kernel();
      else if (command == "construct")
        construct();
      else if (command == "unfold")
        unfold();
      else if (command == "check")
        check();
      else if (command == "transport")
        transport_cmd();
      else if (command == "reduce")
        reduce();
      else
        throw InputError("unknown command '" + command + "'");
      if (code == ExitCode::Ok && !rep_.all_checks_passed()) {
        code = ExitCode::ConsistencyFailure;
        message = "one or more checks failed";
      }
      if (code == ExitCode::Ok && cap_note_) {
        code = ExitCode::CapReached;
        message = *cap_note_;
      }
    } catch (const Error& e) {
      code = e.code();
      message = e.what();
    } catch (const std::exception& e) {
      code = ExitCode::ConsistencyFailure;
      message = std::string("internal error: ") + e.what();
    }
    rep_.finish(code, error_kind(code), message);
    return {rep_.json(), code};
  }

 private:
  KSConfig ks_config() const {
    KSConfig k;
    k.cap = max_i_;
    k.mode = mode_;
    k.inject_formula_fault = opt_.inject_fault;
    return k;
  }

  // Invariants, stability and the level scan for f.
  KSReport analyze(const MultiGerm& f, const std::string& prefix = "") {
    GermAlgebra g = rep_.timed(prefix + "algebra", [&] { return GermAlgebra(f); });
    const unsigned higher_cap = std::min(max_i_, 3u);
    GermInvariants inv = rep_.timed(prefix + "invariants", [&] { return germ_invariants(g, higher_cap, mode_); });
    rep_[prefix + "invariants"] = invariants_json(inv);
    StabilityClass cls = rep_.timed(prefix + "stability", [&] { return classify_stable(g); });
    const bool free_applicable = cls.stable && f.n() < f.p();
    Json freeness = {{"applicable", free_applicable},
                     {"p_equals_n_plus_1", f.p() == f.n() + 1},
                     {"delta_equals_branch_count", inv.delta == f.branch_count()},
                     {"informational", true}};
    freeness["value"] = free_applicable ? Json(f.p() == f.n() + 1 && inv.delta == f.branch_count()) : Json(nullptr);
    rep_[prefix + "stability"] = {{"stable", cls.stable}, {"isolated", cls.isolated}, {"freeness_predicate", freeness}};
    if (cls.stable) {
      // On stable germs the count p = (p-n)delta + gamma holds exactly when level 0 is injective.
      Integer rhs = (Integer(static_cast<long>(f.p())) - Integer(static_cast<long>(f.n()))) * inv.delta + inv.gamma;
      const bool holds = rhs == static_cast<long>(f.p());
      rep_.check(prefix + "mather-identity", holds == cls.isolated,
                 "p = " + std::to_string(f.p()) + ", (p-n)delta + gamma = " + rhs.get_str() +
                     (cls.isolated ? ", isolated" : ", not isolated"));
    }
    KSConfig kcfg = ks_config();
    KSReport ks = rep_.timed(prefix + "ks", [&] { return locate_i1_i2(g, kcfg); });
    if (ks.i1.finite() && ks.i2.finite() && ks.i1.value == ks.i2.value) {
      rep_.timed(prefix + "min_generators", [&] { return min_generators(g, ks, kcfg); });
    } else {
      ks.min_generators_note = "not applicable (i1 = " + ks.i1.str() + ", i2 = " + ks.i2.str() + ")";
      rep_.warn(prefix + "minimal generator count needs i1 = i2; found i1 = " + ks.i1.str() + ", i2 = " + ks.i2.str());
    }
    rep_[prefix + "ks"] = ks_json(ks);
    if (!ks_) ks_ = ks;
    return ks;
  }

  unsigned default_cert(const MultiGerm& f, const KSReport& ks) const {
    if (cert_) return *cert_;
    GermAlgebra g(f);
    const unsigned i = ks.i1.finite() ? ks.i1.value : 0;
    return std::max(12u, 2 * truncation_order(g, i));
  }

  void kernel() {
    const MultiGerm& f = doc_.germ;
    analyze(f);
    GermAlgebra g(f);
    KSMapModel m = rep_.timed("kernel", [&] { return ks_matrix(g, opt_.level); });
    Json basis = Json::array();
    for (const auto& v : m.kernel_basis) basis.push_back(v.render(f.target_vars()));
    rep_["kernel"] = {{"level", opt_.level},
                      {"truncation_order", m.truncation_order},
                      {"domain_dimension", m.domain_dimension()},
                      {"dimension", m.kernel_dimension()},
                      {"surjective", m.surjective()},
                      {"basis", basis}};
    if (opt_.export_matrix) {
      Json domain = Json::array();
      for (const auto& v : m.domain_basis) domain.push_back(v.render(f.target_vars()));
      Json rows = Json::array();
      for (const auto& r : m.matrix) {
        Json row = Json::array();
        for (const auto& x : r) row.push_back(x.get_str());
        rows.push_back(row);
      }
      rep_["kernel"]["domain_basis"] = domain;
      rep_["kernel"]["matrix"] = rows;
    }
  }

  LiftModule construct_on(const MultiGerm& f, const KSReport& ks) {
    GermAlgebra g(f);
    CompletionConfig cfg;
    cfg.strategy = strategy_;
    cfg.max_degree = max_degree_.value_or(0);
    cfg.cert = cert_.value_or(0);
    LiftModule m = rep_.timed("construct", [&] { return complete_generators(g, ks, cfg); });
    if (!m.complete) cap_note_ = "completion not found within the degree bound";
    if (ks.min_generators)
      rep_.check("count-matches-kernel", m.generators.size() == *ks.min_generators,
                 std::to_string(m.generators.size()) + " generators, kernel dimension " + std::to_string(*ks.min_generators));
    return m;
  }

  LiftModule unfold_on(const MultiGerm& f, const KSReport& ks) {
    UnfoldingSpec spec;
    std::optional<std::vector<VectorField>> supplied;
    if (doc_.unfolding) {
      spec = doc_.unfolding_spec();
      if (!doc_.unfolding->lift.empty()) supplied = doc_.unfolding->lift;
      rep_["unfolding"] = {{"source", "document"}};
    } else {
      const unsigned cap = max_degree_.value_or(6);
      spec = rep_.timed("build_unfolding", [&] { return build_unfolding(f, cap); });
      rep_["unfolding"] = {{"source", "search"}};
    }
    auto& u = rep_["unfolding"];
    u["germ"] = germ_json(doc_.name + "-unfolding", spec.F);
    u["parameter"] = spec.F.target_vars()[spec.parameter_index];
    u["supplied_generators"] = supplied ? supplied->size() : 0;
    RestrictionConfig rcfg;
    rcfg.cert = default_cert(f, ks);
    rcfg.ks = ks_config();
    rcfg.completion.strategy = strategy_;
    rcfg.completion.max_degree = max_degree_.value_or(0);
    return rep_.timed("unfold", [&] { return restrict_from_unfolding(f, spec, supplied, rcfg); });
  }

  // Lift(f) through the pipeline named by the document, or the one its invariants allow.
  LiftModule lift_of(const MultiGerm& f, const KSReport& ks) {
    std::string how = doc_.option_or("run", "");
    if (how != "construct" && how != "unfold") {
      const bool applicable = ks.i1.finite() && ks.i2.finite() && ks.i1.value == ks.i2.value;
      how = applicable ? "construct" : "unfold";
    }
    return how == "construct" ? construct_on(f, ks) : unfold_on(f, ks);
  }

  void verify_all(const MultiGerm& on, const LiftModule& m) {
    std::size_t bad = 0;
    for (const auto& g : m.generators) {
      LiftCertificate fresh = solve_lift(on, g.eta, g.certificate.cert);
      if (!verify_certificate(on, g.certificate) || !fresh.liftable) ++bad;
    }
    rep_.check("certificates-reverify", bad == 0, std::to_string(bad) + " of " + std::to_string(m.generators.size()) + " failed");
  }

  void compare_reference(const std::vector<VectorField>& reference, const LiftModule& m, const MultiGerm& on,
                         const std::string& name) {
    if (reference.empty()) return;
    const unsigned cert = m.certification_order;
    InclusionReport r = rep_.timed(name, [&] {
      std::vector<LiftCertificate> certs = solve_lift_batch(on, reference, cert);
      for (const auto& g : m.generators) certs.push_back(g.certificate);
      const unsigned order = module_comparison_order(certs, cert, GermAlgebra(on).ell());
      return verify_generating_set(m.fields(), reference, on.p(), order);
    });
    std::string detail = "jet order " + std::to_string(r.cert) + ", minimal count of reference " + std::to_string(r.nakayama_count);
    if (r.reference_witness) detail += ", reference field " + std::to_string(*r.reference_witness + 1) + " not generated";
    if (r.generator_witness) detail += ", generator " + std::to_string(*r.generator_witness + 1) + " not in the reference module";
    rep_.check(name, r.equal, detail);
  }

  void finish_lift(const MultiGerm& on, const LiftModule& m, const std::string& key = "lift") {
    rep_[key] = lift_json(on, m);
    verify_all(on, m);
  }

  void construct() {
    const MultiGerm& f = doc_.germ;
    KSReport ks = analyze(f);
    LiftModule m = construct_on(f, ks);
    finish_lift(f, m);
    compare_reference(doc_.reference, m, f, "reference-module-equality");
  }

  void unfold() {
    const MultiGerm& f = doc_.germ;
    KSReport ks = analyze(f);
    LiftModule m = unfold_on(f, ks);
    if (ks.min_generators)
      rep_.check("count-matches-kernel", m.generators.size() == *ks.min_generators,
                 std::to_string(m.generators.size()) + " generators, kernel dimension " + std::to_string(*ks.min_generators));
    finish_lift(f, m);
    compare_reference(doc_.reference, m, f, "reference-module-equality");
  }

  void check() {
    const MultiGerm& f = doc_.germ;
    if (!opt_.fields_text) throw InputError("check needs --fields FILE");
    auto fields = parse_field_list(*opt_.fields_text, f.target_vars());
    if (fields.empty()) throw InputError("the fields file lists no vector fields");
    KSReport ks = analyze(f);
    const unsigned cert = default_cert(f, ks);
    auto certs = rep_.timed("check", [&] { return solve_lift_batch(f, fields, cert); });
    Json out = Json::array();
    std::size_t failed = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!certs[k].liftable) ++failed;
      out.push_back({{"field", fields[k].render(f.target_vars())}, {"certificate", certificate_json(f, certs[k])}});
    }
    rep_["fields"] = out;
    if (failed)
      throw HypothesisError(std::to_string(failed) + " of " + std::to_string(fields.size()) +
                            " claimed fields do not lift at jet order " + std::to_string(cert));
  }

  void transport_cmd() {
    const MultiGerm& f = doc_.germ;
    DiffeoPair d = doc_.diffeo_pair();
    KSReport ks = analyze(f);
    LiftModule base = lift_of(f, ks);
    finish_lift(f, base);
    MultiGerm moved_germ = compose_target(f, d.H);
    rep_["transported_germ"] = germ_json(doc_.name + "-transported", moved_germ);
    LiftModule moved = rep_.timed("transport", [&] { return transport(f, base, d); });
    rep_["transported_lift"] = lift_json(moved_germ, moved);
    std::size_t bad = 0;
    for (const auto& g : moved.generators)
      if (!verify_certificate(moved_germ, g.certificate)) ++bad;
    rep_.check("transported-certificates-reverify", bad == 0, std::to_string(bad) + " failed");
    compare_reference(doc_.diffeo->expect, moved, moved_germ, "transported-module-equality");
  }

  void reduce() {
    const MultiGerm& f = doc_.germ;
    MultiGerm core = rep_.timed("reduce", [&] { return reduce_to_core(f); });
    rep_["core"] = germ_json(doc_.name + "-core", core);
    KSReport ks = analyze(core);
    LiftModule m = lift_of(core, ks);
    finish_lift(core, m);
    LiftModule on_f = rep_.timed("certify_on_original", [&] {
      return certified_module(f, m.fields(), m.certification_order, "reduce(" + m.provenance + ")");
    });
    rep_["original_lift"] = lift_json(f, on_f);
    std::size_t bad = 0;
    for (const auto& g : on_f.generators)
      if (!verify_certificate(f, g.certificate)) ++bad;
    rep_.check("lift-equal-on-original", bad == 0, "core generators certified on the original germ");
    compare_reference(doc_.reference, m, core, "reference-module-equality");
  }

  const GermDocument& doc_;
  RunOptions opt_;
  AnalysisReport rep_;
  unsigned max_i_ = 6;
  std::optional<unsigned> max_degree_;
  std::optional<unsigned> cert_;
  ComputationMode mode_ = ComputationMode::Both;
  CompletionStrategy strategy_ = CompletionStrategy::Ansatz;
  std::optional<KSReport> ks_;
  std::optional<std::string> cap_note_;
};

}  // namespace detail

inline RunResult run(const std::string& command, const GermDocument& doc, const RunOptions& opt = {}) {
  return detail::Runner(doc, opt, command).run(command);
}

// Report for a document that failed to load.
inline RunResult input_failure(const std::string& command, const std::string& name, const Error& e,
                               const RunOptions& opt = {}) {
  AnalysisReport rep(command, name);
  auto& c = rep["config"];
  c["max_i"] = opt.max_i.value_or(6);
  c["max_degree"] = opt.max_degree ? Json(*opt.max_degree) : Json("auto");
  c["cert_order"] = opt.cert ? Json(*opt.cert) : Json("auto");
  c["mode"] = to_string(opt.mode.value_or(ComputationMode::Both));
  c["strategy"] = to_string(opt.strategy.value_or(CompletionStrategy::Ansatz));
  rep.finish(e.code(), detail::error_kind(e.code()), e.what());
  return {rep.json(), e.code()};
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path catalog_dir() {
  if (const char* w = std::getenv("LIFTVF_WORKDIR"); w && *w) return std::filesystem::path(w) / "catalog";
#ifdef LIFTVF_SOURCE_DIR
  return std::filesystem::path(LIFTVF_SOURCE_DIR) / "catalog";
#else
  return "catalog";
#endif
}

inline std::vector<std::string> catalog_names(const std::filesystem::path& dir = catalog_dir()) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir)) throw InputError("catalog directory '" + dir.string() + "' not found");
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".germ") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline GermDocument load_catalog_entry(const std::string& name, const std::filesystem::path& dir = catalog_dir()) {
  auto path = dir / (name + ".germ");
  if (!std::filesystem::exists(path)) throw InputError("no catalog entry '" + name + "'");
  GermDocument d = parse_document(read_text_file(path));
  if (d.name != name) throw InputError("catalog file '" + path.string() + "' declares germ '" + d.name + "'");
  return d;
}

// Runs the command a catalog entry names; the exit code the entry expects is recorded next to the actual one.
inline RunResult run_catalog_entry(const GermDocument& doc, const RunOptions& opt = {}) {
  const std::string command = doc.option_or("run", "analyze");
  const std::string effective = command == "construct" || command == "unfold" || command == "transport" ||
                                        command == "reduce" || command == "analyze"
                                    ? command
                                    : "analyze";
  RunResult r = run(effective, doc, opt);
  const int expected = static_cast<int>(doc.option_unsigned("expect_exit").value_or(0));
  r.report["catalog"] = {{"expected_exit", expected}, {"as_expected", expected == static_cast<int>(r.code)}};
  return r;
}

namespace detail {

inline std::string join(const Json& arr, const std::string& sep) {
  std::string s;
  for (std::size_t k = 0; k < arr.size(); ++k) s += (k ? sep : "") + arr[k].get<std::string>();
  return s;
}

inline std::string value_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline void render_lift_text(std::ostringstream& os, const std::string& title, const Json& lift) {
  os << title << " (" << lift["provenance"].get<std::string>() << ", jet order " << lift["certification_order"].dump()
     << "): " << lift["count"].dump() << " generators\n";
  std::size_t k = 1;
  for (const auto& g : lift["generators"]) {
    const auto& c = g["certificate"];
    std::string status = c["exact"].get<bool>() ? "exact" : c["liftable"].get<bool>() ? "certified" : "NOT LIFTABLE";
    os << "  eta" << k++ << " = " << g["field"].get<std::string>() << "   [" << status << "]\n";
  }
  for (const auto& n : lift["notes"]) os << "  note: " << n.get<std::string>() << "\n";
}

}  // namespace detail

// Human-readable rendering of a report.
inline std::string render_text(const Json& r) {
  std::ostringstream os;
  os << r["command"].get<std::string>() << " " << r["document"].get<std::string>() << "\n";
  auto germ_line = [&](const std::string& title, const Json& g) {
    os << title << ": " << g["name"].get<std::string>() << "  (n=" << g["n"].dump() << ", p=" << g["p"].dump() << ")\n";
    for (const auto& b : g["branches"])
      os << "  " << b["label"].get<std::string>() << "(" << detail::join(b["source"], ", ") << ") = ("
         << detail::join(b["components"], ", ") << ")\n";
  };
  if (r.contains("germ")) germ_line("germ", r["germ"]);
  if (r.contains("core")) germ_line("core", r["core"]);
  if (r.contains("invariants")) {
    const auto& inv = r["invariants"];
    os << "corank " << inv["corank"].dump() << ", delta " << inv["delta"].dump() << ", gamma "
       << detail::value_text(inv["gamma"]) << ", ell " << inv["ell"].dump() << "\n";
  }
  if (r.contains("stability"))
    os << "stable " << (r["stability"]["stable"].get<bool>() ? "yes" : "no") << ", isolated "
       << (r["stability"]["isolated"].get<bool>() ? "yes" : "no") << "\n";
  if (r.contains("ks")) {
    const auto& ks = r["ks"];
    for (const auto& l : ks["levels"])
      os << "  level " << l["i"].dump() << ": " << (l["surjective"].get<bool>() ? "surjective" : "not surjective") << ", "
         << (l["injective"].get<bool>() ? "injective" : "not injective") << ", ker " << l["kernel_dimension"].dump()
         << ", coker " << l["cokernel_dimension"].dump() << " [" << l["mode"].get<std::string>() << "]\n";
    os << "i1 = " << detail::value_text(ks["i1"]) << ", i2 = " << detail::value_text(ks["i2"]) << "\n";
    if (!ks["min_generators"].is_null())
      os << "minimal number of generators: " << ks["min_generators"].dump() << "  (" << ks["min_generators_note"].get<std::string>()
         << ")\n";
  }
  if (r.contains("kernel")) {
    const auto& k = r["kernel"];
    os << "kernel at level " << k["level"].dump() << ": dimension " << k["dimension"].dump() << "\n";
    for (const auto& v : k["basis"]) os << "  " << v.get<std::string>() << "\n";
  }
  if (r.contains("unfolding")) germ_line("unfolding", r["unfolding"]["germ"]);
  if (r.contains("lift")) detail::render_lift_text(os, "Lift", r["lift"]);
  if (r.contains("fields"))
    for (const auto& f : r["fields"])
      os << "  " << f["field"].get<std::string>() << ": "
         << (f["certificate"]["liftable"].get<bool>() ? "liftable" : "not liftable") << "\n";
  if (r.contains("transported_germ")) germ_line("transported germ", r["transported_germ"]);
  if (r.contains("transported_lift")) detail::render_lift_text(os, "transported Lift", r["transported_lift"]);
  if (r.contains("original_lift")) detail::render_lift_text(os, "Lift on the original germ", r["original_lift"]);
  for (const auto& c : r["checks"])
    os << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  "
       << c["detail"].get<std::string>() << "\n";
  for (const auto& w : r["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
  if (!r["error"].is_null())
    os << "error (" << r["error"]["kind"].get<std::string>() << "): " << r["error"]["message"].get<std::string>() << "\n";
  return os.str();
}

}  // namespace liftvf

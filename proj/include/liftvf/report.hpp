#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "invariants.hpp"
#include "ks_maps.hpp"
#include "lift_engine.hpp"

namespace liftvf {

inline constexpr const char* kToolVersion = "0.3.0";

inline constexpr const char* kJetAssumption =
    "germs are polynomial data over Q; identities between analytic germs are certified up to the stated jet order";

using Json = nlohmann::ordered_json;

// Small integers become JSON numbers, anything wider a decimal string.
inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline Json level_value_json(const LevelValue& v) {
  if (v.finite()) return v.value;
  return v.str();
}

inline Json germ_json(const std::string& name, const MultiGerm& f) {
  Json branches = Json::array();
  for (const auto& b : f.branches()) {
    Json comps = Json::array();
    for (const auto& c : b.components) comps.push_back(c.render(b.source_vars));
    branches.push_back({{"label", b.label}, {"source", b.source_vars}, {"components", comps}});
  }
  return {{"name", name}, {"n", f.n()}, {"p", f.p()}, {"target", f.target_vars()}, {"branches", branches}};
}

inline Json invariants_json(const GermInvariants& inv) {
  Json higher = Json::array();
  for (const auto& [i, h] : inv.higher)
    higher.push_back({{"i", i}, {"delta", integer_json(h.delta)}, {"gamma", integer_json(h.gamma)}, {"mode", to_string(h.mode)}});
  return {{"corank", inv.corank},
          {"delta", inv.delta},
          {"branch_delta", inv.branch_delta},
          {"gamma", integer_json(inv.gamma)},
          {"ell", inv.ell},
          {"stabilized_order", inv.stabilized_order},
          {"higher", higher}};
}

inline Json ks_json(const KSReport& rep) {
  Json levels = Json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"i", l.i},
                      {"surjective", l.surjective},
                      {"injective", l.injective},
                      {"domain_dimension", l.domain_dimension},
                      {"kernel_dimension", l.kernel_dimension},
                      {"cokernel_dimension", l.cokernel_dimension},
                      {"truncation_order", l.truncation_order},
                      {"mode", to_string(l.source)}});
  Json out = {{"cap", rep.cap}, {"mode", to_string(rep.mode)}, {"i1", level_value_json(rep.i1)},
              {"i2", level_value_json(rep.i2)}, {"levels", levels}};
  out["min_generators"] = rep.min_generators ? Json(*rep.min_generators) : Json(nullptr);
  out["min_generators_note"] = rep.min_generators_note;
  return out;
}

inline Json certificate_json(const MultiGerm& f, const LiftCertificate& c) {
  Json out = {{"cert", c.cert}, {"liftable", c.liftable}, {"exact", c.exact}};
  out["residual_order"] = c.residual_order ? Json(*c.residual_order) : Json(nullptr);
  Json xi = Json::array();
  for (std::size_t j = 0; j < c.xi.size(); ++j) {
    const auto& b = f.branch(j);
    Json comps = Json::array();
    for (const auto& q : c.xi[j]) comps.push_back(q.render(b.source_vars));
    xi.push_back({{"branch", b.label}, {"components", comps}});
  }
  out["xi"] = xi;
  if (c.obstruction) {
    const auto& o = *c.obstruction;
    const auto& b = f.branches();
    auto it = std::find_if(b.begin(), b.end(), [&](const Branch& x) { return x.label == o.branch; });
    std::string mono = it == b.end() ? "" : Polynomial::monomial(o.monomial).render(it->source_vars);
    out["obstruction"] = {{"branch", o.branch}, {"degree", o.degree}, {"component", o.component + 1}, {"monomial", mono}};
  } else {
    out["obstruction"] = nullptr;
  }
  return out;
}

inline Json field_json(const VectorField& v, const std::vector<std::string>& names) {
  Json comps = Json::array();
  for (const auto& c : v.components()) comps.push_back(c.render(names));
  return comps;
}

// Generators are certified on `on`, a germ with the same target as `names`.
inline Json lift_json(const MultiGerm& on, const LiftModule& m) {
  Json gens = Json::array();
  for (const auto& g : m.generators)
    gens.push_back({{"field", g.eta.render(on.target_vars())},
                    {"components", field_json(g.eta, on.target_vars())},
                    {"certificate", certificate_json(on, g.certificate)}});
  Json out = {{"provenance", m.provenance}, {"certification_order", m.certification_order}, {"complete", m.complete},
              {"count", m.generators.size()}};
  out["count_expected"] = m.count_expected ? Json(*m.count_expected) : Json(nullptr);
  out["generators"] = gens;
  out["notes"] = m.notes;
  return out;
}

// Report under construction: sections are added by the pipeline stages.
class AnalysisReport {
 public:
  AnalysisReport(const std::string& command, const std::string& document_name) {
    json_["tool"] = {{"name", "liftvf"}, {"version", kToolVersion}};
    json_["command"] = command;
    json_["document"] = document_name;
    json_["assumptions"] = Json::array({kJetAssumption});
    json_["config"] = Json::object();
    json_["checks"] = Json::array();
    json_["warnings"] = Json::array();
    json_["timings_ms"] = Json::object();
  }

  Json& operator[](const std::string& key) { return json_[key]; }
  const Json& json() const { return json_; }

  void warn(const std::string& w) { json_["warnings"].push_back(w); }

  bool check(const std::string& name, bool passed, const std::string& detail = "") {
    json_["checks"].push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    return passed;
  }

  bool all_checks_passed() const {
    for (const auto& c : json_["checks"])
      if (!c["passed"].get<bool>()) return false;
    return true;
  }

  template <class Fn>
  auto timed(const std::string& stage, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto record = [&] {
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      json_["timings_ms"][stage] = ms;
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto r = fn();
      record();
      return r;
    }
  }

  void finish(ExitCode code, const std::string& error_kind = "", const std::string& message = "") {
    json_["exit_code"] = static_cast<int>(code);
    if (code == ExitCode::Ok)
      json_["error"] = nullptr;
    else
      json_["error"] = {{"kind", error_kind}, {"message", message}};
  }

 private:
  Json json_;
};

}  // namespace liftvf

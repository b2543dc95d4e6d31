// Liftable vector fields over the Whitney umbrella (v, y) -> (v, y^2, v*y).

#include <iostream>

#include "liftvf/document.hpp"
#include "liftvf/invariants.hpp"
#include "liftvf/ks_maps.hpp"
#include "liftvf/lift_engine.hpp"

int main() {
  using namespace liftvf;
  GermDocument doc = parse_document(R"(
    germ umbrella {
      n = 2; p = 3;
      target (V, W, X);
      branch a(v, y) = (v, y^2, v*y);
    }
  )");
  GermAlgebra g(doc.germ);
  KSConfig cfg;
  KSReport rep = locate_i1_i2(g, cfg);
  std::cout << "delta " << g.delta() << ", i1 = " << rep.i1.str() << ", i2 = " << rep.i2.str() << "\n";
  std::cout << "minimal generators: " << min_generators(g, rep, cfg) << "\n";

  LiftModule lift = complete_generators(g, rep, {});
  for (const auto& gen : lift.generators)
    std::cout << "  " << gen.eta.render(doc.germ.target_vars()) << (gen.certificate.exact ? "  exact" : "  certified") << "\n";

  // Shear the target and carry the module along.
  auto H = parse_field_list("(V - W, W, X);", doc.germ.target_vars()).at(0).components();
  auto Hinv = parse_field_list("(V + W, W, X);", doc.germ.target_vars()).at(0).components();
  LiftModule moved = transport(doc.germ, lift, {H, Hinv});
  std::cout << "after (V, W, X) -> (V - W, W, X):\n";
  for (const auto& gen : moved.generators) std::cout << "  " << gen.eta.render(doc.germ.target_vars()) << "\n";
}

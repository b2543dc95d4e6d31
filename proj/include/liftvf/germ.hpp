#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "free_module.hpp"
#include "polynomial.hpp"

namespace liftvf {

// One source point of a multigerm: p components in n local variables.
struct Branch {
  std::string label;
  std::vector<std::string> source_vars;
  std::vector<Polynomial> components;

  std::size_t n() const { return source_vars.size(); }
  std::size_t p() const { return components.size(); }

  friend bool operator==(const Branch& a, const Branch& b) {
    return a.label == b.label && a.source_vars == b.source_vars && a.components == b.components;
  }
};

// Vector field germ in the target: p components in the p target variables.
using VectorField = FreeModuleElement;

class MultiGerm {
 public:
  MultiGerm() = default;

  MultiGerm(std::vector<std::string> target_vars, std::vector<Branch> branches)
      : target_vars_(std::move(target_vars)), branches_(std::move(branches)) {
    if (branches_.empty()) throw InputError("a multigerm needs at least one branch");
    std::set<std::string> labels;
    const std::size_t n = branches_.front().n();
    for (const auto& b : branches_) {
      if (!labels.insert(b.label).second) throw InputError("duplicate branch label '" + b.label + "'");
      if (b.n() != n) throw InputError("branch '" + b.label + "': source dimension differs from the first branch");
      if (b.n() == 0) throw InputError("branch '" + b.label + "': no source variables");
      if (b.p() != target_vars_.size())
        throw InputError("branch '" + b.label + "': expected " + std::to_string(target_vars_.size()) +
                         " components, found " + std::to_string(b.p()));
      for (std::size_t q = 0; q < b.p(); ++q) {
        if (b.components[q].nvars() != n)
          throw InputError("branch '" + b.label + "': component variable count mismatch");
        if (b.components[q].constant_term() != 0)
          throw InputError("branch '" + b.label + "': component " + std::to_string(q + 1) +
                           " has a nonzero constant term");
      }
    }
  }

  std::size_t n() const { return branches_.front().n(); }
  std::size_t p() const { return target_vars_.size(); }
  std::size_t branch_count() const { return branches_.size(); }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(std::size_t j) const { return branches_.at(j); }
  const std::vector<std::string>& target_vars() const { return target_vars_; }

  VectorField zero_field() const { return VectorField(p(), p()); }

  VectorField field(std::vector<Polynomial> components) const {
    VectorField v(std::move(components));
    if (v.rank() != p() || v.nvars() != p()) throw InputError("vector field does not live on the target");
    return v;
  }

  friend bool operator==(const MultiGerm& a, const MultiGerm& b) {
    return a.target_vars_ == b.target_vars_ && a.branches_ == b.branches_;
  }

 private:
  std::vector<std::string> target_vars_;
  std::vector<Branch> branches_;
};

// eta o f_j for a target field eta, truncated below `order` when given.
inline FreeModuleElement compose(const VectorField& eta, const Branch& b,
                                  std::optional<unsigned> order = std::nullopt) {
  std::vector<Polynomial> out;
  out.reserve(eta.rank());
  for (std::size_t q = 0; q < eta.rank(); ++q) out.push_back(eta[q].substitute(b.components, order));
  return FreeModuleElement(std::move(out));
}

// Column v of the Jacobian of a branch: d f / d x_v.
inline FreeModuleElement jacobian_column(const Branch& b, std::size_t v) {
  std::vector<Polynomial> col;
  for (const auto& c : b.components) col.push_back(c.partial_derivative(v));
  return FreeModuleElement(std::move(col));
}

}  // namespace liftvf

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "germ.hpp"
#include "lift_engine.hpp"
#include "parse.hpp"

namespace liftvf {

// Germ-document grammar:
//
//   germ NAME {
//     n = 1; p = 2;                              (optional consistency checks)
//     target (X, Y);                             (optional; default X, Y, U, V, W or X1..Xp)
//     branch ID(x, ...) = (poly, ..., poly);
//     reference { (poly, ..., poly); ... }       (claimed generators of Lift(f))
//     unfolding {
//       target (X, Y, U);
//       parameter x -> X;
//       branch ID(x, y) = (...);
//       lift { (...); ... }                      (optional generators of Lift(F))
//     }
//     diffeo { H = (...); inverse = (...); expect { (...); ... } }
//     options { run = construct; max_i = 6; max_degree = 12; cert = 12; }
//   }
//
// Polynomials use + - * ^, parentheses and rational literals a/b; '#' starts a comment.

struct UnfoldingBlock {
  std::vector<std::string> target_vars;
  std::string source_parameter;
  std::string target_parameter;
  std::vector<Branch> branches;
  std::vector<VectorField> lift;
};

struct DiffeoBlock {
  std::vector<Polynomial> H;
  std::vector<Polynomial> inverse;
  std::vector<VectorField> expect;
};

struct GermDocument {
  std::string name;
  MultiGerm germ;
  std::vector<VectorField> reference;
  std::optional<UnfoldingBlock> unfolding;
  std::optional<DiffeoBlock> diffeo;
  std::map<std::string, std::string> options;

  std::optional<unsigned> option_unsigned(const std::string& key) const {
    auto it = options.find(key);
    if (it == options.end()) return std::nullopt;
    return static_cast<unsigned>(std::stoul(it->second));
  }

  std::string option_or(const std::string& key, const std::string& fallback) const {
    auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
  }

  UnfoldingSpec unfolding_spec() const {
    if (!unfolding) throw InputError("document '" + name + "' has no unfolding block");
    const auto& u = *unfolding;
    MultiGerm F(u.target_vars, u.branches);
    UnfoldingSpec spec{F, 0, 0};
    auto tp = std::find(u.target_vars.begin(), u.target_vars.end(), u.target_parameter);
    if (tp == u.target_vars.end()) throw InputError("unfolding parameter '" + u.target_parameter + "' is not a target variable");
    spec.parameter_index = static_cast<std::size_t>(tp - u.target_vars.begin());
    const auto& sv = u.branches.front().source_vars;
    auto sp = std::find(sv.begin(), sv.end(), u.source_parameter);
    if (sp == sv.end()) throw InputError("unfolding parameter '" + u.source_parameter + "' is not a source variable");
    spec.source_parameter_index = static_cast<std::size_t>(sp - sv.begin());
    for (const auto& b : u.branches)
      if (b.source_vars[spec.source_parameter_index] != u.source_parameter)
        throw InputError("branch '" + b.label + "': the unfolding parameter must sit at the same source position");
    return spec;
  }

  DiffeoPair diffeo_pair() const {
    if (!diffeo) throw InputError("document '" + name + "' has no diffeo block");
    return {diffeo->H, diffeo->inverse};
  }
};

inline std::vector<std::string> default_target_names(std::size_t p) {
  static const std::vector<std::string> small = {"X", "Y", "U", "V", "W"};
  std::vector<std::string> out;
  for (std::size_t k = 0; k < p; ++k) out.push_back(p <= small.size() ? small[k] : "X" + std::to_string(k + 1));
  return out;
}

namespace detail {

class DocumentParser {
 public:
  explicit DocumentParser(std::string_view text) : lex_(text) {}

  GermDocument parse() {
    GermDocument doc;
    lex_.expect("germ");
    doc.name = lex_.read_name().text;
    lex_.expect("{");
    std::optional<std::size_t> n, p;
    std::vector<std::string> target;
    std::vector<std::pair<Token, Branch>> branches;
    std::vector<std::vector<std::string>> reference_text;
    Token reference_at;
    while (!lex_.accept("}")) {
      Token key = lex_.expect_ident();
      if (key.text == "n" || key.text == "p") {
        lex_.expect("=");
        auto v = static_cast<std::size_t>(std::stoul(lex_.expect_number().text));
        (key.text == "n" ? n : p) = v;
        lex_.expect(";");
      } else if (key.text == "target") {
        target = name_list();
        lex_.expect(";");
      } else if (key.text == "branch") {
        branches.push_back({key, branch(target_size(p, target))});
      } else if (key.text == "reference") {
        reference_at = key;
        reference_text = field_block();
      } else if (key.text == "unfolding") {
        doc.unfolding = unfolding();
      } else if (key.text == "diffeo") {
        diffeo_text_ = diffeo_block();
        diffeo_at_ = key;
      } else if (key.text == "options") {
        options(doc.options);
      } else {
        Lexer::fail(key, "unknown section '" + key.text + "'");
      }
    }
    if (lex_.peek().kind != Token::Kind::End) Lexer::fail(lex_.peek(), "trailing input after the germ block");
    if (branches.empty()) throw InputError("germ '" + doc.name + "' declares no branches");
    const std::size_t pp = branches.front().second.p();
    if (p && *p != pp) Lexer::fail(branches.front().first, "declared p = " + std::to_string(*p) + " but the branch has " + std::to_string(pp) + " components");
    if (target.empty()) target = default_target_names(pp);
    if (target.size() != pp) throw InputError("target declares " + std::to_string(target.size()) + " variables, branches have " + std::to_string(pp) + " components");
    for (const auto& [tok, b] : branches)
      if (n && b.n() != *n) Lexer::fail(tok, "branch '" + b.label + "': declared n = " + std::to_string(*n) + " but the branch has " + std::to_string(b.n()) + " variables");
    std::vector<Branch> bs;
    for (auto& [tok, b] : branches) bs.push_back(std::move(b));
    doc.germ = MultiGerm(target, std::move(bs));
    doc.reference = fields(reference_text, target, reference_at);
    if (diffeo_text_) {
      DiffeoBlock d;
      d.H = polys(diffeo_text_->H, target, diffeo_at_, "H");
      d.inverse = polys(diffeo_text_->inverse, target, diffeo_at_, "inverse");
      d.expect = fields(diffeo_text_->expect, target, diffeo_at_);
      doc.diffeo = std::move(d);
    }
    if (doc.unfolding) {
      auto& u = *doc.unfolding;
      u.lift = fields(lift_text_, u.target_vars, lift_at_);
    }
    return doc;
  }

  // A bare list of tuples "(...); (...);" in the given target variables.
  std::vector<VectorField> field_list(const std::vector<std::string>& names) {
    std::vector<std::vector<std::string>> text;
    Token at = lex_.peek();
    while (lex_.peek().kind != Token::Kind::End) {
      text.push_back(raw_tuple());
      lex_.expect(";");
    }
    return fields(text, names, at);
  }

 private:
  struct DiffeoText {
    std::vector<std::string> H, inverse;
    std::vector<std::vector<std::string>> expect;
  };

  static std::size_t target_size(const std::optional<std::size_t>& p, const std::vector<std::string>& target) {
    if (!target.empty()) return target.size();
    return p.value_or(0);
  }

  std::vector<std::string> name_list() {
    lex_.expect("(");
    std::vector<std::string> out;
    do out.push_back(lex_.expect_ident().text);
    while (lex_.accept(","));
    lex_.expect(")");
    return out;
  }

  // Raw text of a parenthesized, comma-separated tuple, split at top-level commas.
  std::vector<std::string> raw_tuple() {
    lex_.expect("(");
    std::vector<std::string> out(1);
    int depth = 0;
    for (;;) {
      Token t = lex_.next();
      if (t.kind == Token::Kind::End) Lexer::fail(t, "unterminated tuple");
      if (t.kind == Token::Kind::Punct && t.text == "(") ++depth;
      if (t.kind == Token::Kind::Punct && t.text == ")") {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && t.kind == Token::Kind::Punct && t.text == ",") {
        out.emplace_back();
        continue;
      }
      out.back() += t.text + " ";
    }
    return out;
  }

  Branch branch(std::size_t expected_p) {
    Branch b;
    b.label = lex_.expect_ident().text;
    b.source_vars = name_list();
    lex_.expect("=");
    Token at = lex_.peek();
    auto comps = raw_tuple();
    lex_.expect(";");
    if (expected_p && comps.size() != expected_p)
      Lexer::fail(at, "branch '" + b.label + "': expected " + std::to_string(expected_p) + " components, found " + std::to_string(comps.size()));
    for (const auto& c : comps) b.components.push_back(poly(c, b.source_vars, at));
    return b;
  }

  static Polynomial poly(const std::string& text, const std::vector<std::string>& names, const Token& at) {
    try {
      return parse_polynomial(text, names);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      auto cut = msg.find(": ");
      throw ParseError(at.line, at.column, cut == std::string::npos ? msg : msg.substr(cut + 2));
    }
  }

  static std::vector<Polynomial> polys(const std::vector<std::string>& text, const std::vector<std::string>& names,
                                       const Token& at, const std::string& what) {
    if (text.size() != names.size())
      Lexer::fail(at, what + " needs " + std::to_string(names.size()) + " components, found " + std::to_string(text.size()));
    std::vector<Polynomial> out;
    for (const auto& t : text) out.push_back(poly(t, names, at));
    return out;
  }

  static std::vector<VectorField> fields(const std::vector<std::vector<std::string>>& text,
                                         const std::vector<std::string>& names, const Token& at) {
    std::vector<VectorField> out;
    for (const auto& t : text) out.emplace_back(polys(t, names, at, "vector field"));
    return out;
  }

  std::vector<std::vector<std::string>> field_block() {
    lex_.expect("{");
    std::vector<std::vector<std::string>> out;
    while (!lex_.accept("}")) {
      out.push_back(raw_tuple());
      lex_.expect(";");
    }
    return out;
  }

  UnfoldingBlock unfolding() {
    UnfoldingBlock u;
    lex_.expect("{");
    bool have_param = false;
    while (!lex_.accept("}")) {
      Token key = lex_.expect_ident();
      if (key.text == "target") {
        u.target_vars = name_list();
        lex_.expect(";");
      } else if (key.text == "parameter") {
        u.source_parameter = lex_.expect_ident().text;
        lex_.expect("->");
        u.target_parameter = lex_.expect_ident().text;
        lex_.expect(";");
        have_param = true;
      } else if (key.text == "branch") {
        if (u.target_vars.empty()) Lexer::fail(key, "unfolding target must be declared before its branches");
        u.branches.push_back(branch(u.target_vars.size()));
      } else if (key.text == "lift") {
        lift_at_ = key;
        lift_text_ = field_block();
      } else {
        Lexer::fail(key, "unknown unfolding entry '" + key.text + "'");
      }
    }
    if (!have_param) throw InputError("unfolding block needs a 'parameter src -> TGT;' line");
    if (u.branches.empty()) throw InputError("unfolding block declares no branches");
    return u;
  }

  DiffeoText diffeo_block() {
    DiffeoText d;
    lex_.expect("{");
    while (!lex_.accept("}")) {
      Token key = lex_.expect_ident();
      if (key.text == "H" || key.text == "inverse") {
        lex_.expect("=");
        (key.text == "H" ? d.H : d.inverse) = raw_tuple();
        lex_.expect(";");
      } else if (key.text == "expect") {
        d.expect = field_block();
      } else {
        Lexer::fail(key, "unknown diffeo entry '" + key.text + "'");
      }
    }
    return d;
  }

  void options(std::map<std::string, std::string>& out) {
    lex_.expect("{");
    while (!lex_.accept("}")) {
      Token key = lex_.expect_ident();
      lex_.expect("=");
      Token v = lex_.next();
      if (v.kind != Token::Kind::Ident && v.kind != Token::Kind::Number) Lexer::fail(v, "expected an option value");
      out[key.text] = v.text;
      lex_.expect(";");
    }
  }

  Lexer lex_;
  std::optional<DiffeoText> diffeo_text_;
  Token diffeo_at_;
  std::vector<std::vector<std::string>> lift_text_;
  Token lift_at_;
};

inline std::string render_tuple(const std::vector<Polynomial>& ps, const std::vector<std::string>& names) {
  std::string s = "(";
  for (std::size_t k = 0; k < ps.size(); ++k) s += (k ? ", " : "") + ps[k].render(names);
  return s + ")";
}

inline std::string render_names(const std::vector<std::string>& names) {
  std::string s = "(";
  for (std::size_t k = 0; k < names.size(); ++k) s += (k ? ", " : "") + names[k];
  return s + ")";
}

inline void render_fields(std::ostringstream& os, const std::string& indent, const std::string& key,
                          const std::vector<VectorField>& fs, const std::vector<std::string>& names) {
  if (fs.empty()) return;
  os << indent << key << " {\n";
  for (const auto& f : fs) os << indent << "  " << render_tuple(f.components(), names) << ";\n";
  os << indent << "}\n";
}

inline void render_branch(std::ostringstream& os, const std::string& indent, const Branch& b) {
  os << indent << "branch " << b.label << render_names(b.source_vars) << " = " << render_tuple(b.components, b.source_vars)
     << ";\n";
}

}  // namespace detail

inline GermDocument parse_document(std::string_view text) { return detail::DocumentParser(text).parse(); }

inline std::vector<VectorField> parse_field_list(std::string_view text, const std::vector<std::string>& names) {
  return detail::DocumentParser(text).field_list(names);
}

// Canonical text; parse_document(render_document(d)) reproduces d.
inline std::string render_document(const GermDocument& d) {
  std::ostringstream os;
  const auto& f = d.germ;
  os << "germ " << d.name << " {\n";
  os << "  n = " << f.n() << "; p = " << f.p() << ";\n";
  os << "  target " << detail::render_names(f.target_vars()) << ";\n";
  for (const auto& b : f.branches()) detail::render_branch(os, "  ", b);
  detail::render_fields(os, "  ", "reference", d.reference, f.target_vars());
  if (d.unfolding) {
    const auto& u = *d.unfolding;
    os << "  unfolding {\n";
    os << "    target " << detail::render_names(u.target_vars) << ";\n";
    os << "    parameter " << u.source_parameter << " -> " << u.target_parameter << ";\n";
    for (const auto& b : u.branches) detail::render_branch(os, "    ", b);
    detail::render_fields(os, "    ", "lift", u.lift, u.target_vars);
    os << "  }\n";
  }
  if (d.diffeo) {
    os << "  diffeo {\n";
    os << "    H = " << detail::render_tuple(d.diffeo->H, f.target_vars()) << ";\n";
    os << "    inverse = " << detail::render_tuple(d.diffeo->inverse, f.target_vars()) << ";\n";
    detail::render_fields(os, "    ", "expect", d.diffeo->expect, f.target_vars());
    os << "  }\n";
  }
  if (!d.options.empty()) {
    os << "  options {";
    for (const auto& [k, v] : d.options) os << " " << k << " = " << v << ";";
    os << " }\n";
  }
  os << "}\n";
  return os.str();
}

inline bool operator==(const UnfoldingBlock& a, const UnfoldingBlock& b) {
  return a.target_vars == b.target_vars && a.source_parameter == b.source_parameter &&
         a.target_parameter == b.target_parameter && a.branches == b.branches && a.lift == b.lift;
}

inline bool operator==(const DiffeoBlock& a, const DiffeoBlock& b) {
  return a.H == b.H && a.inverse == b.inverse && a.expect == b.expect;
}

inline bool operator==(const GermDocument& a, const GermDocument& b) {
  return a.name == b.name && a.germ == b.germ && a.reference == b.reference && a.unfolding == b.unfolding &&
         a.diffeo == b.diffeo && a.options == b.options;
}

}  // namespace liftvf

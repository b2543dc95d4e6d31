#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"

namespace liftvf {

struct Token {
  enum class Kind { Ident, Number, Punct, End } kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek() {
    if (!peeked_) peeked_ = scan();
    return *peeked_;
  }

  Token next() {
    Token t = peek();
    peeked_.reset();
    return t;
  }

  bool accept(std::string_view punct_or_word) {
    const Token& t = peek();
    if ((t.kind == Token::Kind::Punct || t.kind == Token::Kind::Ident) && t.text == punct_or_word) {
      next();
      return true;
    }
    return false;
  }

  Token expect(std::string_view punct_or_word) {
    const Token& t = peek();
    if (!((t.kind == Token::Kind::Punct || t.kind == Token::Kind::Ident) && t.text == punct_or_word))
      fail(t, "expected '" + std::string(punct_or_word) + "', found " + describe(t));
    return next();
  }

  Token expect_ident() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) fail(t, "expected identifier, found " + describe(t));
    return next();
  }

  Token expect_number() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Number) fail(t, "expected number, found " + describe(t));
    return next();
  }

  // A name made of letters, digits, '_', '-' and '.', read directly from the source.
  Token read_name() {
    if (peeked_) fail(*peeked_, "internal: name after lookahead");
    skip_space();
    Token t{Token::Kind::Ident, "", line_, col_};
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        t.text += c;
        advance();
      } else {
        break;
      }
    }
    if (t.text.empty()) fail(t, "expected a name");
    return t;
  }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.column, msg); }

  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token scan() {
    skip_space();
    Token t{Token::Kind::End, "", line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        t.text += src_[pos_];
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        t.text += src_[pos_];
        advance();
      }
      return t;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      t.kind = Token::Kind::Punct;
      t.text = "->";
      advance();
      advance();
      return t;
    }
    static const std::string_view punct = "+-*/^(),;={}";
    if (punct.find(c) == std::string_view::npos) fail(t, std::string("unexpected character '") + c + "'");
    t.kind = Token::Kind::Punct;
    t.text = std::string(1, c);
    advance();
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::optional<Token> peeked_;
};

// Polynomial expressions: + - * ^ parentheses, integer and a/b literals, named variables.
class ExpressionParser {
 public:
  ExpressionParser(Lexer& lex, const std::vector<std::string>& names) : lex_(lex), nvars_(names.size()) {
    for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
  }

  Polynomial parse_expression() {
    Polynomial acc = parse_term();
    for (;;) {
      if (lex_.accept("+"))
        acc += parse_term();
      else if (lex_.accept("-"))
        acc -= parse_term();
      else
        return acc;
    }
  }

 private:
  Polynomial parse_term() {
    Polynomial acc = parse_unary();
    for (;;) {
      if (lex_.accept("*")) {
        acc *= parse_unary();
      } else if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "/") {
        Token slash = lex_.next();
        Rational d = parse_rational_literal();
        if (d == 0) Lexer::fail(slash, "division by zero");
        acc = Rational(1) / d * acc;
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_unary() {
    if (lex_.accept("-")) return -parse_unary();
    if (lex_.accept("+")) return parse_unary();
    return parse_power();
  }

  Polynomial parse_power() {
    Polynomial base = parse_atom();
    if (lex_.accept("^")) {
      Token e = lex_.expect_number();
      if (e.text.size() > 4) Lexer::fail(e, "exponent too large");
      base = base.pow(static_cast<unsigned>(std::stoul(e.text)));
    }
    return base;
  }

  Rational parse_rational_literal() {
    Token num = lex_.expect_number();
    return Rational(Integer(num.text));
  }

  Polynomial parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      Token num = lex_.next();
      Rational q{Integer(num.text)};
      // a/b directly after an integer is one literal, binding tighter than ^ and *.
      if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "/") {
        Token slash = lex_.next();
        Token den = lex_.expect_number();
        Integer d(den.text);
        if (d == 0) Lexer::fail(slash, "zero denominator");
        q = Rational(Integer(num.text), d);
        q.canonicalize();
      }
      return Polynomial::constant(nvars_, q);
    }
    if (t.kind == Token::Kind::Ident) {
      Token id = lex_.next();
      auto it = index_.find(id.text);
      if (it == index_.end()) Lexer::fail(id, "unknown variable '" + id.text + "'");
      return Polynomial::variable(nvars_, it->second);
    }
    if (lex_.accept("(")) {
      Polynomial inner = parse_expression();
      lex_.expect(")");
      return inner;
    }
    Lexer::fail(t, "expected a polynomial term, found " + Lexer::describe(t));
  }

  Lexer& lex_;
  std::size_t nvars_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& names) {
  Lexer lex(text);
  ExpressionParser p(lex, names);
  Polynomial out = p.parse_expression();
  if (lex.peek().kind != Token::Kind::End) Lexer::fail(lex.peek(), "trailing input " + Lexer::describe(lex.peek()));
  return out;
}

}  // namespace liftvf

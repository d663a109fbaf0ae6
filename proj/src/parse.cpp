#include "diffinv/parse.hpp"

#include <cctype>
#include <memory>
#include <utility>
#include <vector>

namespace diffinv {

namespace {

enum class Tok {
  End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen,
  Eq, Ge, Gt, Le, Lt, Neq, And, Or, Not, Imply, Iff, True, False
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    if (std::isspace(static_cast<unsigned char>(src[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    char c = src[i];
    auto two = [&](char second) { return i + 1 < src.size() && src[i + 1] == second; };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, src.substr(i, j - i), start});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word = src.substr(i, j - i);
      i = j;
      if (word == "true")
        out.push_back({Tok::True, word, start});
      else if (word == "false")
        out.push_back({Tok::False, word, start});
      else
        out.push_back({Tok::Ident, word, start});
      continue;
    }
    switch (c) {
      case '+': out.push_back({Tok::Plus, "+", start}); ++i; break;
      case '-':
        if (two('>')) { out.push_back({Tok::Imply, "->", start}); i += 2; }
        else { out.push_back({Tok::Minus, "-", start}); ++i; }
        break;
      case '*': out.push_back({Tok::Star, "*", start}); ++i; break;
      case '/': out.push_back({Tok::Slash, "/", start}); ++i; break;
      case '^': out.push_back({Tok::Caret, "^", start}); ++i; break;
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case '=': out.push_back({Tok::Eq, "=", start}); ++i; break;
      case '&': out.push_back({Tok::And, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Or, "|", start}); ++i; break;
      case '>':
        if (two('=')) { out.push_back({Tok::Ge, ">=", start}); i += 2; }
        else { out.push_back({Tok::Gt, ">", start}); ++i; }
        break;
      case '<':
        if (two('=')) { out.push_back({Tok::Le, "<=", start}); i += 2; }
        else if (two('-') && i + 2 < src.size() && src[i + 2] == '>') {
          out.push_back({Tok::Iff, "<->", start});
          i += 3;
        } else {
          out.push_back({Tok::Lt, "<", start});
          ++i;
        }
        break;
      case '!':
        if (two('=')) { out.push_back({Tok::Neq, "!=", start}); i += 2; }
        else { out.push_back({Tok::Not, "!", start}); ++i; }
        break;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

bool is_formula_tok(Tok t) {
  switch (t) {
    case Tok::Eq: case Tok::Ge: case Tok::Gt: case Tok::Le: case Tok::Lt:
    case Tok::Neq: case Tok::And: case Tok::Or: case Tok::Not:
    case Tok::Imply: case Tok::Iff: case Tok::True: case Tok::False:
      return true;
    default:
      return false;
  }
}

// Surface formula tree, before negation normal form.
struct Ast {
  enum class Kind { Cmp, And, Or, Not, Imply, Iff, ConstTrue, ConstFalse } kind;
  Polynomial lhs, rhs;  // Cmp only
  Tok cmp = Tok::Eq;    // Cmp only
  std::unique_ptr<Ast> a, b;
};

class Parser {
 public:
  Parser(const std::string& src, const ParseOptions& opts) : toks_(tokenize(src)), opts_(opts) {}

  Polynomial parse_term_only() {
    Polynomial p = term_sum();
    expect_end();
    return p;
  }

  Formula parse_formula_top() {
    auto ast = formula_iff();
    expect_end();
    return to_nnf(*ast, false);
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  Token take() { return toks_[idx_++]; }

  void expect_end() {
    if (peek().kind != Tok::End) throw SyntaxError("trailing input '" + peek().text + "'", peek().pos);
  }

  /// A '(' at the cursor opens a formula iff a logical or comparison token
  /// occurs before its matching ')'.
  bool paren_opens_formula() const {
    int depth = 0;
    for (std::size_t j = idx_; j < toks_.size(); ++j) {
      Tok t = toks_[j].kind;
      if (t == Tok::LParen) ++depth;
      if (t == Tok::RParen) {
        if (--depth == 0) return false;
      }
      if (depth >= 1 && is_formula_tok(t)) return true;
      if (t == Tok::End) break;
    }
    return false;
  }

  // --- terms ---

  Polynomial term_sum() {
    Polynomial p = term_product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Tok op = take().kind;
      Polynomial q = term_product();
      p = op == Tok::Plus ? p + q : p - q;
    }
    return p;
  }

  Polynomial term_product() {
    Polynomial p = term_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      Tok op = take().kind;
      if (op == Tok::Star) {
        p = p * term_unary();
      } else {
        Token t = peek();
        Polynomial q = term_unary();
        if (!q.is_constant() || q.is_zero())
          throw UnsupportedOperator("division by '" + t.text + "' (only nonzero rational literals)");
        p = p.scaled(Rational(1) / q.constant_value());
      }
    }
    return p;
  }

  Polynomial term_unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return -term_unary();
    }
    if (peek().kind == Tok::Plus) {
      take();
      return term_unary();
    }
    return term_power();
  }

  Polynomial term_power() {
    Polynomial base = term_atom();
    if (peek().kind == Tok::Caret) {
      take();
      Token e = take();
      if (e.kind != Tok::Number) throw SyntaxError("exponent must be a natural literal", e.pos);
      unsigned long exp = std::stoul(e.text);
      if (exp > 64) throw SyntaxError("exponent too large", e.pos);
      return base.pow(static_cast<std::uint32_t>(exp));
    }
    return base;
  }

  Polynomial term_atom() {
    Token t = take();
    switch (t.kind) {
      case Tok::Number:
        return Polynomial(Rational::from_string(t.text));
      case Tok::Ident: {
        if (opts_.declared && !opts_.declared->count(t.text))
          throw SyntaxError("undeclared symbol '" + t.text + "'", t.pos);
        return Polynomial::variable(VarTable::instance().intern(t.text));
      }
      case Tok::LParen: {
        Polynomial p = term_sum();
        Token close = take();
        if (close.kind != Tok::RParen) throw SyntaxError("expected ')'", close.pos);
        return p;
      }
      default:
        throw SyntaxError("expected a term, got '" + t.text + "'", t.pos);
    }
  }

  // --- formulas ---

  std::unique_ptr<Ast> mk(Ast::Kind k, std::unique_ptr<Ast> a, std::unique_ptr<Ast> b) {
    auto n = std::make_unique<Ast>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  std::unique_ptr<Ast> formula_iff() {
    auto a = formula_imply();
    while (peek().kind == Tok::Iff) {
      take();
      a = mk(Ast::Kind::Iff, std::move(a), formula_imply());
    }
    return a;
  }

  std::unique_ptr<Ast> formula_imply() {
    auto a = formula_or();
    if (peek().kind == Tok::Imply) {
      take();
      return mk(Ast::Kind::Imply, std::move(a), formula_imply());
    }
    return a;
  }

  std::unique_ptr<Ast> formula_or() {
    auto a = formula_and();
    while (peek().kind == Tok::Or) {
      take();
      a = mk(Ast::Kind::Or, std::move(a), formula_and());
    }
    return a;
  }

  std::unique_ptr<Ast> formula_and() {
    auto a = formula_unary();
    while (peek().kind == Tok::And) {
      take();
      a = mk(Ast::Kind::And, std::move(a), formula_unary());
    }
    return a;
  }

  std::unique_ptr<Ast> formula_unary() {
    if (peek().kind == Tok::Not) {
      take();
      return mk(Ast::Kind::Not, formula_unary(), nullptr);
    }
    if (peek().kind == Tok::True || peek().kind == Tok::False) {
      Token t = take();
      auto n = std::make_unique<Ast>();
      n->kind = t.kind == Tok::True ? Ast::Kind::ConstTrue : Ast::Kind::ConstFalse;
      return n;
    }
    if (peek().kind == Tok::LParen && paren_opens_formula()) {
      take();
      auto inner = formula_iff();
      Token close = take();
      if (close.kind != Tok::RParen) throw SyntaxError("expected ')'", close.pos);
      return inner;
    }
    return formula_cmp();
  }

  std::unique_ptr<Ast> formula_cmp() {
    Polynomial lhs = term_sum();
    Token op = take();
    switch (op.kind) {
      case Tok::Eq:
      case Tok::Ge:
      case Tok::Gt:
      case Tok::Le:
      case Tok::Lt: {
        auto n = std::make_unique<Ast>();
        n->kind = Ast::Kind::Cmp;
        n->cmp = op.kind;
        n->lhs = std::move(lhs);
        n->rhs = term_sum();
        return n;
      }
      case Tok::Neq:
        throw UnsupportedOperator("!=");
      default:
        throw SyntaxError("expected a comparison, got '" + op.text + "'", op.pos);
    }
  }

  // Negation normal form. Comparisons normalize to rhs 0; a negated
  // comparison flips into the dual relation on the negated polynomial.
  Formula to_nnf(const Ast& n, bool negated) {
    switch (n.kind) {
      case Ast::Kind::ConstTrue: return negated ? Formula::falsity() : Formula::truth();
      case Ast::Kind::ConstFalse: return negated ? Formula::truth() : Formula::falsity();
      case Ast::Kind::Not: return to_nnf(*n.a, !negated);
      case Ast::Kind::And: {
        Formula a = to_nnf(*n.a, negated), b = to_nnf(*n.b, negated);
        return negated ? Formula::disj(a, b) : Formula::conj(a, b);
      }
      case Ast::Kind::Or: {
        Formula a = to_nnf(*n.a, negated), b = to_nnf(*n.b, negated);
        return negated ? Formula::conj(a, b) : Formula::disj(a, b);
      }
      case Ast::Kind::Imply: {
        Formula a = to_nnf(*n.a, !negated), b = to_nnf(*n.b, negated);
        return negated ? Formula::conj(a, b) : Formula::disj(a, b);
      }
      case Ast::Kind::Iff: {
        Formula na = to_nnf(*n.a, true), pa = to_nnf(*n.a, false);
        Formula nb = to_nnf(*n.b, true), pb = to_nnf(*n.b, false);
        if (!negated) return Formula::conj(Formula::disj(na, pb), Formula::disj(nb, pa));
        return Formula::disj(Formula::conj(pa, nb), Formula::conj(pb, na));
      }
      case Ast::Kind::Cmp: {
        Polynomial d = n.lhs - n.rhs;
        Tok c = n.cmp;
        if (negated) {
          switch (c) {
            case Tok::Ge: c = Tok::Lt; break;
            case Tok::Gt: c = Tok::Le; break;
            case Tok::Le: c = Tok::Gt; break;
            case Tok::Lt: c = Tok::Ge; break;
            case Tok::Eq: throw UnsupportedOperator("!= (negated equation)");
            default: break;
          }
        }
        switch (c) {
          case Tok::Eq: return Formula::atom({d, Rel::Eq});
          case Tok::Ge: return Formula::atom({d, Rel::Ge});
          case Tok::Gt: return Formula::atom({d, Rel::Gt});
          case Tok::Le: return Formula::atom({-d, Rel::Ge});
          case Tok::Lt: return Formula::atom({-d, Rel::Gt});
          default: break;
        }
        break;
      }
    }
    throw std::logic_error("to_nnf: unreachable");
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
  const ParseOptions& opts_;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const ParseOptions& opts) {
  Parser p(text, opts);
  return p.parse_term_only();
}

Formula parse_formula(const std::string& text, const ParseOptions& opts) {
  Parser p(text, opts);
  return p.parse_formula_top();
}

}  // namespace diffinv

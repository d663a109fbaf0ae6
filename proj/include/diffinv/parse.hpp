#ifndef DIFFINV_PARSE_HPP
#define DIFFINV_PARSE_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "diffinv/formula.hpp"

namespace diffinv {

struct SyntaxError : std::runtime_error {
  std::size_t position;
  SyntaxError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct UnsupportedOperator : std::runtime_error {
  explicit UnsupportedOperator(const std::string& what_op)
      : std::runtime_error("unsupported operator: " + what_op) {}
};

struct ParseOptions {
  /// When set, identifiers outside this set are rejected instead of interned.
  const std::set<std::string>* declared = nullptr;
};

/// Term grammar: integers, n/m rational literals, identifiers, + - * ^ and
/// parentheses; ^ takes a natural literal. Division is admitted only by a
/// nonzero rational literal.
Polynomial parse_polynomial(const std::string& text, const ParseOptions& opts = {});

/// Formula grammar: comparisons = >= > <= <, connectives & | -> <-> !,
/// parentheses, and the keywords true/false. Ingestion resolves negations
/// into dual relations and eliminates -> and <->; the result is in negation
/// normal form with all atoms normalized to right-hand side 0.
Formula parse_formula(const std::string& text, const ParseOptions& opts = {});

}  // namespace diffinv

#endif  // DIFFINV_PARSE_HPP

#ifndef DIFFINV_POLYNOMIAL_HPP
#define DIFFINV_POLYNOMIAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffinv/rational.hpp"

namespace diffinv {

/// Interned variable identifier. Ids are dense and define the fixed global
/// ordering used for canonical monomial maps.
using VarId = std::uint32_t;

class VarTable {
 public:
  static VarTable& instance();

  VarId intern(const std::string& name);
  std::optional<VarId> lookup(const std::string& name) const;
  const std::string& name(VarId id) const;
  std::size_t size() const;

 private:
  VarTable() = default;
  std::vector<std::string> names_;
  std::map<std::string, VarId> ids_;
};

struct ExponentOverflow : std::overflow_error {
  ExponentOverflow() : std::overflow_error("monomial exponent overflow") {}
};
struct MissingAssignment : std::runtime_error {
  explicit MissingAssignment(const std::string& var)
      : std::runtime_error("no value assigned to variable '" + var + "'") {}
};
struct ZeroPolynomial : std::domain_error {
  ZeroPolynomial() : std::domain_error("operation undefined for the zero polynomial") {}
};

/// Power product of variables. No zero exponents are stored; the empty
/// monomial is the constant 1. Exponents are bounded naturals.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(VarId v, std::uint32_t exp = 1);

  bool is_unit() const { return factors_.empty(); }
  std::uint32_t exponent(VarId v) const;
  std::uint64_t total_degree() const;
  const std::vector<std::pair<VarId, std::uint32_t>>& factors() const { return factors_; }

  Monomial times(const Monomial& o) const;
  /// All exponents even (true for the constant monomial).
  bool all_even() const;
  /// Componentwise division; nullopt if any exponent of d exceeds ours.
  std::optional<Monomial> divide(const Monomial& d) const;

  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

  /// Graded order on exponent vectors: total degree first, then earlier
  /// variables with higher exponents rank higher. Used for the canonical map.
  static bool grlex_less(const Monomial& a, const Monomial& b);
  /// Pure lexicographic comparison under an explicit variable precedence.
  static int lex_compare(const Monomial& a, const Monomial& b, const std::vector<VarId>& order);

  std::string str() const;

 private:
  // sorted by VarId, exponents > 0
  std::vector<std::pair<VarId, std::uint32_t>> factors_;
  friend class Polynomial;
};

struct MonomialGrlexDesc {
  bool operator()(const Monomial& a, const Monomial& b) const { return Monomial::grlex_less(b, a); }
};

/// Multivariate polynomial over exact rationals. Canonical: no zero
/// coefficients are stored, terms are kept in a fixed graded order, and two
/// equal polynomials compare equal structurally.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialGrlexDesc>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
  Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial variable(VarId v);
  static Polynomial term(const Rational& c, const Monomial& m);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit()); }
  /// Value of a constant polynomial (0 for the zero polynomial).
  Rational constant_value() const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(std::uint32_t e) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial partial_derivative(VarId v) const;

  /// Substitutes a polynomial for every occurrence of v.
  Polynomial substitute(VarId v, const Polynomial& replacement) const;

  Rational eval(const std::map<VarId, Rational>& point) const;
  double eval_double(const std::vector<double>& dense_point) const;

  std::uint64_t total_degree() const;  // 0 for the zero polynomial
  std::uint64_t degree_in(VarId v) const;
  std::set<VarId> variables() const;

  /// Lex-greatest term under the given variable precedence. Throws
  /// ZeroPolynomial on 0.
  std::pair<Monomial, Rational> leading_term_lex(const std::vector<VarId>& order) const;

  /// gcd of coefficient absolute values; 0 for the zero polynomial.
  Rational content() const;
  /// Divided by content; sign untouched. Zero stays zero.
  Polynomial primitive_part() const;
  /// Sign of the coefficient of the leading (graded-order) term; 0 if zero.
  int leading_sign() const;

  /// Exact multivariate division: returns q with *this == d * q, if it exists.
  std::optional<Polynomial> divide_exact(const Polynomial& d) const;

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  std::string str() const;
  std::size_t hash() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  TermMap terms_;
};

Polynomial operator*(const Rational& c, const Polynomial& p);

}  // namespace diffinv

#endif  // DIFFINV_POLYNOMIAL_HPP

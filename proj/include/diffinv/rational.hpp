#ifndef DIFFINV_RATIONAL_HPP
#define DIFFINV_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace diffinv {

/// Exact rational number. Always in lowest terms with positive denominator;
/// zero is 0/1. Immutable-friendly value type backed by GMP.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int literals
  Rational(long n, long d) : v_(n, d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "n" or "n/m" with optional sign.
  static Rational from_string(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: bad literal '" + s + "'");
    if (q.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    q.canonicalize();
    return Rational(q);
  }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  /// gcd of absolute values, as a rational: gcd(a/b, c/d) = gcd(a·d, c·b)/(b·d).
  static Rational gcd(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b.abs();
    if (b.is_zero()) return a.abs();
    mpz_class num, den;
    mpz_gcd(num.get_mpz_t(), a.v_.get_num().get_mpz_t(), b.v_.get_num().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), a.v_.get_den().get_mpz_t(), b.v_.get_den().get_mpz_t());
    return Rational(mpq_class(num, den));
  }

  double to_double() const { return v_.get_d(); }

  std::string str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (char c : str()) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    return h;
  }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_;
};

}  // namespace diffinv

#endif  // DIFFINV_RATIONAL_HPP

#include "diffinv/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace diffinv {

namespace {
std::mutex g_var_mutex;
}

VarTable& VarTable::instance() {
  static VarTable table;
  return table;
}

VarId VarTable::intern(const std::string& name) {
  std::lock_guard<std::mutex> lock(g_var_mutex);
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::optional<VarId> VarTable::lookup(const std::string& name) const {
  std::lock_guard<std::mutex> lock(g_var_mutex);
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& VarTable::name(VarId id) const {
  std::lock_guard<std::mutex> lock(g_var_mutex);
  return names_.at(id);
}

std::size_t VarTable::size() const {
  std::lock_guard<std::mutex> lock(g_var_mutex);
  return names_.size();
}

Monomial::Monomial(VarId v, std::uint32_t exp) {
  if (exp > 0) factors_.emplace_back(v, exp);
}

std::uint32_t Monomial::exponent(VarId v) const {
  for (const auto& [var, e] : factors_)
    if (var == v) return e;
  return 0;
}

std::uint64_t Monomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [var, e] : factors_) d += e;
  return d;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial r;
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      std::uint64_t e = static_cast<std::uint64_t>(a->second) + b->second;
      if (e > 0xFFFFFFFFull) throw ExponentOverflow();
      r.factors_.emplace_back(a->first, static_cast<std::uint32_t>(e));
      ++a;
      ++b;
    }
  }
  return r;
}

bool Monomial::all_even() const {
  for (const auto& [var, e] : factors_)
    if (e % 2 != 0) return false;
  return true;
}

std::optional<Monomial> Monomial::divide(const Monomial& d) const {
  Monomial r;
  auto a = factors_.begin();
  auto b = d.factors_.begin();
  while (b != d.factors_.end()) {
    while (a != factors_.end() && a->first < b->first) r.factors_.push_back(*a++);
    if (a == factors_.end() || a->first != b->first || a->second < b->second) return std::nullopt;
    if (a->second > b->second) r.factors_.emplace_back(a->first, a->second - b->second);
    ++a;
    ++b;
  }
  while (a != factors_.end()) r.factors_.push_back(*a++);
  return r;
}

bool Monomial::grlex_less(const Monomial& a, const Monomial& b) {
  std::uint64_t da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  // same degree: compare exponents variable by variable (lowest id first);
  // the monomial with the higher exponent on the earliest differing variable
  // ranks higher
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end() && ib != b.factors_.end()) {
    if (ia->first != ib->first) return ia->first > ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return false;  // equal
}

int Monomial::lex_compare(const Monomial& a, const Monomial& b, const std::vector<VarId>& order) {
  for (VarId v : order) {
    std::uint32_t ea = a.exponent(v), eb = b.exponent(v);
    if (ea != eb) return ea < eb ? -1 : 1;
  }
  // variables outside the precedence list break ties in id order
  auto ia = a.factors_.begin(), ib = b.factors_.begin();
  while (ia != a.factors_.end() && ib != b.factors_.end()) {
    if (ia->first != ib->first) return ia->first > ib->first ? -1 : 1;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    ++ia;
    ++ib;
  }
  if (ia != a.factors_.end()) return 1;
  if (ib != b.factors_.end()) return -1;
  return 0;
}

std::string Monomial::str() const {
  if (is_unit()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, e] : factors_) {
    if (!first) os << "*";
    first = false;
    os << VarTable::instance().name(var);
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

Polynomial::Polynomial(const Rational& c) {
  if (!c.is_zero()) terms_.emplace(Monomial(), c);
}

Polynomial Polynomial::variable(VarId v) {
  Polynomial p;
  p.terms_.emplace(Monomial(v), Rational(1));
  return p;
}

Polynomial Polynomial::term(const Rational& c, const Monomial& m) {
  Polynomial p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
  return terms_.begin()->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma.times(mb), ca * cb);
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r;
  if (c.is_zero()) return r;
  for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
  return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
  Polynomial r = Rational(1);
  for (std::uint32_t i = 0; i < e; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::partial_derivative(VarId v) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.exponent(v);
    if (e == 0) continue;
    Monomial dm;
    for (const auto& [var, exp] : m.factors_) {
      if (var == v) {
        if (exp > 1) dm.factors_.emplace_back(var, exp - 1);
      } else {
        dm.factors_.emplace_back(var, exp);
      }
    }
    r.add_term(dm, c * Rational(static_cast<long>(e)));
  }
  return r;
}

Polynomial Polynomial::substitute(VarId v, const Polynomial& replacement) const {
  Polynomial total;
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.exponent(v);
    Monomial rest;
    for (const auto& [var, exp] : m.factors_)
      if (var != v) rest.factors_.emplace_back(var, exp);
    Polynomial piece = Polynomial::term(c, rest);
    if (e > 0) piece = piece * replacement.pow(e);
    total = total + piece;
  }
  return total;
}

Rational Polynomial::eval(const std::map<VarId, Rational>& point) const {
  Rational total(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [var, e] : m.factors()) {
      auto it = point.find(var);
      if (it == point.end()) throw MissingAssignment(VarTable::instance().name(var));
      Rational pw(1);
      for (std::uint32_t i = 0; i < e; ++i) pw *= it->second;
      t *= pw;
    }
    total += t;
  }
  return total;
}

double Polynomial::eval_double(const std::vector<double>& dense_point) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (const auto& [var, e] : m.factors()) t *= std::pow(dense_point.at(var), static_cast<int>(e));
    total += t;
  }
  return total;
}

std::uint64_t Polynomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

std::uint64_t Polynomial::degree_in(VarId v) const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max<std::uint64_t>(d, m.exponent(v));
  return d;
}

std::set<VarId> Polynomial::variables() const {
  std::set<VarId> vars;
  for (const auto& [m, c] : terms_)
    for (const auto& [var, e] : m.factors()) vars.insert(var);
  return vars;
}

std::pair<Monomial, Rational> Polynomial::leading_term_lex(const std::vector<VarId>& order) const {
  if (terms_.empty()) throw ZeroPolynomial();
  auto best = terms_.begin();
  for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
    if (Monomial::lex_compare(it->first, best->first, order) > 0) best = it;
  return {best->first, best->second};
}

Rational Polynomial::content() const {
  Rational g(0);
  for (const auto& [m, c] : terms_) g = Rational::gcd(g, c);
  return g;
}

Polynomial Polynomial::primitive_part() const {
  if (terms_.empty()) return *this;
  Rational g = content();
  Polynomial r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c / g);
  return r;
}

int Polynomial::leading_sign() const {
  if (terms_.empty()) return 0;
  return terms_.begin()->second.sign();
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
  if (d.is_zero()) return std::nullopt;
  Polynomial rem = *this;
  Polynomial quot;
  const auto& dlead = *d.terms_.begin();
  // bounded by the strictly decreasing leading monomial of the remainder
  while (!rem.is_zero()) {
    const auto& rlead = *rem.terms_.begin();
    auto m = rlead.first.divide(dlead.first);
    if (!m) return std::nullopt;
    Rational c = rlead.second / dlead.second;
    Polynomial piece = Polynomial::term(c, *m);
    quot = quot + piece;
    rem = rem - piece * d;
  }
  return quot;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    if (m.is_unit()) {
      os << a.str();
    } else {
      if (!a.is_one()) os << a.str() << "*";
      os << m.str();
    }
  }
  return os.str();
}

std::size_t Polynomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (char ch : str()) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ull;
  return h;
}

Polynomial operator*(const Rational& c, const Polynomial& p) { return p.scaled(c); }

}  // namespace diffinv

#include "diffinv/arith.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace diffinv {

std::string cert_str(Cert c) {
  switch (c) {
    case Cert::Propositional: return "propositional";
    case Cert::Identity: return "identity";
    case Cert::EvenSign: return "even-sign";
    case Cert::AssumptionSign: return "assumption-sign";
    case Cert::Sturm: return "sturm";
  }
  return "?";
}

std::string Verdict::str() const {
  switch (kind) {
    case Kind::Valid: return "valid(" + cert_str(*certificate) + ")";
    case Kind::Invalid: {
      std::ostringstream os;
      os << "invalid(";
      bool first = true;
      for (const auto& [v, r] : witness) {
        if (!first) os << ", ";
        first = false;
        os << VarTable::instance().name(v) << " = " << r.str();
      }
      os << ")";
      return os.str();
    }
    case Kind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// deterministic RNG (fully pinned; no stdlib distribution dependence)

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  long below(long m) { return static_cast<long>(next() % static_cast<std::uint64_t>(m)); }
};

// ---------------------------------------------------------------------------
// dense univariate layer

struct UPoly {
  std::vector<Rational> c;  // c[i] is the coefficient of x^i; highest is nonzero

  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Rational& lead() const { return c.back(); }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UPoly derivative() const {
    UPoly d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * Rational(static_cast<long>(i)));
    d.trim();
    return d;
  }

  UPoly neg() const {
    UPoly r = *this;
    for (auto& x : r.c) x = -x;
    return r;
  }

  UPoly mul(const UPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    UPoly r;
    r.c.assign(c.size() + o.c.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    r.trim();
    return r;
  }

  /// Remainder of *this divided by d (d nonzero).
  UPoly rem(const UPoly& d) const {
    UPoly r = *this;
    r.trim();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      Rational q = r.lead() / d.lead();
      int shift = r.degree() - d.degree();
      for (std::size_t i = 0; i < d.c.size(); ++i) r.c[i + shift] -= q * d.c[i];
      r.trim();
    }
    return r;
  }

  /// Divide by content and make the leading coefficient positive.
  UPoly monic_primitive() const {
    UPoly r = *this;
    if (r.is_zero()) return r;
    Rational g(0);
    for (const auto& x : r.c) g = Rational::gcd(g, x);
    if (r.lead().sign() < 0) g = -g;
    for (auto& x : r.c) x = x / g;
    return r;
  }

  static UPoly gcd(UPoly a, UPoly b) {
    a = a.monic_primitive();
    b = b.monic_primitive();
    while (!b.is_zero()) {
      UPoly r = a.rem(b).monic_primitive();
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  UPoly divide_exact(const UPoly& d) const {
    UPoly r = *this;
    UPoly q;
    q.c.assign(std::max<std::size_t>(c.size(), 1), Rational(0));
    r.trim();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      Rational k = r.lead() / d.lead();
      int shift = r.degree() - d.degree();
      q.c[shift] = k;
      for (std::size_t i = 0; i < d.c.size(); ++i) r.c[i + shift] -= k * d.c[i];
      r.trim();
    }
    if (!r.is_zero()) throw std::logic_error("UPoly::divide_exact: nonzero remainder");
    q.trim();
    return q;
  }

  UPoly squarefree_part() const {
    if (is_zero() || degree() == 0) return monic_primitive();
    UPoly g = gcd(*this, derivative());
    if (g.degree() == 0) return monic_primitive();
    return divide_exact(g).monic_primitive();
  }

  int sign_at(const Rational& x) const { return eval(x).sign(); }
  int sign_at_pos_inf() const { return is_zero() ? 0 : lead().sign(); }
  int sign_at_neg_inf() const {
    if (is_zero()) return 0;
    return degree() % 2 == 0 ? lead().sign() : -lead().sign();
  }

  /// 1 + max |c_i| / |c_n|: every real root lies strictly within this bound.
  Rational cauchy_bound() const {
    Rational m(0);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, c[i].abs());
    return Rational(1) + m / lead().abs();
  }
};

UPoly to_upoly(const Polynomial& p, VarId var) {
  UPoly u;
  for (const auto& [m, coef] : p.terms()) {
    std::uint32_t e = m.exponent(var);
    if (m.total_degree() != e) throw std::logic_error("to_upoly: not univariate");
    if (u.c.size() <= e) u.c.resize(e + 1, Rational(0));
    u.c[e] += coef;
  }
  u.trim();
  return u;
}

Polynomial from_upoly(const UPoly& u, VarId var) {
  Polynomial p;
  for (std::size_t i = 0; i < u.c.size(); ++i) {
    if (u.c[i].is_zero()) continue;
    p = p + Polynomial::term(u.c[i], Monomial(var, static_cast<std::uint32_t>(i)));
  }
  return p;
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> chain;
  chain.push_back(p);
  UPoly d = p.derivative();
  if (!d.is_zero()) {
    chain.push_back(d);
    while (true) {
      const UPoly& a = chain[chain.size() - 2];
      const UPoly& b = chain[chain.size() - 1];
      UPoly r = a.rem(b).neg();
      if (r.is_zero()) break;
      chain.push_back(std::move(r));
    }
  }
  return chain;
}

std::size_t variations(const std::vector<int>& signs) {
  std::size_t v = 0;
  int prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++v;
    prev = s;
  }
  return v;
}

std::size_t variations_at(const std::vector<UPoly>& chain, const Rational& x) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const auto& q : chain) signs.push_back(q.sign_at(x));
  return variations(signs);
}

std::size_t variations_at_neg_inf(const std::vector<UPoly>& chain) {
  std::vector<int> signs;
  for (const auto& q : chain) signs.push_back(q.sign_at_neg_inf());
  return variations(signs);
}

std::size_t variations_at_pos_inf(const std::vector<UPoly>& chain) {
  std::vector<int> signs;
  for (const auto& q : chain) signs.push_back(q.sign_at_pos_inf());
  return variations(signs);
}

/// Distinct real roots in (a, b]; requires p(a) != 0 and p(b) != 0.
std::size_t roots_in(const std::vector<UPoly>& chain, const Rational& a, const Rational& b) {
  return variations_at(chain, a) - variations_at(chain, b);
}

// an isolated real root of the square-free reference polynomial
struct IsolatedRoot {
  bool exact = false;
  Rational value;       // exact only
  Rational lo, hi;      // root in (lo, hi); nonzero values at both endpoints
};

struct IsolationBudget {
  int steps = 0;
  void tick() {
    if (++steps > 200000) throw std::runtime_error("root isolation budget exceeded");
  }
};

void isolate_rec(const UPoly& s, const std::vector<UPoly>& chain, const Rational& lo,
                 const Rational& hi, std::size_t count, std::vector<IsolatedRoot>& out,
                 IsolationBudget& budget) {
  if (count == 0) return;
  budget.tick();
  Rational mid = (lo + hi) * Rational(1, 2);
  if (s.sign_at(mid) == 0) {
    // an exact rational root; carve out a root-free collar around it
    Rational delta(1);
    while (true) {
      budget.tick();
      Rational l = mid - delta, r = mid + delta;
      if (s.sign_at(l) != 0 && s.sign_at(r) != 0 && lo < l && r < hi &&
          roots_in(chain, l, r) == 1)
        break;
      delta = delta * Rational(1, 2);
    }
    Rational l = mid - delta, r = mid + delta;
    std::size_t left = roots_in(chain, lo, l);
    isolate_rec(s, chain, lo, l, left, out, budget);
    IsolatedRoot root;
    root.exact = true;
    root.value = mid;
    root.lo = l;
    root.hi = r;
    out.push_back(root);
    isolate_rec(s, chain, r, hi, count - left - 1, out, budget);
    return;
  }
  if (count == 1) {
    IsolatedRoot root;
    root.lo = lo;
    root.hi = hi;
    out.push_back(root);
    return;
  }
  std::size_t left = roots_in(chain, lo, mid);
  isolate_rec(s, chain, lo, mid, left, out, budget);
  isolate_rec(s, chain, mid, hi, count - left, out, budget);
}

std::vector<IsolatedRoot> isolate_roots(const UPoly& s) {
  std::vector<IsolatedRoot> out;
  if (s.degree() <= 0) return out;
  auto chain = sturm_sequence(s);
  Rational bound = s.cauchy_bound() + Rational(1);
  std::size_t total = variations_at(chain, -bound) - variations_at(chain, bound);
  IsolationBudget budget;
  isolate_rec(s, chain, -bound, bound, total, out, budget);
  return out;
}

/// Sign of p at the (irrational) root of s isolated in (lo, hi). Requires
/// that s is square-free and has exactly one root there.
int sign_at_isolated_root(const UPoly& p, const UPoly& s, Rational lo, Rational hi,
                          IsolationBudget& budget) {
  UPoly g = UPoly::gcd(p, s);
  auto gchain = sturm_sequence(g);
  if (g.degree() >= 1 && g.sign_at(lo) != 0 && g.sign_at(hi) != 0 && roots_in(gchain, lo, hi) >= 1)
    return 0;  // p shares the root
  auto pchain = sturm_sequence(p);
  auto schain = sturm_sequence(s);
  while (true) {
    budget.tick();
    if (p.sign_at(lo) != 0 && p.sign_at(hi) != 0 && roots_in(pchain, lo, hi) == 0)
      return p.sign_at((lo + hi) * Rational(1, 2));
    Rational mid = (lo + hi) * Rational(1, 2);
    if (s.sign_at(mid) == 0) {
      // the isolated root is mid itself
      return p.sign_at(mid);
    }
    if (roots_in(schain, lo, mid) == 1)
      hi = mid;
    else
      lo = mid;
  }
}

/// Small search for a rational root of p inside (lo, hi), via the rational
/// root theorem on the integerized primitive polynomial.
std::optional<Rational> rational_root_in(const UPoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) return std::nullopt;
  // integerize
  mpz_class den_lcm(1);
  for (const auto& coef : p.c) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), coef.raw().get_den().get_mpz_t());
  std::vector<mpz_class> ic;
  for (const auto& coef : p.c) ic.push_back(mpz_class(coef.raw().get_num() * (den_lcm / coef.raw().get_den())));
  std::size_t low = 0;
  while (low < ic.size() && ic[low] == 0) ++low;
  if (low >= ic.size()) return std::nullopt;
  if (low > 0) {  // x = 0 is a root
    Rational zero(0);
    if (lo < zero && zero < hi && p.sign_at(zero) == 0) return zero;
  }
  mpz_class a0 = abs(ic[low]);
  mpz_class an = abs(ic.back());
  if (a0 > 1000000 || an > 1000000) return std::nullopt;
  auto divisors = [](long n) {
    std::vector<long> d;
    for (long i = 1; i * i <= n; ++i)
      if (n % i == 0) {
        d.push_back(i);
        if (i != n / i) d.push_back(n / i);
      }
    return d;
  };
  for (long num : divisors(a0.get_si()))
    for (long den : divisors(an.get_si()))
      for (int sign : {1, -1}) {
        Rational cand(sign * num, den);
        if (lo < cand && cand < hi && p.sign_at(cand) == 0) return cand;
      }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// sign calculus over assumption facts

enum class Sign { Eq0, Ge0, Gt0, Le0, Lt0, Unknown };

Sign negate_sign(Sign s) {
  switch (s) {
    case Sign::Eq0: return Sign::Eq0;
    case Sign::Ge0: return Sign::Le0;
    case Sign::Gt0: return Sign::Lt0;
    case Sign::Le0: return Sign::Ge0;
    case Sign::Lt0: return Sign::Gt0;
    default: return Sign::Unknown;
  }
}

Sign product_sign(Sign a, Sign b) {
  if (a == Sign::Eq0 || b == Sign::Eq0) return Sign::Eq0;
  if (a == Sign::Unknown || b == Sign::Unknown) return Sign::Unknown;
  bool a_pos = a == Sign::Ge0 || a == Sign::Gt0;
  bool b_pos = b == Sign::Ge0 || b == Sign::Gt0;
  bool strict = (a == Sign::Gt0 || a == Sign::Lt0) && (b == Sign::Gt0 || b == Sign::Lt0);
  if (a_pos == b_pos) return strict ? Sign::Gt0 : Sign::Ge0;
  return strict ? Sign::Lt0 : Sign::Le0;
}

Sign sum_sign(Sign a, Sign b) {
  if (a == Sign::Eq0) return b;
  if (b == Sign::Eq0) return a;
  if (a == Sign::Unknown || b == Sign::Unknown) return Sign::Unknown;
  bool a_pos = a == Sign::Ge0 || a == Sign::Gt0;
  bool b_pos = b == Sign::Ge0 || b == Sign::Gt0;
  if (a_pos != b_pos) return Sign::Unknown;
  if (a_pos) return a == Sign::Gt0 || b == Sign::Gt0 ? Sign::Gt0 : Sign::Ge0;
  return a == Sign::Lt0 || b == Sign::Lt0 ? Sign::Lt0 : Sign::Le0;
}

Sign merge_facts(Sign a, Sign b) {
  if (a == b) return a;
  if (a == Sign::Unknown) return b;
  if (b == Sign::Unknown) return a;
  auto weak = [](Sign s) { return s == Sign::Ge0 || s == Sign::Le0; };
  if (a == Sign::Eq0 || b == Sign::Eq0) return Sign::Eq0;
  if (weak(a) && weak(b)) return Sign::Eq0;  // >=0 together with <=0
  if ((a == Sign::Gt0 && b == Sign::Ge0) || (a == Sign::Ge0 && b == Sign::Gt0)) return Sign::Gt0;
  if ((a == Sign::Lt0 && b == Sign::Le0) || (a == Sign::Le0 && b == Sign::Lt0)) return Sign::Lt0;
  // contradictory facts (e.g. >0 and <=0): assumptions are unsatisfiable;
  // Eq0 is as good as any sound answer here
  return Sign::Eq0;
}

Sign power_sign(Sign base, std::uint32_t exp) {
  if (exp == 0) return Sign::Gt0;
  if (exp % 2 == 1) return base;
  switch (base) {
    case Sign::Eq0: return Sign::Eq0;
    case Sign::Gt0: case Sign::Lt0: return Sign::Gt0;
    default: return Sign::Ge0;  // even powers are nonnegative regardless
  }
}

class SignFacts {
 public:
  void add_formula(const Formula& f) {
    if (f.kind() == Formula::Kind::And) {
      add_formula(f.lhs());
      add_formula(f.rhs());
      return;
    }
    if (f.kind() != Formula::Kind::Atom) return;  // no sound fact from a disjunction
    const Atom& a = f.as_atom();
    if (a.poly.is_constant()) return;
    Sign s = a.rel == Rel::Eq ? Sign::Eq0 : (a.rel == Rel::Gt ? Sign::Gt0 : Sign::Ge0);
    add_fact(a.poly, s);
    // a two-term equation  c*M + k = 0  pins the sign of the monomial M
    if (a.rel == Rel::Eq && a.poly.term_count() == 2) {
      const auto& terms = a.poly.terms();
      auto it = terms.begin();
      const auto& [m1, c1] = *it;
      const auto& [m2, c2] = *std::next(it);
      if (!m1.is_unit() && m2.is_unit()) {
        Rational v = -c2 / c1;  // M = v
        Sign ms = v.sign() > 0 ? Sign::Gt0 : (v.sign() < 0 ? Sign::Lt0 : Sign::Eq0);
        add_fact(Polynomial::term(Rational(1), m1), ms);
      }
    }
  }

  void add_fact(const Polynomial& p, Sign s) {
    if (p.is_zero() || p.is_constant()) return;
    Polynomial prim = p.primitive_part();
    store(prim, s);
    store(-prim, negate_sign(s));
    auto vars = prim.variables();
    if (vars.size() == 1 && prim.term_count() == 1 && prim.total_degree() == 1) {
      VarId v = *vars.begin();
      int lead = prim.leading_sign();
      var_signs_[v] = merge_facts(lookup_var(v), lead > 0 ? s : negate_sign(s));
    }
  }

  Sign lookup(const Polynomial& prim) const {
    auto it = by_key_.find(prim.str());
    return it == by_key_.end() ? Sign::Unknown : it->second;
  }
  Sign lookup_var(VarId v) const {
    auto it = var_signs_.find(v);
    return it == var_signs_.end() ? Sign::Unknown : it->second;
  }
  const std::vector<std::pair<Polynomial, Sign>>& facts() const { return facts_; }

 private:
  void store(const Polynomial& prim, Sign s) {
    std::string key = prim.str();
    auto it = by_key_.find(key);
    if (it == by_key_.end()) {
      by_key_.emplace(key, s);
      facts_.emplace_back(prim, s);
    } else {
      it->second = merge_facts(it->second, s);
      for (auto& [p, fs] : facts_)
        if (p == prim) fs = it->second;
    }
  }

  std::map<std::string, Sign> by_key_;
  std::vector<std::pair<Polynomial, Sign>> facts_;
  std::map<VarId, Sign> var_signs_;
};

Sign sign_of(const Polynomial& p, const SignFacts& facts, int depth);

Sign monomial_sum_sign(const Polynomial& p, const SignFacts& facts) {
  Sign total = Sign::Eq0;
  for (const auto& [m, c] : p.terms()) {
    Sign ms = c.sign() > 0 ? Sign::Gt0 : Sign::Lt0;
    for (const auto& [v, e] : m.factors()) {
      ms = product_sign(ms, power_sign(facts.lookup_var(v), e));
      if (ms == Sign::Unknown) break;
    }
    total = sum_sign(total, ms);
    if (total == Sign::Unknown) return total;
  }
  return total;
}

Sign sign_of(const Polynomial& p, const SignFacts& facts, int depth) {
  if (p.is_zero()) return Sign::Eq0;
  if (p.is_constant()) {
    int s = p.constant_value().sign();
    return s > 0 ? Sign::Gt0 : (s < 0 ? Sign::Lt0 : Sign::Eq0);
  }
  Polynomial prim = p.primitive_part();
  Sign direct = facts.lookup(prim);
  if (direct != Sign::Unknown) return direct;
  Sign mono = monomial_sum_sign(p, facts);
  if (mono != Sign::Unknown) return mono;
  if (depth <= 0) return Sign::Unknown;
  for (const auto& [f, fs] : facts.facts()) {
    if (fs == Sign::Unknown) continue;
    // p = f * q
    if (auto q = p.divide_exact(f)) {
      Sign qs = sign_of(*q, facts, depth - 1);
      Sign combined = product_sign(fs, qs);
      if (combined != Sign::Unknown) return combined;
    }
    // f = p * q: a strict or null sign of f transfers to p when q is signed
    if (auto q = f.divide_exact(p)) {
      Sign qs = sign_of(*q, facts, depth - 1);
      if (qs == Sign::Unknown || qs == Sign::Eq0) continue;
      bool q_pos = qs == Sign::Ge0 || qs == Sign::Gt0;
      switch (fs) {
        case Sign::Gt0: return q_pos ? Sign::Gt0 : Sign::Lt0;    // q is forced nonzero
        case Sign::Lt0: return q_pos ? Sign::Lt0 : Sign::Gt0;
        case Sign::Eq0:
          if (qs == Sign::Gt0 || qs == Sign::Lt0) return Sign::Eq0;
          break;
        case Sign::Ge0:
          if (qs == Sign::Gt0) return Sign::Ge0;
          if (qs == Sign::Lt0) return Sign::Le0;
          break;
        case Sign::Le0:
          if (qs == Sign::Gt0) return Sign::Le0;
          if (qs == Sign::Lt0) return Sign::Ge0;
          break;
        default: break;
      }
    }
  }
  return Sign::Unknown;
}

bool sign_proves(Sign s, Rel rel) {
  switch (rel) {
    case Rel::Ge: return s == Sign::Ge0 || s == Sign::Gt0 || s == Sign::Eq0;
    case Rel::Gt: return s == Sign::Gt0;
    case Rel::Eq: return s == Sign::Eq0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// constant folding

enum class Tri { False, True, Open };

struct Simplified {
  Tri value = Tri::Open;
  std::optional<Formula> formula;  // when Open
};

Simplified fold_constants(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (f.as_atom().trivial()) return {f.as_atom().trivial_value() ? Tri::True : Tri::False, {}};
      return {Tri::Open, f};
    case Formula::Kind::And: {
      Simplified a = fold_constants(f.lhs()), b = fold_constants(f.rhs());
      if (a.value == Tri::False || b.value == Tri::False) return {Tri::False, {}};
      if (a.value == Tri::True) return b;
      if (b.value == Tri::True) return a;
      return {Tri::Open, Formula::conj(*a.formula, *b.formula)};
    }
    case Formula::Kind::Or: {
      Simplified a = fold_constants(f.lhs()), b = fold_constants(f.rhs());
      if (a.value == Tri::True || b.value == Tri::True) return {Tri::True, {}};
      if (a.value == Tri::False) return b;
      if (b.value == Tri::False) return a;
      return {Tri::Open, Formula::disj(*a.formula, *b.formula)};
    }
  }
  return {Tri::Open, f};
}

// ---------------------------------------------------------------------------
// goal recursion for the per-atom tiers

bool prove_by_atoms(const Formula& goal, const std::function<bool(const Atom&)>& prover) {
  switch (goal.kind()) {
    case Formula::Kind::Atom: return prover(goal.as_atom());
    case Formula::Kind::And: return prove_by_atoms(goal.lhs(), prover) && prove_by_atoms(goal.rhs(), prover);
    case Formula::Kind::Or: return prove_by_atoms(goal.lhs(), prover) || prove_by_atoms(goal.rhs(), prover);
  }
  return false;
}

bool even_sign_atom(const Atom& a) {
  if (a.poly.is_zero()) return a.rel != Rel::Gt;
  if (a.rel == Rel::Eq) return false;
  bool has_positive_constant = false;
  for (const auto& [m, c] : a.poly.terms()) {
    if (!m.all_even()) return false;
    if (c.sign() <= 0) return false;
    if (m.is_unit()) has_positive_constant = true;
  }
  if (a.rel == Rel::Gt) return has_positive_constant;
  return true;
}

// ---------------------------------------------------------------------------
// complete univariate decision

struct UniRegion {
  bool at_root = false;
  bool exact = false;
  Rational sample;      // sample point, or the exact root value
  Rational lo, hi;      // for inexact root regions
};

struct UniResult {
  enum class Kind { Valid, Invalid, InvalidNoWitness, NotApplicable } kind;
  Rational witness;
};

/// Evaluates an atom given the sign of its polynomial at the current point.
bool atom_true_for_sign(Rel rel, int sign) {
  switch (rel) {
    case Rel::Eq: return sign == 0;
    case Rel::Ge: return sign >= 0;
    case Rel::Gt: return sign > 0;
  }
  return false;
}

UniResult decide_univariate(const std::vector<Formula>& assumptions, const Formula& goal,
                            VarId var, const DecideOptions& opts) {
  // gather the distinct primitive polynomials of all atoms
  std::vector<Polynomial> all_polys;
  std::map<std::string, std::size_t> index;
  auto add_poly = [&](const Polynomial& p) {
    Polynomial prim = p.primitive_part();
    if (prim.leading_sign() < 0) prim = -prim;
    std::string key = prim.str();
    if (!index.count(key)) {
      index.emplace(key, all_polys.size());
      all_polys.push_back(prim);
    }
  };
  std::vector<Atom> atoms;
  for (const auto& f : assumptions) f.collect_atoms(atoms);
  goal.collect_atoms(atoms);
  for (const Atom& a : atoms) add_poly(a.poly);

  UPoly product;
  product.c = {Rational(1)};
  for (const auto& p : all_polys) {
    UPoly u = to_upoly(p, var);
    if (static_cast<std::uint64_t>(u.degree()) + product.degree() > opts.univariate_max_degree)
      return {UniResult::Kind::NotApplicable, {}};
    product = product.mul(u);
  }
  UPoly s = product.squarefree_part();
  std::vector<IsolatedRoot> roots;
  try {
    roots = isolate_roots(s);
  } catch (const std::runtime_error&) {
    return {UniResult::Kind::NotApplicable, {}};
  }

  // region sample points: one per root, plus one between/around them
  std::vector<UniRegion> regions;
  if (roots.empty()) {
    regions.push_back({false, false, Rational(0), {}, {}});
  } else {
    regions.push_back({false, false, roots.front().lo, {}, {}});
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const auto& r = roots[i];
      regions.push_back({true, r.exact, r.exact ? r.value : Rational(0), r.lo, r.hi});
      regions.push_back({false, false, r.hi, {}, {}});
    }
  }

  bool no_witness_failure = false;
  IsolationBudget budget;
  for (const auto& region : regions) {
    if (!region.at_root || region.exact) {
      std::map<VarId, Rational> point{{var, region.sample}};
      bool assumptions_hold = true;
      for (const auto& f : assumptions)
        if (!f.eval(point)) {
          assumptions_hold = false;
          break;
        }
      if (assumptions_hold && !goal.eval(point))
        return {UniResult::Kind::Invalid, region.sample};
      continue;
    }
    // sign determination at an isolated (possibly irrational) root
    std::map<std::string, int> sign_at_root;
    bool signs_ok = true;
    for (const auto& p : all_polys) {
      try {
        sign_at_root[p.str()] =
            sign_at_isolated_root(to_upoly(p, var), s, region.lo, region.hi, budget);
      } catch (const std::runtime_error&) {
        signs_ok = false;
        break;
      }
    }
    if (!signs_ok) return {UniResult::Kind::NotApplicable, {}};
    auto eval_atom = [&](const Atom& a) {
      Polynomial prim = a.poly.primitive_part();
      int flip = 1;
      if (prim.leading_sign() < 0) {
        prim = -prim;
        flip = -1;
      }
      if (a.poly.is_zero()) return atom_true_for_sign(a.rel, 0);
      return atom_true_for_sign(a.rel, flip * sign_at_root.at(prim.str()));
    };
    std::function<bool(const Formula&)> eval_formula = [&](const Formula& f) -> bool {
      switch (f.kind()) {
        case Formula::Kind::Atom: return eval_atom(f.as_atom());
        case Formula::Kind::And: return eval_formula(f.lhs()) && eval_formula(f.rhs());
        case Formula::Kind::Or: return eval_formula(f.lhs()) || eval_formula(f.rhs());
      }
      return false;
    };
    bool assumptions_hold = true;
    for (const auto& f : assumptions)
      if (!eval_formula(f)) {
        assumptions_hold = false;
        break;
      }
    if (assumptions_hold && !eval_formula(goal)) {
      // sequent fails exactly at this root; usable only if the root is rational
      for (const auto& p : all_polys) {
        if (sign_at_root.at(p.str()) != 0) continue;
        if (auto r = rational_root_in(to_upoly(p, var), region.lo, region.hi))
          return {UniResult::Kind::Invalid, *r};
      }
      no_witness_failure = true;
    }
  }
  if (no_witness_failure) return {UniResult::Kind::InvalidNoWitness, {}};
  return {UniResult::Kind::Valid, {}};
}

// ---------------------------------------------------------------------------
// exact falsification

std::vector<VarId> sequent_variables(const std::vector<Formula>& assumptions, const Formula& goal) {
  std::set<VarId> vars;
  for (const auto& f : assumptions)
    for (VarId v : f.variables()) vars.insert(v);
  for (VarId v : goal.variables()) vars.insert(v);
  return {vars.begin(), vars.end()};
}

bool falsified_at(const std::vector<Formula>& assumptions, const Formula& goal,
                  const std::map<VarId, Rational>& point) {
  for (const auto& f : assumptions)
    if (!f.eval(point)) return false;
  return !goal.eval(point);
}

std::optional<std::map<VarId, Rational>> grid_falsify(const std::vector<Formula>& assumptions,
                                                      const Formula& goal,
                                                      const std::vector<VarId>& vars,
                                                      const DecideOptions& opts) {
  std::size_t n = vars.size();
  if (n == 0) {
    std::map<VarId, Rational> empty;
    if (falsified_at(assumptions, goal, empty)) return empty;
    return std::nullopt;
  }
  std::size_t examined = 0;
  std::vector<long> coord(n);
  // nearest integer points first: enumerate by L-infinity shell
  for (int shell = 0; shell <= opts.grid_radius; ++shell) {
    std::fill(coord.begin(), coord.end(), -shell);
    while (true) {
      bool on_shell = false;
      for (long c : coord)
        if (c == shell || c == -shell) {
          on_shell = true;
          break;
        }
      if (on_shell || shell == 0) {
        if (++examined > opts.grid_cap) return std::nullopt;
        std::map<VarId, Rational> point;
        for (std::size_t i = 0; i < n; ++i) point.emplace(vars[i], Rational(coord[i]));
        if (falsified_at(assumptions, goal, point)) return point;
      }
      std::size_t k = 0;
      while (k < n && coord[k] == shell) coord[k++] = -shell;
      if (k == n) break;
      ++coord[k];
    }
  }
  return std::nullopt;
}

std::optional<std::map<VarId, Rational>> random_falsify(const std::vector<Formula>& assumptions,
                                                        const Formula& goal,
                                                        const std::vector<VarId>& vars,
                                                        const DecideOptions& opts) {
  if (vars.empty()) return std::nullopt;
  for (std::size_t i = 0; i < opts.random_samples; ++i) {
    SplitMix64 rng(opts.seed * 0x9E3779B97F4A7C15ull + i + 1);
    std::map<VarId, Rational> point;
    for (VarId v : vars) {
      long num = rng.below(2 * opts.random_bound + 1) - opts.random_bound;
      long den = rng.below(opts.random_bound) + 1;
      point.emplace(v, Rational(num, den));
    }
    if (falsified_at(assumptions, goal, point)) return point;
  }
  return std::nullopt;
}

}  // namespace

SturmChain sturm_chain(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  auto vars = p.variables();
  if (vars.size() > 1) throw std::invalid_argument("sturm_chain: polynomial is not univariate");
  VarId var = vars.empty() ? 0 : *vars.begin();
  SturmChain chain;
  chain.var = var;
  for (const auto& u : sturm_sequence(to_upoly(p, var))) chain.elements.push_back(from_upoly(u, var));
  return chain;
}

std::size_t count_real_roots(const SturmChain& chain) {
  std::vector<UPoly> seq;
  for (const auto& p : chain.elements) seq.push_back(to_upoly(p, chain.var));
  return variations_at_neg_inf(seq) - variations_at_pos_inf(seq);
}

Verdict decide(const std::vector<Formula>& assumptions, const Formula& goal,
               const DecideOptions& opts) {
  // tier 1: propositional closure over syntactically identical atoms
  {
    std::size_t count = 0;
    for (const auto& f : assumptions) count += f.atoms().size();
    count += goal.atoms().size();
    if (count <= opts.max_prop_atoms && prop_entails(assumptions, goal))
      return Verdict::make_valid(Cert::Propositional);
  }

  // tier 2: fold atoms with constant polynomials, then close on the residue
  std::vector<Formula> folded_assumptions;
  Simplified folded_goal = fold_constants(goal);
  bool assumption_false = false;
  for (const auto& f : assumptions) {
    Simplified s = fold_constants(f);
    if (s.value == Tri::False) {
      assumption_false = true;
      break;
    }
    if (s.value == Tri::Open) folded_assumptions.push_back(*s.formula);
  }
  if (assumption_false || folded_goal.value == Tri::True) return Verdict::make_valid(Cert::Identity);
  if (folded_goal.value == Tri::Open) {
    bool changed = folded_assumptions.size() != assumptions.size() || !(*folded_goal.formula == goal);
    if (changed && prop_entails(folded_assumptions, *folded_goal.formula))
      return Verdict::make_valid(Cert::Identity);
  }

  if (folded_goal.value == Tri::Open) {
    const Formula& g = *folded_goal.formula;

    // tier 3: even powers with uniformly positive coefficients
    if (prove_by_atoms(g, even_sign_atom)) return Verdict::make_valid(Cert::EvenSign);

    // tier 4: sign facts from assumption atoms, propagated through products
    {
      SignFacts facts;
      for (const auto& f : folded_assumptions) facts.add_formula(f);
      auto atom_prover = [&](const Atom& a) {
        return sign_proves(sign_of(a.poly, facts, opts.factor_depth), a.rel);
      };
      if (prove_by_atoms(g, atom_prover)) return Verdict::make_valid(Cert::AssumptionSign);
    }

    // tier 5: the whole sequent mentions one variable: decide completely
    {
      std::set<VarId> vars;
      for (const auto& f : folded_assumptions)
        for (VarId v : f.variables()) vars.insert(v);
      for (VarId v : g.variables()) vars.insert(v);
      if (vars.size() == 1) {
        UniResult r = decide_univariate(folded_assumptions, g, *vars.begin(), opts);
        switch (r.kind) {
          case UniResult::Kind::Valid:
            return Verdict::make_valid(Cert::Sturm);
          case UniResult::Kind::Invalid: {
            std::map<VarId, Rational> w{{*vars.begin(), r.witness}};
            if (!falsified_at(assumptions, goal, w))
              throw std::logic_error("univariate witness failed exact re-evaluation");
            return Verdict::make_invalid(std::move(w));
          }
          case UniResult::Kind::InvalidNoWitness:
            return Verdict::make_unknown();  // false only at irrational points
          case UniResult::Kind::NotApplicable:
            break;
        }
      }
    }
  }

  // tier 6: exact rational falsification, small integer shells first
  {
    std::vector<VarId> vars = sequent_variables(assumptions, goal);
    auto check = [&](const std::optional<std::map<VarId, Rational>>& w) -> std::optional<Verdict> {
      if (!w) return std::nullopt;
      if (!falsified_at(assumptions, goal, *w))
        throw std::logic_error("falsification witness failed exact re-evaluation");
      return Verdict::make_invalid(*w);
    };
    if (auto v = check(grid_falsify(assumptions, goal, vars, opts))) return *v;
    if (auto v = check(random_falsify(assumptions, goal, vars, opts))) return *v;
  }

  return Verdict::make_unknown();
}

}  // namespace diffinv

#include "diffinv/formula.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace diffinv {

std::string rel_str(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

bool Atom::trivial_value() const {
  Rational v = poly.constant_value();
  switch (rel) {
    case Rel::Eq: return v.is_zero();
    case Rel::Ge: return v.sign() >= 0;
    case Rel::Gt: return v.sign() > 0;
  }
  return false;
}

Atom Atom::canonical_key() const {
  if (poly.is_zero()) return {poly, rel};
  Polynomial p = poly.primitive_part();
  if (rel == Rel::Eq && p.leading_sign() < 0) p = -p;
  return {p, rel};
}

std::string Atom::str() const { return poly.str() + " " + rel_str(rel) + " 0"; }

std::string OperatorClass::str() const {
  std::string s = "{";
  bool first = true;
  auto add = [&](const char* op) {
    if (!first) s += ",";
    s += op;
    first = false;
  };
  if (ge) add(">=");
  if (gt) add(">");
  if (eq) add("=");
  if (conj) add("&");
  if (disj) add("|");
  return s + "}";
}

Formula Formula::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Formula(std::move(n));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Formula(std::move(n));
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  if (kind() == Kind::Atom) return as_atom() == o.as_atom();
  return lhs() == o.lhs() && rhs() == o.rhs();
}

void Formula::collect_atoms(std::vector<Atom>& out) const {
  if (kind() == Kind::Atom) {
    out.push_back(as_atom());
    return;
  }
  lhs().collect_atoms(out);
  rhs().collect_atoms(out);
}

std::vector<Atom> Formula::atoms() const {
  std::vector<Atom> out;
  collect_atoms(out);
  return out;
}

std::set<VarId> Formula::variables() const {
  std::set<VarId> vars;
  for (const Atom& a : atoms())
    for (VarId v : a.poly.variables()) vars.insert(v);
  return vars;
}

bool Formula::eval(const std::map<VarId, Rational>& point) const {
  switch (kind()) {
    case Kind::Atom: {
      Rational v = as_atom().poly.eval(point);
      switch (as_atom().rel) {
        case Rel::Eq: return v.is_zero();
        case Rel::Ge: return v.sign() >= 0;
        case Rel::Gt: return v.sign() > 0;
      }
      return false;
    }
    case Kind::And: return lhs().eval(point) && rhs().eval(point);
    case Kind::Or: return lhs().eval(point) || rhs().eval(point);
  }
  return false;
}

double Formula::sat_margin(const std::vector<double>& dense_point) const {
  switch (kind()) {
    case Kind::Atom: {
      double v = as_atom().poly.eval_double(dense_point);
      if (as_atom().rel == Rel::Eq) return -std::abs(v);
      return v;
    }
    case Kind::And: return std::min(lhs().sat_margin(dense_point), rhs().sat_margin(dense_point));
    case Kind::Or: return std::max(lhs().sat_margin(dense_point), rhs().sat_margin(dense_point));
  }
  return 0.0;
}

std::string Formula::str() const {
  switch (kind()) {
    case Kind::Atom: {
      const Atom& a = as_atom();
      return a.poly.str() + " " + rel_str(a.rel) + " 0";
    }
    case Kind::And: return lhs().str_parenthesized() + " & " + rhs().str_parenthesized();
    case Kind::Or: return lhs().str() + " | " + rhs().str();
  }
  return "?";
}

std::string Formula::str_parenthesized() const {
  if (kind() == Kind::Or) return "(" + str() + ")";
  return str();
}

OperatorClass classify(const Formula& f) {
  OperatorClass c;
  switch (f.kind()) {
    case Formula::Kind::Atom:
      switch (f.as_atom().rel) {
        case Rel::Eq: c.eq = true; break;
        case Rel::Ge: c.ge = true; break;
        case Rel::Gt: c.gt = true; break;
      }
      return c;
    case Formula::Kind::And:
      c.conj = true;
      return c.unite(classify(f.lhs())).unite(classify(f.rhs()));
    case Formula::Kind::Or:
      c.disj = true;
      return c.unite(classify(f.lhs())).unite(classify(f.rhs()));
  }
  return c;
}

bool is_open(const Formula& f) {
  for (const Atom& a : f.atoms())
    if (a.rel != Rel::Gt) return false;
  return true;
}

namespace {

struct AtomKeyLess {
  bool operator()(const Atom& a, const Atom& b) const {
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.poly.str() < b.poly.str();
  }
};

using AtomIndex = std::map<Atom, std::size_t, AtomKeyLess>;

void index_atoms(const Formula& f, AtomIndex& index) {
  for (const Atom& a : f.atoms()) {
    Atom key = a.canonical_key();
    if (!index.count(key)) index.emplace(key, index.size());
  }
}

bool eval_prop(const Formula& f, const AtomIndex& index, std::uint64_t assignment) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::size_t bit = index.at(f.as_atom().canonical_key());
      return (assignment >> bit) & 1u;
    }
    case Formula::Kind::And: return eval_prop(f.lhs(), index, assignment) && eval_prop(f.rhs(), index, assignment);
    case Formula::Kind::Or: return eval_prop(f.lhs(), index, assignment) || eval_prop(f.rhs(), index, assignment);
  }
  return false;
}

constexpr std::size_t kMaxPropAtoms = 20;

}  // namespace

bool prop_equivalent(const Formula& f, const Formula& g) {
  AtomIndex index;
  index_atoms(f, index);
  index_atoms(g, index);
  if (index.size() > kMaxPropAtoms) throw std::runtime_error("prop_equivalent: too many distinct atoms");
  std::uint64_t n = 1ull << index.size();
  for (std::uint64_t a = 0; a < n; ++a)
    if (eval_prop(f, index, a) != eval_prop(g, index, a)) return false;
  return true;
}

bool prop_entails(const std::vector<Formula>& assumptions, const Formula& goal) {
  AtomIndex index;
  for (const Formula& f : assumptions) index_atoms(f, index);
  index_atoms(goal, index);
  if (index.size() > kMaxPropAtoms) return false;  // heuristic tier: give up, never claim
  std::uint64_t n = 1ull << index.size();
  for (std::uint64_t a = 0; a < n; ++a) {
    bool all = true;
    for (const Formula& f : assumptions)
      if (!eval_prop(f, index, a)) {
        all = false;
        break;
      }
    if (all && !eval_prop(goal, index, a)) return false;
  }
  return true;
}

}  // namespace diffinv

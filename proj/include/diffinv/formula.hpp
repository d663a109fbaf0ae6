#ifndef DIFFINV_FORMULA_HPP
#define DIFFINV_FORMULA_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "diffinv/polynomial.hpp"

namespace diffinv {

/// Atom relations after normalization; the right-hand side is always 0.
/// Surface <= and < are ingested as >= and > of the negated polynomial.
enum class Rel { Eq, Ge, Gt };

std::string rel_str(Rel r);

struct Atom {
  Polynomial poly;
  Rel rel = Rel::Ge;

  /// Constant polynomial: trivially true or false, decidable by evaluation.
  bool trivial() const { return poly.is_constant(); }
  bool trivial_value() const;

  /// Scale-invariant key: primitive polynomial, and for equations a fixed
  /// leading sign. Used for propositional-letter identity and dedup.
  Atom canonical_key() const;

  bool operator==(const Atom& o) const { return rel == o.rel && poly == o.poly; }
  std::string str() const;
};

struct OperatorClass {
  bool ge = false, gt = false, eq = false, conj = false, disj = false;

  bool subset_of(const OperatorClass& o) const {
    return (!ge || o.ge) && (!gt || o.gt) && (!eq || o.eq) && (!conj || o.conj) && (!disj || o.disj);
  }
  OperatorClass unite(const OperatorClass& o) const {
    return {ge || o.ge, gt || o.gt, eq || o.eq, conj || o.conj, disj || o.disj};
  }
  bool operator==(const OperatorClass& o) const {
    return ge == o.ge && gt == o.gt && eq == o.eq && conj == o.conj && disj == o.disj;
  }
  std::string str() const;
};

/// Quantifier-free formula in negation normal form: atoms combined with
/// conjunction and disjunction. Negation, implication and biimplication are
/// surface syntax only and never survive ingestion. Immutable; cheap to copy.
class Formula {
 public:
  enum class Kind { Atom, And, Or };

  Formula() : Formula(Formula::atom({Polynomial(Rational(0)), Rel::Ge})) {}  // 0 >= 0
  static Formula atom(Atom a);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula truth() { return Formula::atom({Polynomial(Rational(0)), Rel::Ge}); }
  static Formula falsity() { return Formula::atom({Polynomial(Rational(0)), Rel::Gt}); }

  Kind kind() const { return node_->kind; }
  const Atom& as_atom() const { return node_->atom; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  void collect_atoms(std::vector<Atom>& out) const;
  std::vector<Atom> atoms() const;
  std::set<VarId> variables() const;

  /// True at an exact rational point.
  bool eval(const std::map<VarId, Rational>& point) const;
  /// Signed satisfaction margin: >= 0 iff (approximately) true; And is min,
  /// Or is max, equations contribute -|p|.
  double sat_margin(const std::vector<double>& dense_point) const;

  std::string str() const;
  std::string str_parenthesized() const;  // wrapped if a disjunction

 private:
  struct Node {
    Kind kind;
    Atom atom;
    std::shared_ptr<const Node> lhs, rhs;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Minimal operator set used by F.
OperatorClass classify(const Formula& f);

/// True iff every atom of F is strict.
bool is_open(const Formula& f);

/// True iff F <-> G is a propositional tautology with atoms treated as opaque
/// letters (identified up to positive scaling).
bool prop_equivalent(const Formula& f, const Formula& g);

/// True iff assumptions -> goal is a propositional tautology over opaque
/// atom letters. Conjunction of an empty assumption list is truth.
bool prop_entails(const std::vector<Formula>& assumptions, const Formula& goal);

}  // namespace diffinv

#endif  // DIFFINV_FORMULA_HPP

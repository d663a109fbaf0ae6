#ifndef DIFFINV_DERIVATION_HPP
#define DIFFINV_DERIVATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "diffinv/formula.hpp"

namespace diffinv {

/// Continuous program x' = theta & H. Each evolving variable appears exactly
/// once on the left; symbols only on right-hand sides or in formulas are
/// constants with implicit derivative 0. An absent domain means true.
struct OdeSystem {
  std::vector<std::pair<VarId, Polynomial>> equations;
  std::optional<Formula> domain;

  bool evolves(VarId v) const;
  Formula domain_or_true() const { return domain ? *domain : Formula::truth(); }
  /// Same vector field with the domain strengthened by c.
  OdeSystem with_domain_and(const Formula& c) const;
  /// Extended with one more equation v' = rhs.
  OdeSystem extended(VarId v, const Polynomial& rhs) const;

  bool operator==(const OdeSystem& o) const;
  std::string str() const;
};

/// Whether strict atoms derive to strict or weak conditions. The weak form is
/// the default: non-decrease of the defining polynomial is all the induction
/// step needs, and it is the more permissive premise.
enum class DeriveMode { Weak, Strict };

/// Sum over evolving variables of d(p)/d(x_i) * theta_i. Symbols that do not
/// evolve contribute nothing.
Polynomial lie_derivative(const Polynomial& p, const OdeSystem& sys);

/// Total derivative of a formula with the vector field substituted: each atom
/// p ~ 0 becomes lie(p) ~' 0 where = stays =, >= stays >=, and > weakens to
/// >= (or stays > under DeriveMode::Strict). Both conjunction and disjunction
/// derive to a conjunction.
Formula derive_formula(const Formula& f, const OdeSystem& sys, DeriveMode mode = DeriveMode::Weak);

}  // namespace diffinv

#endif  // DIFFINV_DERIVATION_HPP

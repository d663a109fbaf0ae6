#include "diffinv/derivation.hpp"

#include <sstream>

namespace diffinv {

bool OdeSystem::evolves(VarId v) const {
  for (const auto& [var, rhs] : equations)
    if (var == v) return true;
  return false;
}

OdeSystem OdeSystem::with_domain_and(const Formula& c) const {
  OdeSystem r = *this;
  r.domain = domain ? Formula::conj(*domain, c) : c;
  return r;
}

OdeSystem OdeSystem::extended(VarId v, const Polynomial& rhs) const {
  OdeSystem r = *this;
  r.equations.emplace_back(v, rhs);
  return r;
}

bool OdeSystem::operator==(const OdeSystem& o) const {
  if (equations.size() != o.equations.size()) return false;
  for (std::size_t i = 0; i < equations.size(); ++i)
    if (equations[i].first != o.equations[i].first || equations[i].second != o.equations[i].second)
      return false;
  if (domain.has_value() != o.domain.has_value()) return false;
  return !domain || *domain == *o.domain;
}

std::string OdeSystem::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, rhs] : equations) {
    if (!first) os << ", ";
    first = false;
    os << VarTable::instance().name(v) << "' = " << rhs.str();
  }
  if (domain) os << " & " << domain->str();
  return os.str();
}

Polynomial lie_derivative(const Polynomial& p, const OdeSystem& sys) {
  Polynomial total;
  for (const auto& [v, rhs] : sys.equations) {
    Polynomial d = p.partial_derivative(v);
    if (!d.is_zero()) total = total + d * rhs;
  }
  return total;
}

Formula derive_formula(const Formula& f, const OdeSystem& sys, DeriveMode mode) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      const Atom& a = f.as_atom();
      Rel r;
      switch (a.rel) {
        case Rel::Eq: r = Rel::Eq; break;
        case Rel::Ge: r = Rel::Ge; break;
        case Rel::Gt: r = mode == DeriveMode::Strict ? Rel::Gt : Rel::Ge; break;
        default: r = Rel::Ge; break;
      }
      return Formula::atom({lie_derivative(a.poly, sys), r});
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
      // disjunctions derive conjunctively: both branches must satisfy the
      // induction step
      return Formula::conj(derive_formula(f.lhs(), sys, mode), derive_formula(f.rhs(), sys, mode));
  }
  return Formula::truth();
}

}  // namespace diffinv

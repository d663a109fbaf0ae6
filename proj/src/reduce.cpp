#include "diffinv/reduce.hpp"

namespace diffinv {

Formula normalize_rhs_zero(const Formula& f) {
  // the Formula representation stores nothing else
  return f;
}

Atom equational_collapse(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      const Atom& a = f.as_atom();
      if (a.rel != Rel::Eq) throw NotEquational();
      return a;
    }
    case Formula::Kind::Or: {
      Atom a = equational_collapse(f.lhs());
      Atom b = equational_collapse(f.rhs());
      return {a.poly * b.poly, Rel::Eq};
    }
    case Formula::Kind::And: {
      Atom a = equational_collapse(f.lhs());
      Atom b = equational_collapse(f.rhs());
      return {a.poly * a.poly + b.poly * b.poly, Rel::Eq};
    }
  }
  throw NotEquational();
}

Atom eq_to_weak(const Atom& a) {
  if (a.rel != Rel::Eq) throw NotEquation();
  return {-(a.poly * a.poly), Rel::Ge};
}

Formula eq_to_conj_weak(const Atom& a) {
  if (a.rel != Rel::Eq) throw NotEquation();
  return Formula::conj(Formula::atom({a.poly, Rel::Ge}), Formula::atom({-a.poly, Rel::Ge}));
}

std::optional<Formula> apply_reduction(const std::string& name, const Formula& f) {
  if (name == "eq-collapse") return Formula::atom(equational_collapse(f));
  if (name == "eq-to-weak") return Formula::atom(eq_to_weak(equational_collapse(f)));
  if (name == "eq-to-conj-weak") return eq_to_conj_weak(equational_collapse(f));
  return std::nullopt;
}

}  // namespace diffinv

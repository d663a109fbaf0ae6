#ifndef DIFFINV_REDUCE_HPP
#define DIFFINV_REDUCE_HPP

#include <optional>
#include <string>

#include "diffinv/formula.hpp"

namespace diffinv {

struct NotEquational : std::runtime_error {
  NotEquational() : std::runtime_error("formula is not purely equational") {}
};
struct NotEquation : std::runtime_error {
  NotEquation() : std::runtime_error("atom is not an equation") {}
};

/// Every atom rewritten to relation in {=, >=, >} with right-hand side 0.
/// Formulas ingested by the parser already have this shape; the operation is
/// idempotent.
Formula normalize_rhs_zero(const Formula& f);

/// Collapses a purely equational formula to a single equation, bottom-up:
/// p = 0 | q = 0 becomes p*q = 0, and p = 0 & q = 0 becomes p^2 + q^2 = 0.
/// Throws NotEquational if any atom is an inequality.
Atom equational_collapse(const Formula& f);

/// p = 0 into the single weak inequality -p^2 >= 0.
Atom eq_to_weak(const Atom& a);

/// p = 0 into p >= 0 & -p >= 0; no degree penalty.
Formula eq_to_conj_weak(const Atom& a);

/// Reductions by script name: eq-collapse, eq-to-weak, eq-to-conj-weak.
/// Result formula, or nullopt for an unknown name.
std::optional<Formula> apply_reduction(const std::string& name, const Formula& f);

}  // namespace diffinv

#endif  // DIFFINV_REDUCE_HPP

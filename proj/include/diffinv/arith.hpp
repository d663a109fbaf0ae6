#ifndef DIFFINV_ARITH_HPP
#define DIFFINV_ARITH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffinv/formula.hpp"

namespace diffinv {

/// Which tier established validity.
enum class Cert { Propositional, Identity, EvenSign, AssumptionSign, Sturm };

std::string cert_str(Cert c);

/// Three-valued oracle outcome. Invalid always carries an exact rational
/// point falsifying the sequent; Valid is only produced by a tier whose
/// soundness argument is local and checkable. Unknown is the escape hatch.
struct Verdict {
  enum class Kind { Valid, Invalid, Unknown } kind = Kind::Unknown;
  std::optional<Cert> certificate;                 // Valid only
  std::map<VarId, Rational> witness;               // Invalid only

  bool valid() const { return kind == Kind::Valid; }
  bool invalid() const { return kind == Kind::Invalid; }
  bool unknown() const { return kind == Kind::Unknown; }

  static Verdict make_valid(Cert c) { return {Kind::Valid, c, {}}; }
  static Verdict make_invalid(std::map<VarId, Rational> w) { return {Kind::Invalid, std::nullopt, std::move(w)}; }
  static Verdict make_unknown() { return {}; }

  std::string str() const;
};

struct DecideOptions {
  std::uint64_t seed = 0;
  int grid_radius = 5;            // integer grid [-r, r]^n, nearest shells first
  std::size_t grid_cap = 20000;   // total grid points examined
  std::size_t random_samples = 1000;
  long random_bound = 100;        // numerators and denominators up to this
  std::size_t max_prop_atoms = 16;
  std::uint64_t univariate_max_degree = 48;
  int factor_depth = 4;           // recursion depth of sign factoring
};

/// Sound, incomplete validity check for the sequent
///   /\ assumptions  ->  goal
/// over the reals. Tiers, in order: propositional closure over syntactically
/// identical atoms; constant-polynomial folding; even-power sign analysis;
/// sign propagation from assumption atoms; complete univariate decision by
/// Sturm chains; exact rational falsification on a grid and random samples;
/// Unknown. Deterministic for a fixed seed.
Verdict decide(const std::vector<Formula>& assumptions, const Formula& goal,
               const DecideOptions& opts = {});

/// Canonical Sturm chain of a univariate polynomial: the input, its
/// derivative, then negated remainders until the sequence vanishes.
struct SturmChain {
  VarId var = 0;
  std::vector<Polynomial> elements;
};

/// Throws ZeroPolynomial on 0; requires p univariate.
SturmChain sturm_chain(const Polynomial& p);

/// Number of distinct real roots over (-inf, inf), by the sign-change
/// difference of the chain at the two infinities.
std::size_t count_real_roots(const SturmChain& chain);

}  // namespace diffinv

#endif  // DIFFINV_ARITH_HPP

#ifndef DIFFINV_SEARCH_HPP
#define DIFFINV_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "diffinv/kernel.hpp"
#include "diffinv/numsim.hpp"

namespace diffinv {

struct SearchConfig {
  OperatorClass opclass;
  unsigned max_degree = 1;
  std::vector<Rational> coefficient_pool;  // nonempty
  unsigned max_atoms = 1;
  unsigned max_cuts = 0;
  bool allow_open_di = false;
  bool allow_da = false;
  std::size_t budget = 100000;  // candidate-count cap
  std::uint64_t seed = 0;
  Exec exec = Exec::Serial;
};

/// Deterministic small-first stream of candidate invariants: polynomials over
/// the coefficient pool with monomials up to the degree bound, one atom per
/// allowed relation, then left-nested connective combinations up to the atom
/// bound. Constant polynomials are skipped and scaled duplicates removed.
class CandidateEnumerator {
 public:
  CandidateEnumerator(std::vector<VarId> vars, const SearchConfig& cfg);

  /// Next candidate, or nullopt when the stream (or the weight cap) is done.
  std::optional<Formula> next();

 private:
  void refill();
  void build_atoms_of_weight(unsigned weight);

  std::vector<VarId> vars_;
  SearchConfig cfg_;
  std::vector<Monomial> universe_;
  std::vector<Rational> pool_;                       // nonzero, small first
  std::vector<std::pair<Formula, unsigned>> atoms_;  // atom candidates with weights
  std::vector<unsigned> atoms_done_weight_;
  std::set<std::string> seen_;
  std::vector<Formula> pending_;
  std::size_t pending_pos_ = 0;
  unsigned current_weight_ = 0;
  unsigned max_weight_ = 0;
  unsigned atoms_built_upto_ = 0;
};

/// First candidate in enumeration order whose three variation premises are
/// all oracle-valid; returns the assembled, re-checked proof. Unknown oracle
/// verdicts skip the candidate. Deterministic regardless of parallelism.
std::optional<std::pair<Formula, ProofNode>> search_invariant(const Problem& problem,
                                                              const SearchConfig& cfg,
                                                              const KernelConfig& kernel = {});

/// Iterative differential-cut strengthening: close by induction or weakening
/// if possible, otherwise cut in a provable, strictly strengthening C and
/// recurse on the restricted domain, at most max_cuts times. Falls back to
/// plain invariant search when the goal is not in invariant shape, and to the
/// auxiliary-variable template as a last resort when allowed.
std::optional<ProofNode> search_with_cuts(const Problem& problem, const SearchConfig& cfg,
                                          const KernelConfig& kernel = {});

}  // namespace diffinv

#endif  // DIFFINV_SEARCH_HPP

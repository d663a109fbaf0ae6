#ifndef DIFFINV_KERNEL_HPP
#define DIFFINV_KERNEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "diffinv/arith.hpp"
#include "diffinv/derivation.hpp"

namespace diffinv {

/// Verification problem pre -> [sys] post.
struct Problem {
  OdeSystem sys;
  Formula pre, post;
};

struct ModalGoal {
  OdeSystem sys;
  Formula post;
  bool operator==(const ModalGoal& o) const { return sys == o.sys && post == o.post; }
  std::string str() const;
};

/// Sequent with at most one modal formula on each side. Plain real-arithmetic
/// sequents have neither.
struct Sequent {
  std::vector<Formula> antecedent;
  std::optional<ModalGoal> modal_antecedent;
  std::vector<Formula> succedent;
  std::optional<ModalGoal> modal;

  static Sequent arith(std::vector<Formula> ante, std::vector<Formula> succ) {
    return {std::move(ante), std::nullopt, std::move(succ), std::nullopt};
  }
  static Sequent goal(Formula pre, ModalGoal g) {
    return {{std::move(pre)}, std::nullopt, {}, std::move(g)};
  }

  bool is_arith() const { return !modal && !modal_antecedent; }
  bool operator==(const Sequent& o) const;
  std::string str() const;
};

struct KernelError : std::runtime_error {
  explicit KernelError(const std::string& m) : std::runtime_error(m) {}
};
struct ShapeMismatch : KernelError {
  explicit ShapeMismatch(const std::string& m) : KernelError("shape mismatch: " + m) {}
};
struct NotOpen : KernelError {
  NotOpen() : KernelError("induction over an open invariant requires all atoms strict") {}
};
struct NotFresh : KernelError {
  explicit NotFresh(const std::string& v) : KernelError("auxiliary variable '" + v + "' already occurs in the goal") {}
};
struct GlobalSolutionUnverified : KernelError {
  GlobalSolutionUnverified()
      : KernelError("auxiliary dynamics is not affine; pass assume-global to accept it") {}
};
struct ModalMismatch : KernelError {
  ModalMismatch() : KernelError("generalization requires both modalities to share one system") {}
};
struct MalformedTree : KernelError {
  explicit MalformedTree(const std::string& m) : KernelError("malformed proof tree: " + m) {}
};

enum class RuleId {
  Di, DiOpen, Dw, Dc, Da, Variation, Gen, Generalize, UseReduction,
  AndR, AndL, OrR, OrL, Cut, ArithLeaf, EquivPattern
};

std::string rule_name(RuleId id);

/// One rule application: the identifier plus everything needed to regenerate
/// the premises from the conclusion.
struct RuleApp {
  RuleId id = RuleId::ArithLeaf;
  std::optional<Formula> formula;            // invariant / cut / generalization
  std::optional<VarId> aux_var;              // Da
  std::optional<Polynomial> aux_rhs;         // Da
  std::optional<Formula> aux_psi;            // Da
  std::optional<Polynomial> aux_witness;     // Da, explicit existence witness
  bool assume_global = false;                // Da
  std::size_t index = 0;                     // propositional principal formula
  std::string reduction;                     // UseReduction
};

struct ProofNode {
  Sequent conclusion;
  RuleApp rule;
  std::vector<ProofNode> premises;
};

struct KernelConfig {
  DeriveMode derive_mode = DeriveMode::Weak;
  int cut_depth_limit = 64;
  DecideOptions arith;
};

// --- rule applications (premise generation) ---

Sequent apply_di(const Sequent& goal, const KernelConfig& cfg = {});
Sequent apply_di_open(const Sequent& goal, const KernelConfig& cfg = {});
Sequent apply_dw(const Sequent& goal);
std::pair<Sequent, Sequent> apply_dc(const Sequent& goal, const Formula& c);

struct DaApplication {
  std::vector<ProofNode> equivalence_premises;  // side checks for pre <-> exists y psi
  Sequent modal_premise;                        // psi |- [extended sys] psi
};
DaApplication apply_da(const Sequent& goal, VarId y, const Polynomial& theta_y, const Formula& psi,
                       const std::optional<Polynomial>& witness, bool assume_global);

std::array<Sequent, 3> apply_variation(const Problem& problem, const Formula& f);
Sequent apply_gen(const Sequent& goal);
std::pair<Sequent, Sequent> apply_generalize(const Sequent& goal, const Formula& g);
std::vector<Sequent> apply_propositional(const Sequent& goal, RuleId rule, std::size_t index = 0);
std::pair<Sequent, Sequent> apply_cut(const Sequent& goal, const Formula& phi);

/// Evaluates a leaf: axiom closure first (identical formula on both sides),
/// then the arithmetic oracle on /\antecedent -> \/succedent.
Verdict close_by_arith(const Sequent& leaf, const DecideOptions& opts);

// --- whole-tree checking ---

struct LeafReport {
  std::vector<std::size_t> path;
  Verdict verdict;
  bool by_axiom = false;
  bool by_pattern = false;
};

struct CheckResult {
  Verdict::Kind status = Verdict::Kind::Unknown;
  std::map<VarId, Rational> witness;        // first refuted leaf, if any
  std::vector<std::size_t> offending_path;  // refuted or unknown leaf
  std::vector<LeafReport> leaves;

  bool valid() const { return status == Verdict::Kind::Valid; }
};

/// Revalidates a full tree: every node's premises must regenerate exactly
/// from its rule instance, and every leaf must close by axiom, by the built-in
/// existence pattern, or by an arith Valid verdict. Throws MalformedTree on
/// structural violations.
CheckResult check_proof(const ProofNode& tree, const KernelConfig& cfg = {});

// --- proof construction helpers used by the script replayer and the search ---

/// Plain differential induction when f equals both pre and post, otherwise
/// the derived three-premise variation with f as the invariant.
ProofNode build_invariant_proof(const Problem& problem, const Formula& f, const KernelConfig& cfg,
                                bool open_induction = false);

ProofNode make_arith_leaf(Sequent s);

}  // namespace diffinv

#endif  // DIFFINV_KERNEL_HPP

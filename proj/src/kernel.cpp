#include "diffinv/kernel.hpp"

#include <array>
#include <functional>
#include <sstream>

#include "diffinv/reduce.hpp"

namespace diffinv {

std::string ModalGoal::str() const { return "[" + sys.str() + "] (" + post.str() + ")"; }

bool Sequent::operator==(const Sequent& o) const {
  if (antecedent.size() != o.antecedent.size() || succedent.size() != o.succedent.size())
    return false;
  for (std::size_t i = 0; i < antecedent.size(); ++i)
    if (!(antecedent[i] == o.antecedent[i])) return false;
  for (std::size_t i = 0; i < succedent.size(); ++i)
    if (!(succedent[i] == o.succedent[i])) return false;
  if (modal.has_value() != o.modal.has_value()) return false;
  if (modal && !(*modal == *o.modal)) return false;
  if (modal_antecedent.has_value() != o.modal_antecedent.has_value()) return false;
  if (modal_antecedent && !(*modal_antecedent == *o.modal_antecedent)) return false;
  return true;
}

std::string Sequent::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& f : antecedent) {
    if (!first) os << ", ";
    first = false;
    os << f.str();
  }
  if (modal_antecedent) {
    if (!first) os << ", ";
    first = false;
    os << modal_antecedent->str();
  }
  os << " |- ";
  first = true;
  for (const auto& f : succedent) {
    if (!first) os << ", ";
    first = false;
    os << f.str();
  }
  if (modal) {
    if (!first) os << ", ";
    os << modal->str();
  }
  return os.str();
}

std::string rule_name(RuleId id) {
  switch (id) {
    case RuleId::Di: return "di";
    case RuleId::DiOpen: return "di-open";
    case RuleId::Dw: return "dw";
    case RuleId::Dc: return "dc";
    case RuleId::Da: return "da";
    case RuleId::Variation: return "variation";
    case RuleId::Gen: return "gen";
    case RuleId::Generalize: return "generalize";
    case RuleId::UseReduction: return "use-reduction";
    case RuleId::AndR: return "and-r";
    case RuleId::AndL: return "and-l";
    case RuleId::OrR: return "or-r";
    case RuleId::OrL: return "or-l";
    case RuleId::Cut: return "cut";
    case RuleId::ArithLeaf: return "arith";
    case RuleId::EquivPattern: return "equiv-pattern";
  }
  return "?";
}

namespace {

const ModalGoal& modal_invariant_goal(const Sequent& s, const char* rule) {
  if (!s.modal || s.modal_antecedent || !s.succedent.empty())
    throw ShapeMismatch(std::string(rule) + " expects a single modal succedent");
  if (s.antecedent.size() != 1)
    throw ShapeMismatch(std::string(rule) + " expects exactly one antecedent formula");
  if (!(s.antecedent[0] == s.modal->post))
    throw ShapeMismatch(std::string(rule) + " expects precondition and postcondition to coincide");
  return *s.modal;
}

std::vector<Formula> domain_list(const OdeSystem& sys) {
  std::vector<Formula> l;
  if (sys.domain) l.push_back(*sys.domain);
  return l;
}

bool occurs_in_system(VarId v, const OdeSystem& sys) {
  for (const auto& [var, rhs] : sys.equations)
    if (var == v || rhs.variables().count(v)) return true;
  return sys.domain && sys.domain->variables().count(v);
}

Formula substitute_formula(const Formula& f, VarId v, const Polynomial& repl) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return Formula::atom({f.as_atom().poly.substitute(v, repl), f.as_atom().rel});
    case Formula::Kind::And:
      return Formula::conj(substitute_formula(f.lhs(), v, repl), substitute_formula(f.rhs(), v, repl));
    case Formula::Kind::Or:
      return Formula::disj(substitute_formula(f.lhs(), v, repl), substitute_formula(f.rhs(), v, repl));
  }
  return f;
}

/// phi == p > 0 and psi == p*y^2 = 1, up to sign of the equation.
bool existence_pattern_matches(const Formula& phi, const Formula& psi, VarId y) {
  if (phi.kind() != Formula::Kind::Atom || psi.kind() != Formula::Kind::Atom) return false;
  const Atom& pa = phi.as_atom();
  const Atom& qa = psi.as_atom();
  if (pa.rel != Rel::Gt || qa.rel != Rel::Eq) return false;
  Polynomial expected = pa.poly * Polynomial::variable(y).pow(2) - Polynomial(Rational(1));
  return qa.poly == expected || qa.poly == -expected;
}

}  // namespace

Sequent apply_di(const Sequent& goal, const KernelConfig& cfg) {
  const ModalGoal& m = modal_invariant_goal(goal, "differential induction");
  return Sequent::arith(domain_list(m.sys), {derive_formula(m.post, m.sys, cfg.derive_mode)});
}

Sequent apply_di_open(const Sequent& goal, const KernelConfig& cfg) {
  const ModalGoal& m = modal_invariant_goal(goal, "open differential induction");
  if (!is_open(m.post)) throw NotOpen();
  std::vector<Formula> ante = domain_list(m.sys);
  ante.push_back(m.post);  // sound only because the invariant is open
  return Sequent::arith(std::move(ante), {derive_formula(m.post, m.sys, cfg.derive_mode)});
}

Sequent apply_dw(const Sequent& goal) {
  if (!goal.modal || goal.modal_antecedent || !goal.succedent.empty())
    throw ShapeMismatch("differential weakening expects a single modal succedent");
  return Sequent::arith(domain_list(goal.modal->sys), {goal.modal->post});
}

std::pair<Sequent, Sequent> apply_dc(const Sequent& goal, const Formula& c) {
  const ModalGoal& m = modal_invariant_goal(goal, "differential cut");
  Sequent left = Sequent::goal(goal.antecedent[0], {m.sys, c});
  Sequent right = Sequent::goal(goal.antecedent[0], {m.sys.with_domain_and(c), m.post});
  return {std::move(left), std::move(right)};
}

DaApplication apply_da(const Sequent& goal, VarId y, const Polynomial& theta_y, const Formula& psi,
                       const std::optional<Polynomial>& witness, bool assume_global) {
  const ModalGoal& m = modal_invariant_goal(goal, "differential auxiliaries");
  const Formula& phi = m.post;
  if (phi.variables().count(y) || occurs_in_system(y, m.sys))
    throw NotFresh(VarTable::instance().name(y));
  if (theta_y.total_degree() > 1 && !assume_global) throw GlobalSolutionUnverified();

  DaApplication app;
  if (witness) {
    // psi |- phi, and phi |- psi[y := w]: together these discharge
    // phi <-> exists y psi without quantifier reasoning
    app.equivalence_premises.push_back(make_arith_leaf(Sequent::arith({psi}, {phi})));
    app.equivalence_premises.push_back(
        make_arith_leaf(Sequent::arith({phi}, {substitute_formula(psi, y, *witness)})));
  } else if (existence_pattern_matches(phi, psi, y)) {
    ProofNode leaf;
    leaf.conclusion = Sequent::arith({phi}, {psi});
    leaf.rule.id = RuleId::EquivPattern;
    leaf.rule.aux_var = y;
    app.equivalence_premises.push_back(std::move(leaf));
    // the reciprocal-square direction psi |- phi is still checked by arith
    app.equivalence_premises.push_back(make_arith_leaf(Sequent::arith({psi}, {phi})));
  } else {
    throw KernelError(
        "differential auxiliaries: no existence witness given and the built-in "
        "reciprocal-square pattern does not apply");
  }
  app.modal_premise = Sequent::goal(psi, {m.sys.extended(y, theta_y), psi});
  return app;
}

std::array<Sequent, 3> apply_variation(const Problem& problem, const Formula& f) {
  return {Sequent::arith({problem.pre}, {f}),
          Sequent::goal(f, {problem.sys, f}),
          Sequent::arith({f}, {problem.post})};
}

Sequent apply_gen(const Sequent& goal) {
  if (!goal.modal || !goal.modal_antecedent || !goal.antecedent.empty() || !goal.succedent.empty())
    throw ShapeMismatch("generalization expects modal formulas on both sides");
  if (!(goal.modal_antecedent->sys == goal.modal->sys)) throw ModalMismatch();
  return Sequent::arith({goal.modal_antecedent->post}, {goal.modal->post});
}

std::pair<Sequent, Sequent> apply_generalize(const Sequent& goal, const Formula& g) {
  if (!goal.modal || goal.modal_antecedent || !goal.succedent.empty())
    throw ShapeMismatch("generalize expects a single modal succedent");
  Sequent strengthened = goal;
  strengthened.modal = ModalGoal{goal.modal->sys, g};
  Sequent side = Sequent::arith({g}, {goal.modal->post});
  return {std::move(strengthened), std::move(side)};
}

std::vector<Sequent> apply_propositional(const Sequent& goal, RuleId rule, std::size_t index) {
  auto split = [&](const std::vector<Formula>& side, const char* what) -> const Formula& {
    if (index >= side.size()) throw ShapeMismatch(std::string("no ") + what + " formula at index");
    return side[index];
  };
  switch (rule) {
    case RuleId::AndR: {
      const Formula& f = split(goal.succedent, "succedent");
      if (f.kind() != Formula::Kind::And) throw ShapeMismatch("and-r expects a conjunction");
      Sequent a = goal, b = goal;
      a.succedent[index] = f.lhs();
      b.succedent[index] = f.rhs();
      return {a, b};
    }
    case RuleId::AndL: {
      const Formula& f = split(goal.antecedent, "antecedent");
      if (f.kind() != Formula::Kind::And) throw ShapeMismatch("and-l expects a conjunction");
      Sequent a = goal;
      a.antecedent[index] = f.lhs();
      a.antecedent.insert(a.antecedent.begin() + static_cast<long>(index) + 1, f.rhs());
      return {a};
    }
    case RuleId::OrR: {
      const Formula& f = split(goal.succedent, "succedent");
      if (f.kind() != Formula::Kind::Or) throw ShapeMismatch("or-r expects a disjunction");
      Sequent a = goal;
      a.succedent[index] = f.lhs();
      a.succedent.insert(a.succedent.begin() + static_cast<long>(index) + 1, f.rhs());
      return {a};
    }
    case RuleId::OrL: {
      const Formula& f = split(goal.antecedent, "antecedent");
      if (f.kind() != Formula::Kind::Or) throw ShapeMismatch("or-l expects a disjunction");
      Sequent a = goal, b = goal;
      a.antecedent[index] = f.lhs();
      b.antecedent[index] = f.rhs();
      return {a, b};
    }
    default:
      // negation and implication never survive ingestion, so their rules have
      // no principal formula to act on
      throw ShapeMismatch("unsupported propositional rule on normalized formulas");
  }
}

std::pair<Sequent, Sequent> apply_cut(const Sequent& goal, const Formula& phi) {
  Sequent with_succ = goal;
  with_succ.succedent.insert(with_succ.succedent.begin(), phi);
  Sequent with_ante = goal;
  with_ante.antecedent.push_back(phi);
  return {std::move(with_succ), std::move(with_ante)};
}

Verdict close_by_arith(const Sequent& leaf, const DecideOptions& opts) {
  if (!leaf.is_arith()) throw ShapeMismatch("arithmetic closure on a modal sequent");
  for (const auto& a : leaf.antecedent)
    for (const auto& s : leaf.succedent)
      if (a == s) return Verdict::make_valid(Cert::Propositional);  // axiom
  Formula goal_formula = Formula::falsity();
  if (!leaf.succedent.empty()) {
    goal_formula = leaf.succedent[0];
    for (std::size_t i = 1; i < leaf.succedent.size(); ++i)
      goal_formula = Formula::disj(goal_formula, leaf.succedent[i]);
  }
  return decide(leaf.antecedent, goal_formula, opts);
}

ProofNode make_arith_leaf(Sequent s) {
  ProofNode n;
  n.conclusion = std::move(s);
  n.rule.id = RuleId::ArithLeaf;
  return n;
}

ProofNode build_invariant_proof(const Problem& problem, const Formula& f, const KernelConfig& cfg,
                                bool open_induction) {
  Sequent induction_goal = Sequent::goal(f, {problem.sys, f});
  ProofNode induction;
  induction.conclusion = induction_goal;
  induction.rule.id = open_induction ? RuleId::DiOpen : RuleId::Di;
  induction.premises.push_back(make_arith_leaf(
      open_induction ? apply_di_open(induction_goal, cfg) : apply_di(induction_goal, cfg)));

  if (f == problem.pre && f == problem.post) return induction;

  ProofNode root;
  root.conclusion = Sequent::goal(problem.pre, {problem.sys, problem.post});
  root.rule.id = RuleId::Variation;
  root.rule.formula = f;
  auto premises = apply_variation(problem, f);
  root.premises.push_back(make_arith_leaf(premises[0]));
  root.premises.push_back(std::move(induction));
  root.premises.push_back(make_arith_leaf(premises[2]));
  return root;
}

namespace {

struct TreeChecker {
  const KernelConfig& cfg;
  CheckResult result;

  void merge_leaf(const std::vector<std::size_t>& path, const Verdict& v, bool axiom, bool pattern) {
    result.leaves.push_back({path, v, axiom, pattern});
    if (v.invalid() && result.status != Verdict::Kind::Invalid) {
      result.status = Verdict::Kind::Invalid;
      result.witness = v.witness;
      result.offending_path = path;
    } else if (v.unknown() && result.status == Verdict::Kind::Valid) {
      result.status = Verdict::Kind::Unknown;
      result.offending_path = path;
    }
  }

  void expect(bool ok, const std::string& msg) {
    if (!ok) throw MalformedTree(msg);
  }

  void expect_premises(const ProofNode& node, const std::vector<Sequent>& expected) {
    expect(node.premises.size() == expected.size(),
           rule_name(node.rule.id) + " has the wrong number of premises");
    for (std::size_t i = 0; i < expected.size(); ++i)
      expect(node.premises[i].conclusion == expected[i],
             rule_name(node.rule.id) + " premise " + std::to_string(i) +
                 " does not regenerate from the rule instance");
  }

  const Formula& required_formula(const ProofNode& node) {
    expect(node.rule.formula.has_value(), rule_name(node.rule.id) + " is missing its formula");
    return *node.rule.formula;
  }

  void check(const ProofNode& node, std::vector<std::size_t>& path, int cut_depth) {
    switch (node.rule.id) {
      case RuleId::ArithLeaf: {
        expect(node.premises.empty(), "arithmetic leaf with premises");
        expect(node.conclusion.is_arith(), "arithmetic leaf with a modal sequent");
        bool axiom = false;
        for (const auto& a : node.conclusion.antecedent) {
          for (const auto& s : node.conclusion.succedent)
            if (a == s) axiom = true;
        }
        Verdict v = close_by_arith(node.conclusion, cfg.arith);
        merge_leaf(path, v, axiom, false);
        return;
      }
      case RuleId::EquivPattern: {
        expect(node.premises.empty(), "pattern leaf with premises");
        expect(node.rule.aux_var.has_value(), "pattern leaf without its variable");
        expect(node.conclusion.antecedent.size() == 1 && node.conclusion.succedent.size() == 1,
               "pattern leaf shape");
        expect(existence_pattern_matches(node.conclusion.antecedent[0],
                                         node.conclusion.succedent[0], *node.rule.aux_var),
               "pattern leaf does not match the reciprocal-square form");
        merge_leaf(path, Verdict::make_valid(Cert::Propositional), false, true);
        return;
      }
      case RuleId::Di:
        expect_premises(node, {apply_di(node.conclusion, cfg)});
        break;
      case RuleId::DiOpen:
        expect_premises(node, {apply_di_open(node.conclusion, cfg)});
        break;
      case RuleId::Dw:
        expect_premises(node, {apply_dw(node.conclusion)});
        break;
      case RuleId::Dc: {
        auto [left, right] = apply_dc(node.conclusion, required_formula(node));
        expect_premises(node, {left, right});
        break;
      }
      case RuleId::Da: {
        expect(node.rule.aux_var && node.rule.aux_rhs && node.rule.aux_psi,
               "auxiliary rule without instantiation");
        auto app = apply_da(node.conclusion, *node.rule.aux_var, *node.rule.aux_rhs,
                            *node.rule.aux_psi, node.rule.aux_witness, node.rule.assume_global);
        std::vector<Sequent> expected;
        for (const auto& p : app.equivalence_premises) expected.push_back(p.conclusion);
        expected.push_back(app.modal_premise);
        expect_premises(node, expected);
        // the regenerated side-check kinds must also match
        for (std::size_t i = 0; i < app.equivalence_premises.size(); ++i)
          expect(node.premises[i].rule.id == app.equivalence_premises[i].rule.id,
                 "auxiliary side check closed by the wrong rule");
        break;
      }
      case RuleId::Variation: {
        const Formula& f = required_formula(node);
        expect(node.conclusion.modal.has_value() && node.conclusion.antecedent.size() == 1,
               "variation on a non-modal goal");
        Problem p{node.conclusion.modal->sys, node.conclusion.antecedent[0],
                  node.conclusion.modal->post};
        auto seqs = apply_variation(p, f);
        expect_premises(node, {seqs[0], seqs[1], seqs[2]});
        break;
      }
      case RuleId::Gen:
        expect_premises(node, {apply_gen(node.conclusion)});
        break;
      case RuleId::Generalize: {
        auto [goal, side] = apply_generalize(node.conclusion, required_formula(node));
        expect_premises(node, {goal, side});
        break;
      }
      case RuleId::UseReduction: {
        expect(node.conclusion.modal.has_value() && node.conclusion.antecedent.size() == 1,
               "use-reduction on a non-modal goal");
        auto reduced = apply_reduction(node.rule.reduction, node.conclusion.modal->post);
        expect(reduced.has_value(), "unknown reduction '" + node.rule.reduction + "'");
        Problem p{node.conclusion.modal->sys, node.conclusion.antecedent[0],
                  node.conclusion.modal->post};
        auto seqs = apply_variation(p, *reduced);
        expect_premises(node, {seqs[0], seqs[1], seqs[2]});
        break;
      }
      case RuleId::AndR:
      case RuleId::AndL:
      case RuleId::OrR:
      case RuleId::OrL:
        expect_premises(node, apply_propositional(node.conclusion, node.rule.id, node.rule.index));
        break;
      case RuleId::Cut: {
        expect(cut_depth < cfg.cut_depth_limit, "cut depth limit exceeded");
        auto [a, b] = apply_cut(node.conclusion, required_formula(node));
        expect_premises(node, {a, b});
        break;
      }
    }
    for (std::size_t i = 0; i < node.premises.size(); ++i) {
      path.push_back(i);
      check(node.premises[i], path, cut_depth + (node.rule.id == RuleId::Cut ? 1 : 0));
      path.pop_back();
    }
  }
};

}  // namespace

CheckResult check_proof(const ProofNode& tree, const KernelConfig& cfg) {
  TreeChecker checker{cfg, {}};
  checker.result.status = Verdict::Kind::Valid;
  std::vector<std::size_t> path;
  try {
    checker.check(tree, path, 0);
  } catch (const MalformedTree&) {
    throw;
  } catch (const KernelError& e) {
    throw MalformedTree(e.what());
  }
  return checker.result;
}

}  // namespace diffinv

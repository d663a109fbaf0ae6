#ifndef DIFFINV_NUMSIM_HPP
#define DIFFINV_NUMSIM_HPP

#include <cstdint>
#include <map>
#include <optional>

#include "diffinv/kernel.hpp"

namespace diffinv {

struct StepTooSmall : std::runtime_error {
  StepTooSmall() : std::runtime_error("step size too small: T/h exceeds the step cap") {}
};

/// Fixed-step trajectory. States are dense vectors indexed by VarId; symbols
/// that do not evolve keep their initial value.
struct Trajectory {
  double step = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

struct Counterexample {
  std::map<VarId, Rational> initial;  // satisfies the precondition exactly
  double exit_time = 0;
  std::map<VarId, double> exit_state;
  double margin = 0;  // how far the postcondition is violated
};

enum class Exec { Serial, Parallel };

struct IntegrateOptions {
  double overflow_guard = 1e9;
  std::size_t step_cap = 20000000;
};

/// Classical fourth-order Runge-Kutta with fixed step h over horizon T.
/// Stops early when the state norm exceeds the overflow guard.
Trajectory integrate(const OdeSystem& sys, const std::map<VarId, double>& init, double h, double T,
                     const IntegrateOptions& opts = {});

struct FalsifyOptions {
  std::size_t samples = 1000;
  double box_lo = -2.0, box_hi = 2.0;
  double h = 1e-3;
  double T = 10.0;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
  double domain_tol = 1e-6;
  double margin_tol = 1e-6;
  IntegrateOptions integrate;
};

/// Searches for a trajectory that starts in the precondition (checked
/// exactly on rational initial points; small integer points are tried before
/// random rationals), stays inside the evolution domain up to some time, and
/// violates the postcondition there by more than the margin tolerance.
/// Numeric and advisory only: results never close proofs. Deterministic for
/// a fixed seed; the parallel path returns the same counterexample as the
/// serial one (lowest sample index wins).
std::optional<Counterexample> falsify(const Problem& problem, const FalsifyOptions& opts);

/// Max over interior grid points of |centered finite difference of c along
/// the trajectory - value of the Lie derivative of c there|.
double derivation_lemma_deviation(const Polynomial& c, const OdeSystem& sys,
                                  const std::map<VarId, double>& init, double h, double T,
                                  const IntegrateOptions& opts = {});

}  // namespace diffinv

#endif  // DIFFINV_NUMSIM_HPP

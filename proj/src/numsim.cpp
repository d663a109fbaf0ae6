#include "diffinv/numsim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diffinv {

namespace {

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  long below(long m) { return static_cast<long>(next() % static_cast<std::uint64_t>(m)); }
};

struct CompiledPoly {
  struct Term {
    double coeff;
    std::vector<std::pair<VarId, std::uint32_t>> powers;
  };
  std::vector<Term> terms;

  static CompiledPoly compile(const Polynomial& p) {
    CompiledPoly c;
    for (const auto& [m, coef] : p.terms()) c.terms.push_back({coef.to_double(), m.factors()});
    return c;
  }

  double eval(const std::vector<double>& x) const {
    double total = 0;
    for (const auto& t : terms) {
      double v = t.coeff;
      for (const auto& [var, e] : t.powers) {
        double b = x[var];
        for (std::uint32_t i = 0; i < e; ++i) v *= b;
      }
      total += v;
    }
    return total;
  }
};

std::size_t dense_size(const OdeSystem& sys, std::initializer_list<const Formula*> formulas) {
  VarId max_id = 0;
  bool any = false;
  auto see = [&](VarId v) {
    max_id = std::max(max_id, v);
    any = true;
  };
  for (const auto& [v, rhs] : sys.equations) {
    see(v);
    for (VarId w : rhs.variables()) see(w);
  }
  if (sys.domain)
    for (VarId w : sys.domain->variables()) see(w);
  for (const Formula* f : formulas)
    if (f)
      for (VarId w : f->variables()) see(w);
  return any ? max_id + 1 : 0;
}

struct RungeKutta {
  std::vector<VarId> vars;
  std::vector<CompiledPoly> rhs;

  explicit RungeKutta(const OdeSystem& sys) {
    for (const auto& [v, p] : sys.equations) {
      vars.push_back(v);
      rhs.push_back(CompiledPoly::compile(p));
    }
  }

  void deriv(const std::vector<double>& x, std::vector<double>& dx) const {
    std::fill(dx.begin(), dx.end(), 0.0);
    for (std::size_t i = 0; i < vars.size(); ++i) dx[vars[i]] = rhs[i].eval(x);
  }

  void step(std::vector<double>& x, double h, std::vector<double>& k1, std::vector<double>& k2,
            std::vector<double>& k3, std::vector<double>& k4, std::vector<double>& tmp) const {
    std::size_t n = x.size();
    deriv(x, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    deriv(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    deriv(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    deriv(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
};

double inf_norm(const std::vector<double>& x) {
  double m = 0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

Trajectory run_integration(const RungeKutta& rk, std::vector<double> state, double h, double T,
                           const IntegrateOptions& opts) {
  if (h <= 0) throw std::invalid_argument("integrate: step must be positive");
  if (T < 0) throw std::invalid_argument("integrate: horizon must be nonnegative");
  double steps_needed = T / h;
  if (steps_needed > static_cast<double>(opts.step_cap)) throw StepTooSmall();
  std::size_t steps = static_cast<std::size_t>(std::llround(steps_needed));

  Trajectory traj;
  traj.step = h;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(state);

  std::size_t n = state.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t i = 1; i <= steps; ++i) {
    rk.step(state, h, k1, k2, k3, k4, tmp);
    if (inf_norm(state) > opts.overflow_guard) break;
    traj.times.push_back(static_cast<double>(i) * h);
    traj.states.push_back(state);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const OdeSystem& sys, const std::map<VarId, double>& init, double h, double T,
                     const IntegrateOptions& opts) {
  std::size_t n = dense_size(sys, {});
  for (const auto& [v, val] : init) n = std::max<std::size_t>(n, v + 1);
  std::vector<double> state(n, 0.0);
  for (const auto& [v, val] : init) state[v] = val;
  RungeKutta rk(sys);
  return run_integration(rk, std::move(state), h, T, opts);
}

namespace {

std::vector<VarId> problem_symbols(const Problem& p) {
  std::set<VarId> s;
  for (const auto& [v, rhs] : p.sys.equations) {
    s.insert(v);
    for (VarId w : rhs.variables()) s.insert(w);
  }
  if (p.sys.domain)
    for (VarId w : p.sys.domain->variables()) s.insert(w);
  for (VarId w : p.pre.variables()) s.insert(w);
  for (VarId w : p.post.variables()) s.insert(w);
  return {s.begin(), s.end()};
}

/// Deterministic initial-point generator: integer shell points inside the box
/// first, then random small-denominator rationals.
class PointSource {
 public:
  PointSource(const std::vector<VarId>& vars, const FalsifyOptions& opts)
      : vars_(vars), opts_(opts) {
    long lo = static_cast<long>(std::ceil(opts.box_lo));
    long hi = static_cast<long>(std::floor(opts.box_hi));
    if (lo <= hi && !vars.empty()) {
      long radius = std::max(std::labs(lo), std::labs(hi));
      std::vector<long> coord(vars.size());
      for (long shell = 0; shell <= radius && grid_.size() < 4096; ++shell) {
        std::fill(coord.begin(), coord.end(), -shell);
        while (true) {
          bool on_shell = shell == 0;
          bool in_box = true;
          for (long c : coord) {
            if (c == shell || c == -shell) on_shell = true;
            if (c < lo || c > hi) in_box = false;
          }
          if (on_shell && in_box) {
            grid_.push_back(coord);
            if (grid_.size() >= 4096) break;
          }
          std::size_t k = 0;
          while (k < coord.size() && coord[k] == shell) coord[k++] = -shell;
          if (k == coord.size()) break;
          ++coord[k];
        }
      }
    }
  }

  std::map<VarId, Rational> point(std::size_t index) const {
    std::map<VarId, Rational> p;
    if (index < grid_.size()) {
      for (std::size_t i = 0; i < vars_.size(); ++i) p.emplace(vars_[i], Rational(grid_[index][i]));
      return p;
    }
    SplitMix64 rng(opts_.seed * 0x9E3779B97F4A7C15ull + index + 1);
    for (VarId v : vars_) {
      long den = rng.below(16) + 1;
      long lo_num = static_cast<long>(std::ceil(opts_.box_lo * static_cast<double>(den)));
      long hi_num = static_cast<long>(std::floor(opts_.box_hi * static_cast<double>(den)));
      long num = lo_num >= hi_num ? lo_num : lo_num + rng.below(hi_num - lo_num + 1);
      p.emplace(v, Rational(num, den));
    }
    return p;
  }

 private:
  std::vector<VarId> vars_;
  const FalsifyOptions& opts_;
  std::vector<std::vector<long>> grid_;
};

std::optional<Counterexample> try_sample(const Problem& problem, const RungeKutta& rk,
                                         std::size_t dense_n, const PointSource& source,
                                         std::size_t index, const FalsifyOptions& opts) {
  std::map<VarId, Rational> init = source.point(index);
  if (!problem.pre.eval(init)) return std::nullopt;

  std::vector<double> state(dense_n, 0.0);
  for (const auto& [v, val] : init) state[v] = val.to_double();
  Trajectory traj = run_integration(rk, std::move(state), opts.h, opts.T, opts.integrate);

  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& x = traj.states[i];
    if (problem.sys.domain && problem.sys.domain->sat_margin(x) < -opts.domain_tol)
      break;  // left the evolution domain; truncate here
    double post_margin = problem.post.sat_margin(x);
    if (post_margin < -opts.margin_tol) {
      Counterexample cex;
      cex.initial = init;
      cex.exit_time = traj.times[i];
      for (VarId v : problem_symbols(problem)) cex.exit_state.emplace(v, x[v]);
      cex.margin = -post_margin;
      return cex;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Counterexample> falsify(const Problem& problem, const FalsifyOptions& opts) {
  std::vector<VarId> vars = problem_symbols(problem);
  std::size_t dense_n = vars.empty() ? 0 : static_cast<std::size_t>(vars.back()) + 1;
  RungeKutta rk(problem.sys);
  PointSource source(vars, opts);

  const std::size_t chunk = 128;
  for (std::size_t base = 0; base < opts.samples; base += chunk) {
    std::size_t end = std::min(opts.samples, base + chunk);
    std::vector<std::optional<Counterexample>> results(end - base);
    if (opts.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long long i = 0; i < static_cast<long long>(end - base); ++i)
        results[static_cast<std::size_t>(i)] =
            try_sample(problem, rk, dense_n, source, base + static_cast<std::size_t>(i), opts);
    } else {
      for (std::size_t i = 0; i < end - base; ++i)
        results[i] = try_sample(problem, rk, dense_n, source, base + i, opts);
    }
    for (auto& r : results)
      if (r) return r;  // lowest index wins regardless of thread timing
  }
  return std::nullopt;
}

double derivation_lemma_deviation(const Polynomial& c, const OdeSystem& sys,
                                  const std::map<VarId, double>& init, double h, double T,
                                  const IntegrateOptions& opts) {
  Polynomial lie = lie_derivative(c, sys);
  std::size_t n = dense_size(sys, {});
  for (const auto& [v, val] : init) n = std::max<std::size_t>(n, v + 1);
  for (VarId v : c.variables()) n = std::max<std::size_t>(n, v + 1);
  std::vector<double> state(n, 0.0);
  for (const auto& [v, val] : init) state[v] = val;
  RungeKutta rk(sys);
  Trajectory traj = run_integration(rk, std::move(state), h, T, opts);
  if (traj.states.size() < 3)
    throw std::invalid_argument("derivation_lemma_deviation: trajectory too short");

  CompiledPoly cc = CompiledPoly::compile(c);
  CompiledPoly cl = CompiledPoly::compile(lie);
  std::vector<double> values(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) values[i] = cc.eval(traj.states[i]);
  double worst = 0;
  for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
    double fd = (values[i + 1] - values[i - 1]) / (2 * h);
    double analytic = cl.eval(traj.states[i]);
    worst = std::max(worst, std::abs(fd - analytic));
  }
  return worst;
}

}  // namespace diffinv

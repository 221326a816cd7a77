#include "subcov/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "subcov/closedform.hpp"

namespace subcov::optimizer {

namespace {

constexpr double kImprovementStop = 1e-8;  // seed-count escalation
constexpr double kShiftTie = 1e-9;

double sum_sq(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]).squaredNorm();
  return s;
}

std::vector<model::Seed> to_seeds(const SdpProblem& p, const std::vector<CMatrix>& mats) {
  std::vector<model::Seed> seeds;
  seeds.reserve(mats.size());
  for (int s = 0; s < p.seed_count(); ++s) seeds.push_back({p.offset(s), HermitianMatrix(mats[s])});
  return seeds;
}

double wrap_offset(double xi, double period) {
  double r = std::fmod(xi, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIters: return "max-iterations";
    case SolverStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

// ---------------------------------------------------------------- SdpProblem

SdpProblem::SdpProblem(const ProbeState& state, const PhaseGrid& grid, const CostFunction& cost,
                       int seed_count)
    : dim_(state.dim()), grid_(grid) {
  if (seed_count < 1) throw InvalidInput("seed count must be >= 1");
  const CVector& c = state.amplitudes();
  for (int s = 0; s < seed_count; ++s) {
    const double gamma = grid.spacing() * s / seed_count;
    const auto w = model::phase_cost_weights(dim_, grid, cost, gamma);
    CMatrix x(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) x(j, k) = c(j) * std::conj(c(k)) * w[k - j + dim_ - 1];
    objective_.push_back(0.5 * (x + x.adjoint()));
  }
  for (int j = 0; j < dim_; ++j)
    for (int k = j; k < dim_; k += grid.size()) constrained_.emplace_back(j, k);
}

double SdpProblem::objective_value(const std::vector<CMatrix>& seeds) const {
  double v = 0.0;
  for (int s = 0; s < seed_count(); ++s)
    v += seeds[s].cwiseProduct(objective_[s].transpose()).sum().real();
  return v;
}

void SdpProblem::project_affine(std::vector<CMatrix>& seeds) const {
  const double inv = 1.0 / seed_count();
  for (const auto& [j, k] : constrained_) {
    cplx total = 0.0;
    for (const auto& m : seeds) total += m(j, k);
    const cplx excess = (total - (j == k ? 1.0 : 0.0)) * inv;
    for (auto& m : seeds) {
      m(j, k) -= excess;
      if (j != k) m(k, j) -= std::conj(excess);
    }
  }
}

double SdpProblem::constraint_residual(const std::vector<CMatrix>& seeds) const {
  double sq = 0.0;
  for (const auto& [j, k] : constrained_) {
    cplx total = 0.0;
    for (const auto& m : seeds) total += m(j, k);
    sq += (j == k ? 1.0 : 2.0) * std::norm(total - (j == k ? 1.0 : 0.0));
  }
  return std::sqrt(sq);
}

bool SdpProblem::restore_completeness(std::vector<CMatrix>& seeds) const {
  CMatrix total = CMatrix::Zero(dim_, dim_);
  for (const auto& m : seeds) total += m;
  CMatrix congruence = CMatrix::Zero(dim_, dim_);
  const int n = grid_.size();
  for (int r = 0; r < std::min(n, dim_); ++r) {
    std::vector<int> idx;
    for (int j = r; j < dim_; j += n) idx.push_back(j);
    const int b = static_cast<int>(idx.size());
    CMatrix block(b, b);
    for (int a = 0; a < b; ++a)
      for (int c = 0; c < b; ++c) block(a, c) = total(idx[a], idx[c]);
    const auto es = qlinalg::hermitian_eig(HermitianMatrix(block));
    if (es.eigenvalues(0) < 0.5) return false;
    RVector inv_sqrt = es.eigenvalues.cwiseSqrt().cwiseInverse();
    const CMatrix root = es.eigenvectors * inv_sqrt.cast<cplx>().asDiagonal() *
                         es.eigenvectors.adjoint();
    for (int a = 0; a < b; ++a)
      for (int c = 0; c < b; ++c) congruence(idx[a], idx[c]) = root(a, c);
  }
  for (auto& m : seeds) {
    CMatrix next = congruence * m * congruence.adjoint();
    m = 0.5 * (next + next.adjoint());
  }
  return true;
}

// ------------------------------------------------------------ cost matrix A

HermitianMatrix cost_matrix_A(const SeedMeasurement& seeds, const CostFunction& cost) {
  const int d = seeds.dim();
  CMatrix a = CMatrix::Zero(d, d);
  for (const auto& s : seeds.seeds()) {
    const auto w = model::phase_cost_weights(d, seeds.grid(), cost, s.offset);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) a(j, k) += s.element(j, k) * w[j - k + d - 1];
  }
  return HermitianMatrix(a);
}

StateSolution optimal_state_for_measurement(const HermitianMatrix& a) {
  const auto es = qlinalg::hermitian_eig(a);
  return {ProbeState::from_amplitudes(es.vector(0)), es.eigenvalues(0)};
}

// ------------------------------------------------------------- seed solver

SeedSolution optimal_seeds_for_state(const ProbeState& state, const PhaseGrid& grid,
                                     const CostFunction& cost, int seed_count,
                                     const SeedOptions& options) {
  const SdpProblem problem(state, grid, cost, seed_count);
  const int d = problem.dim();
  const int count = problem.seed_count();
  const SolverSettings& cfg = options.solver;

  // Reference points: the covariant seed phased to the state, and the same
  // seed shifted by half a grid step when θ/2 is one of the offsets.
  std::vector<std::vector<CMatrix>> references;
  const HermitianMatrix cov = model::canonical_covariant_seed(grid, model::amplitude_phases(state));
  {
    std::vector<CMatrix> ref(count, CMatrix::Zero(d, d));
    ref[0] = cov.matrix();
    references.push_back(std::move(ref));
  }
  if (count % 2 == 0) {
    std::vector<CMatrix> ref(count, CMatrix::Zero(d, d));
    ref[count / 2] = model::conjugate_by_phase(cov, grid.spacing() / 2).matrix();
    references.push_back(std::move(ref));
  }

  AdmmState local;
  AdmmState& st = options.warm != nullptr ? *options.warm : local;
  const bool warm_ok = static_cast<int>(st.z.size()) == count && st.z.front().rows() == d;
  if (!warm_ok) {
    st.z = references.front();
    st.u.assign(count, CMatrix::Zero(d, d));
    st.bases.assign(count, CMatrix());
    st.rho = cfg.rho;
  }

  std::vector<CMatrix> y(count), z_old(count);
  SolverReport report;
  report.status = SolverStatus::MaxIters;
  double rho = st.rho;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    for (int s = 0; s < count; ++s) y[s] = st.z[s] - st.u[s] - problem.objective()[s] / rho;
    problem.project_affine(y);
    z_old = st.z;
    for (int s = 0; s < count; ++s) {
      const CMatrix relaxed = cfg.relaxation * y[s] + (1.0 - cfg.relaxation) * z_old[s];
      st.z[s] = qlinalg::detail::psd_project_raw(relaxed + st.u[s], &st.bases[s]);
      st.u[s] += relaxed - st.z[s];
    }
    report.primal_residual = std::sqrt(sum_sq(y, st.z));
    report.dual_residual = rho * std::sqrt(sum_sq(st.z, z_old));
    if (report.primal_residual <= cfg.tolerance && report.dual_residual <= cfg.tolerance) {
      report.status = SolverStatus::Converged;
      ++it;
      break;
    }
    if (it % 10 == 9) {
      if (report.primal_residual > cfg.balance_ratio * report.dual_residual) {
        rho *= 2.0;
        for (auto& u : st.u) u /= 2.0;
      } else if (report.dual_residual > cfg.balance_ratio * report.primal_residual) {
        rho /= 2.0;
        for (auto& u : st.u) u *= 2.0;
      }
    }
  }
  st.rho = rho;
  report.iterations = it;

  std::vector<CMatrix> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<CMatrix> polished = st.z;
  if (problem.restore_completeness(polished)) {
    best = polished;
    best_value = problem.objective_value(polished);
  } else {
    report.status = SolverStatus::Infeasible;
  }
  auto consider = [&](const std::vector<CMatrix>& cand) {
    if (static_cast<int>(cand.size()) != count) return;
    const double v = problem.objective_value(cand);
    if (v < best_value - 1e-15) {
      best = cand;
      best_value = v;
      report.reference_won = true;
    }
  };
  for (const auto& r : references) consider(r);
  for (const auto& c : options.candidates) consider(c);

  report.objective = best_value;
  report.feasibility_residual = problem.constraint_residual(best);
  return {SeedMeasurement(grid, to_seeds(problem, best)), report};
}

// ------------------------------------------------------------------ see-saw

double StrategyResult::dominant_offset() const {
  double best = -1.0;
  double offset = 0.0;
  for (const auto& s : seeds.seeds()) {
    if (s.element.trace() > best + 1e-12) {
      best = s.element.trace();
      offset = s.offset;
    }
  }
  return offset;
}

namespace {

std::vector<ProbeState> start_states(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                     int seed_count, const SeeSawOptions& options) {
  std::vector<ProbeState> starts;
  std::mt19937_64 rng(options.rng_seed);
  for (int r = 0; r < options.restarts; ++r) {
    if (r == 0) {
      starts.push_back(ProbeState::flat(dim));
    } else if (r == 1) {
      starts.push_back(closedform::optimal_continuous_state(dim));
    } else {
      starts.push_back(ProbeState::from_amplitudes(model::random_unit_vector(dim, rng)));
    }
  }
  // States optimal for the covariant and half-shifted reference measurements
  // make the result at least as good as either reference strategy.
  starts.push_back(optimize_state_for_shift(dim, grid, cost, 0.0).state);
  if (seed_count % 2 == 0)
    starts.push_back(optimize_state_for_shift(dim, grid, cost, grid.spacing() / 2).state);
  if (grid.size() <= dim)
    starts.push_back(closedform::perfect_discrimination_strategy(dim, grid).state);
  for (const auto& s : options.extra_starts) starts.push_back(s);
  return starts;
}

}  // namespace

StrategyResult see_saw(int dim, const PhaseGrid& grid, const CostFunction& cost, int seed_count,
                       const SeeSawOptions& options) {
  if (options.restarts < 1) throw InvalidInput("see-saw needs at least one restart");
  if (seed_count < 1) throw InvalidInput("seed count must be >= 1");
  const auto starts = start_states(dim, grid, cost, seed_count, options);

  std::optional<StrategyResult> best;
  for (const auto& start : starts) {
    if (start.dim() != dim) throw InvalidInput("start state dimension mismatch");
    AdmmState warm;
    ProbeState psi = start;
    std::vector<double> trace;
    std::vector<std::string> warnings;
    std::optional<SeedSolution> current;
    double previous = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (; iterations < options.max_iterations; ++iterations) {
      SeedOptions so;
      so.solver = options.solver;
      so.warm = &warm;
      if (current) {
        std::vector<CMatrix> prev;
        for (const auto& s : current->seeds.seeds()) prev.push_back(s.element.matrix());
        so.candidates.push_back(std::move(prev));
      }
      SeedSolution sol = optimal_seeds_for_state(psi, grid, cost, seed_count, so);
      if (sol.report.status != SolverStatus::Converged && !sol.report.reference_won) {
        warnings.push_back(std::string("seed SDP ended with status ") +
                           to_string(sol.report.status));
      }
      const StateSolution next = optimal_state_for_measurement(cost_matrix_A(sol.seeds, cost));
      const double value = std::min(next.cost, sol.report.objective);
      psi = next.state;
      current = std::move(sol);
      trace.push_back(value);
      const double change = previous - value;
      previous = value;
      if (trace.size() > 1 && std::abs(change) <= options.relative_tolerance * std::abs(value) + 1e-15) {
        ++iterations;
        break;
      }
    }
    const double final_cost = trace.back();
    if (!best || final_cost < best->cost - 1e-15) {
      best = StrategyResult{psi,
                            current->seeds,
                            final_cost,
                            seed_count,
                            static_cast<int>(starts.size()),
                            iterations,
                            trace,
                            current->report,
                            warnings};
    }
  }
  return *best;
}

StrategyResult escalate_seed_count(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                   int max_seeds, const SeeSawOptions& options) {
  if (max_seeds < 1) throw InvalidInput("max seed count must be >= 1");
  StrategyResult best = see_saw(dim, grid, cost, 1, options);
  for (int s = 2; s <= max_seeds; ++s) {
    SeeSawOptions next = options;
    next.extra_starts.push_back(best.state);
    StrategyResult r = see_saw(dim, grid, cost, s, next);
    if (r.cost >= best.cost - kImprovementStop) break;
    best = std::move(r);
  }
  return best;
}

// ----------------------------------------------------------- fixed shifts

FixedShiftResult optimize_state_for_shift(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                          double shift) {
  const double xi = wrap_offset(shift, grid.spacing());
  CVector phases = CVector::Ones(dim);
  auto seed_for = [&](const CVector& ph) {
    return model::conjugate_by_phase(model::canonical_covariant_seed(grid, ph), xi);
  };
  HermitianMatrix seed = seed_for(phases);
  HermitianMatrix a = cost_matrix_A(SeedMeasurement(grid, {{xi, seed}}), cost);
  StateSolution sol = optimal_state_for_measurement(a);
  for (int it = 0; it < 100; ++it) {
    const CVector next_phases = model::amplitude_phases(sol.state);
    if ((next_phases - phases).norm() < 1e-12) break;
    const HermitianMatrix next_seed = seed_for(next_phases);
    const HermitianMatrix next_a = cost_matrix_A(SeedMeasurement(grid, {{xi, next_seed}}), cost);
    if (next_a.expectation(sol.state.amplitudes()) > sol.cost - 1e-15) break;
    const StateSolution next_sol = optimal_state_for_measurement(next_a);
    phases = next_phases;
    seed = next_seed;
    sol = next_sol;
  }
  return {sol.state, sol.cost, seed};
}

std::vector<double> uniform_shift_grid(const PhaseGrid& grid, int points) {
  if (points < 1) throw InvalidInput("shift grid needs at least one point");
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = grid.spacing() * i / points;
  return xs;
}

namespace {

// Abscissa of the vertex of the parabola through three points; NaN when the
// points do not bound a minimum.
double parabola_vertex(double x0, double f0, double x1, double f1, double x2, double f2) {
  const double p = (x1 - x0) * (f1 - f2);
  const double q = (x1 - x2) * (f1 - f0);
  const double den = p - q;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double num = (x1 - x0) * p - (x1 - x2) * q;
  return x1 - 0.5 * num / den;
}

}  // namespace

ShiftSweep sweep_shift(int dim, const PhaseGrid& grid, const CostFunction& cost,
                       const std::vector<double>& shifts) {
  if (shifts.empty()) throw InvalidInput("shift grid is empty");
  const double period = grid.spacing();
  for (double x : shifts)
    if (!(x >= 0.0 && x < period)) throw InvalidInput("shift grid must lie in [0, 2π/N)");

  ShiftSweep out;
  out.shifts = shifts;
  std::vector<ProbeState> states;
  for (double x : shifts) {
    auto r = optimize_state_for_shift(dim, grid, cost, x);
    out.costs.push_back(r.cost);
    states.push_back(r.state);
  }
  const int m = static_cast<int>(shifts.size());
  const double lowest = *std::min_element(out.costs.begin(), out.costs.end());
  int arg = 0;
  for (int i = 0; i < m; ++i) {
    if (out.costs[i] <= lowest + kShiftTie) {
      arg = i;
      break;
    }
  }
  out.best_shift = shifts[arg];
  out.best_cost = out.costs[arg];
  out.best_state = states[arg];

  if (m >= 3) {
    const int lo = (arg - 1 + m) % m;
    const int hi = (arg + 1) % m;
    const double x0 = arg == 0 ? shifts[lo] - period : shifts[lo];
    const double x2 = arg == m - 1 ? shifts[hi] + period : shifts[hi];
    const double v = parabola_vertex(x0, out.costs[lo], shifts[arg], out.costs[arg], x2,
                                     out.costs[hi]);
    if (std::isfinite(v) && v > x0 && v < x2) {
      auto r = optimize_state_for_shift(dim, grid, cost, v);
      if (r.cost < out.best_cost - kShiftTie) {
        out.best_shift = wrap_offset(v, period);
        out.best_cost = r.cost;
        out.best_state = r.state;
      }
    }
    for (int i = 0; i < m; ++i) {
      const double a = out.costs[(i - 1 + m) % m];
      const double b = out.costs[i];
      const double c = out.costs[(i + 1) % m];
      if (b <= a && b <= c && (b < a - 1e-12 || b < c - 1e-12)) out.local_minima.push_back(i);
    }
  }
  const double c0 = optimize_state_for_shift(dim, grid, cost, 0.0).cost;
  const double ch = optimize_state_for_shift(dim, grid, cost, period / 2).cost;
  out.degenerate_ends = std::abs(c0 - ch) < kShiftTie;
  return out;
}

}  // namespace subcov::optimizer

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subcov/model.hpp"

namespace subcov::optimizer {

using model::CostFunction;
using model::PhaseGrid;
using model::ProbeState;
using model::SeedMeasurement;
using qlinalg::HermitianMatrix;

enum class SolverStatus { Converged, MaxIters, Infeasible };

const char* to_string(SolverStatus s);

struct SolverSettings {
  double tolerance = 1e-8;
  int max_iterations = 50000;
  double rho = 1.0;
  double balance_ratio = 10.0;
  /// Over-relaxation factor for the affine step (1 = plain ADMM).
  double relaxation = 1.6;
};

struct SolverReport {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
  SolverStatus status = SolverStatus::Converged;
  /// Completeness residual of the returned seeds.
  double feasibility_residual = 0.0;
  /// True when a reference measurement beat the ADMM iterate.
  bool reference_won = false;
};

/// Fixed-state seed optimization:
///   minimize sum_s Tr(X_s Π_s)
///   subject to Π_s >= 0, (1/N) sum_{s,n} U_{nθ} Π_s U_{nθ}^† = 1,
/// with seeds at offsets sθ/S. The completeness map only touches entries
/// (j, k) with j ≡ k (mod N), where it fixes sum_s (Π_s)_{jk} = δ_{jk}.
class SdpProblem {
 public:
  SdpProblem(const ProbeState& state, const PhaseGrid& grid, const CostFunction& cost,
             int seed_count);

  int dim() const { return dim_; }
  int seed_count() const { return static_cast<int>(objective_.size()); }
  const PhaseGrid& grid() const { return grid_; }
  double offset(int s) const { return grid_.spacing() * s / seed_count(); }
  const std::vector<CMatrix>& objective() const { return objective_; }

  double objective_value(const std::vector<CMatrix>& seeds) const;
  /// Frobenius-nearest point of the affine completeness set.
  void project_affine(std::vector<CMatrix>& seeds) const;
  double constraint_residual(const std::vector<CMatrix>& seeds) const;
  /// Congruence by the inverse square root of each residue block of the
  /// generated sum, giving exact completeness while keeping every seed PSD.
  /// Returns false when a block is not safely positive definite.
  bool restore_completeness(std::vector<CMatrix>& seeds) const;

 private:
  int dim_;
  PhaseGrid grid_;
  std::vector<CMatrix> objective_;
  std::vector<std::pair<int, int>> constrained_;  // (j, k) with j ≡ k mod N, j <= k
};

/// Iterate state carried between consecutive solves of nearby problems.
struct AdmmState {
  std::vector<CMatrix> z;
  std::vector<CMatrix> u;
  std::vector<CMatrix> bases;
  double rho = 0.0;
};

struct SeedSolution {
  SeedMeasurement seeds;
  SolverReport report;
};

/// A = (1/N) sum_s sum_n U_{nθ} Π_s U_{nθ}^† C(nθ + γ_s)
HermitianMatrix cost_matrix_A(const SeedMeasurement& seeds, const CostFunction& cost);

struct StateSolution {
  ProbeState state;
  double cost;
};

/// Minimal eigenpair of A.
StateSolution optimal_state_for_measurement(const HermitianMatrix& a);

struct SeedOptions {
  SolverSettings solver;
  /// Feasible seeds the result must not be worse than (same count S).
  std::vector<std::vector<CMatrix>> candidates;
  /// Warm start; updated in place when given.
  AdmmState* warm = nullptr;
};

/// Solves the fixed-state SDP by two-block ADMM, restores exact completeness
/// and returns the best of the ADMM point, the covariant and (for even S)
/// half-shifted reference seeds, and any supplied candidates.
SeedSolution optimal_seeds_for_state(const ProbeState& state, const PhaseGrid& grid,
                                     const CostFunction& cost, int seed_count,
                                     const SeedOptions& options = {});

struct SeeSawOptions {
  /// Number of generic starts taken from {|e>, continuous optimum, random...}.
  int restarts = 5;
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  std::uint64_t rng_seed = 0x5EED;
  SolverSettings solver;
  /// Extra start states (tried after the generic ones).
  std::vector<ProbeState> extra_starts;
};

struct StrategyResult {
  ProbeState state;
  SeedMeasurement seeds;
  double cost = 0.0;
  int seed_count = 1;
  int restarts_used = 0;
  int iterations = 0;
  std::vector<double> cost_trace;
  SolverReport last_report;
  std::vector<std::string> warnings;

  /// Offset of the seed carrying the largest trace.
  double dominant_offset() const;
};

/// Alternates the seed SDP and the eigenvector state update from several
/// start states and returns the best run.
StrategyResult see_saw(int dim, const PhaseGrid& grid, const CostFunction& cost, int seed_count,
                       const SeeSawOptions& options = {});

/// see_saw for S = 1, 2, ... until the cost stops dropping by 1e-8 or
/// S = max_seeds.
StrategyResult escalate_seed_count(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                   int max_seeds, const SeeSawOptions& options = {});

/// State-optimized strategy for the fixed seed family U_ξ Π U_ξ^† at offset ξ,
/// where Π is the canonical covariant seed phased to the current state.
/// Alternates eigenvector updates and re-phasing until the cost settles.
struct FixedShiftResult {
  ProbeState state;
  double cost;
  HermitianMatrix seed;
};

FixedShiftResult optimize_state_for_shift(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                          double shift);

struct ShiftSweep {
  std::vector<double> shifts;
  std::vector<double> costs;
  double best_shift = 0.0;
  double best_cost = 0.0;
  ProbeState best_state = ProbeState::flat(1);
  /// Cost at ξ = 0 and ξ = θ/2 agree within 1e-9.
  bool degenerate_ends = false;
  /// Grid indices of local minima of the (periodic) cost curve.
  std::vector<int> local_minima;
};

/// Uniform grid of `points` shifts on [0, θ).
std::vector<double> uniform_shift_grid(const PhaseGrid& grid, int points);

/// Evaluates optimize_state_for_shift across the grid, refines the discrete
/// argmin with a parabola, and breaks ties (1e-9) toward the smaller shift.
ShiftSweep sweep_shift(int dim, const PhaseGrid& grid, const CostFunction& cost,
                       const std::vector<double>& shifts);

}  // namespace subcov::optimizer

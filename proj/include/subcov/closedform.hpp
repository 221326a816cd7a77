#pragma once

#include <vector>

#include "subcov/model.hpp"

namespace subcov::closedform {

using model::ProbeState;
using qlinalg::HermitianMatrix;

/// c_k = sqrt(2/(D+1)) sin((k+1)π/(D+1)), optimal for 4sin²(φ/2) in the
/// continuous limit.
ProbeState optimal_continuous_state(int dim);

/// 2[1 - cos(π/(D+1))]
double continuous_min_cost(int dim);

struct CovariantStrategy {
  ProbeState state;
  HermitianMatrix seed;
};

/// Zero-cost strategy for N <= D: flat state on the first N levels and the
/// canonical covariant seed, which resolves the identity on the full space.
CovariantStrategy perfect_discrimination_strategy(int dim, const model::PhaseGrid& grid);

/// Π_n = (1/N) ρ^{-1/2}|ψ_n><ψ_n|ρ^{-1/2} with estimate 2πn/N, where
/// ρ = (1/N) sum |ψ_n><ψ_n| is inverted on its support (cutoff 1e-12). When
/// the states do not span the space, the projector on the complement is
/// appended as one more element with estimate 0.
model::ExplicitMeasurement square_root_measurement(const std::vector<CVector>& states);

/// 0 for N <= D, else 1 - D/N.
double discrimination_cost_floor(int dim, int n);

/// The continuous-limit step-cost operator:
/// B_jj = 1 - σ/2π, B_jk = -sin(σ(j-k)/2) / (π(j-k)).
class DpssMatrix {
 public:
  DpssMatrix(int dim, double width);

  int dim() const { return b_.dim(); }
  double width() const { return width_; }
  const HermitianMatrix& matrix() const { return b_; }

 private:
  double width_;
  HermitianMatrix b_;
};

DpssMatrix dpss_matrix(int dim, double width);

struct ContinuousStepResult {
  double cost;
  ProbeState state;  // minimal eigenvector of B, signed so that sum c_k > 0
};

ContinuousStepResult continuous_step_cost(int dim, double width);

}  // namespace subcov::closedform

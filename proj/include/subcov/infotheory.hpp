#pragma once

#include <vector>

#include "subcov/model.hpp"

namespace subcov::info {

using model::ExplicitMeasurement;
using model::PhaseGrid;
using model::ProbeState;

/// Joint distribution of sent phase n (rows, prior 1/N) and outcome m.
class JointDistribution {
 public:
  /// Entries down to -1e-15 are clipped to 0; the total must be 1 within 1e-10.
  explicit JointDistribution(RMatrix p);

  int rows() const { return static_cast<int>(p_.rows()); }
  int cols() const { return static_cast<int>(p_.cols()); }
  const RMatrix& matrix() const { return p_; }
  double operator()(int n, int m) const { return p_(n, m); }

 private:
  RMatrix p_;
};

/// Shifted-covariant outcome family Π_m = (D/K) U_{mw+ξ}|e><e|U_{mw+ξ}^†,
/// w = 2π/K, which resolves the identity for every K >= D. With K = N this is
/// the N-outcome shifted-covariant POVM; large K samples the continuous one.
JointDistribution joint_distribution(const ProbeState& state, const PhaseGrid& grid, double shift,
                                     int bins);

/// p_nm = (1/N) <φ_n|Π_m|φ_n>
JointDistribution joint_distribution(const ProbeState& state, const PhaseGrid& grid,
                                     const ExplicitMeasurement& meas);

/// H(n) + H(m) - H(n, m) in bits.
double mutual_information(const JointDistribution& p);

/// S((1/N) sum_n |φ_n><φ_n|) in bits.
double holevo_bound(const ProbeState& state, const PhaseGrid& grid);

/// Sums outcome columns pairwise (2m, 2m+1). Needs an even column count.
JointDistribution merge_adjacent_bins(const JointDistribution& p);

/// Projective measurement onto the orthogonal encoded states of the flat
/// state on the first N levels (N <= D), completed on the remaining levels.
ExplicitMeasurement orthogonal_basis_measurement(int dim, const PhaseGrid& grid);

struct ShiftInfo {
  double best_shift = 0.0;
  double best_info = 0.0;
  std::vector<double> shifts;
  std::vector<double> infos;
};

/// Maximizes I over the shift grid (ties within 1e-12 go to the smaller
/// shift) and refines the argmax with a parabola through its neighbours.
ShiftInfo optimize_shift_mi(const ProbeState& state, const PhaseGrid& grid, int bins,
                            const std::vector<double>& shifts);

}  // namespace subcov::info

#include "subcov/closedform.hpp"

#include <cmath>

namespace subcov::closedform {

ProbeState optimal_continuous_state(int dim) {
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  CVector c(dim);
  const double pref = std::sqrt(2.0 / (dim + 1));
  for (int k = 0; k < dim; ++k) c(k) = pref * std::sin((k + 1) * kPi / (dim + 1));
  return ProbeState::from_amplitudes(c);
}

double continuous_min_cost(int dim) {
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  return 2.0 * (1.0 - std::cos(kPi / (dim + 1)));
}

CovariantStrategy perfect_discrimination_strategy(int dim, const model::PhaseGrid& grid) {
  const int n = grid.size();
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  if (n > dim) throw InvalidInput("perfect discrimination requires N <= D");
  CVector c = CVector::Zero(dim);
  c.head(n).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return {ProbeState::from_amplitudes(c), model::canonical_covariant_seed(grid, dim)};
}

model::ExplicitMeasurement square_root_measurement(const std::vector<CVector>& states) {
  if (states.empty()) throw InvalidInput("square-root measurement needs at least one state");
  const int dim = static_cast<int>(states.front().size());
  const int n = static_cast<int>(states.size());
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& s : states) {
    if (s.size() != dim) throw InvalidInput("state dimensions differ");
    rho += s * s.adjoint();
  }
  rho /= static_cast<double>(n);

  const auto es = qlinalg::hermitian_eig(HermitianMatrix(rho));
  constexpr double kCutoff = 1e-12;
  RVector inv_sqrt(dim);
  RVector support(dim);
  for (int i = 0; i < dim; ++i) {
    const double l = es.eigenvalues(i);
    inv_sqrt(i) = l > kCutoff ? 1.0 / std::sqrt(l) : 0.0;
    support(i) = l > kCutoff ? 1.0 : 0.0;
  }
  const CMatrix& v = es.eigenvectors;
  const CMatrix r = v * inv_sqrt.cast<cplx>().asDiagonal() * v.adjoint();

  std::vector<model::Outcome> outs;
  for (int i = 0; i < n; ++i) {
    const CVector w = r * states[i];
    outs.push_back({HermitianMatrix::projector(w, 1.0 / n), kTwoPi * i / n});
  }
  if (support.sum() < dim) {
    const CMatrix complement =
        v * (RVector::Ones(dim) - support).cast<cplx>().asDiagonal() * v.adjoint();
    outs.push_back({HermitianMatrix(complement), 0.0});
  }
  return model::ExplicitMeasurement(std::move(outs));
}

double discrimination_cost_floor(int dim, int n) {
  if (dim < 1 || n < 1) throw InvalidInput("D and N must be >= 1");
  return n <= dim ? 0.0 : 1.0 - static_cast<double>(dim) / n;
}

DpssMatrix::DpssMatrix(int dim, double width) : width_(width) {
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  if (!std::isfinite(width) || width <= 0.0 || width > kTwoPi)
    throw InvalidInput("step width must lie in (0, 2π]");
  CMatrix b(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      if (j == k) {
        b(j, k) = 1.0 - width / kTwoPi;
      } else {
        const double l = j - k;
        b(j, k) = -std::sin(width * l / 2.0) / (kPi * l);
      }
    }
  }
  b_ = HermitianMatrix(b);
}

DpssMatrix dpss_matrix(int dim, double width) { return DpssMatrix(dim, width); }

ContinuousStepResult continuous_step_cost(int dim, double width) {
  const DpssMatrix b(dim, width);
  const auto es = qlinalg::hermitian_eig(b.matrix());
  CVector c = es.vector(0);
  // Real eigenvector, signed so the amplitudes sum to a positive number.
  if (c.sum().real() < 0.0) c = -c;
  for (auto& x : c) x = x.real();
  return {es.eigenvalues(0), ProbeState::from_amplitudes(c)};
}

}  // namespace subcov::closedform

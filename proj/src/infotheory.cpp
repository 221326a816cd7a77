#include "subcov/infotheory.hpp"

#include <cmath>
#include <limits>

#include "subcov/closedform.hpp"

namespace subcov::info {

namespace {

constexpr double kTie = 1e-12;

double entropy(const RVector& v) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) h += qlinalg::entropy_term(v(i));
  return h;
}

double wrap_shift(double xi, double period) {
  double r = std::fmod(xi, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

JointDistribution::JointDistribution(RMatrix p) : p_(std::move(p)) {
  if (p_.size() == 0) throw InvalidInput("joint distribution is empty");
  if (!p_.allFinite()) throw InvalidInput("joint distribution has non-finite entries");
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    double& x = p_.data()[i];
    if (x < -1e-15) throw InvalidInput("joint distribution has negative entries");
    if (x < 0.0) x = 0.0;
  }
  if (std::abs(p_.sum() - 1.0) > 1e-10) throw InvalidInput("joint distribution must sum to 1");
}

JointDistribution joint_distribution(const ProbeState& state, const PhaseGrid& grid, double shift,
                                     int bins) {
  const int d = state.dim();
  const int n = grid.size();
  if (bins < 2) throw InvalidInput("need at least 2 outcome bins");
  if (bins < d) throw IncompleteMeasurement("outcome bins must be >= dimension for completeness");
  // amplitude(n, m) = sum_k c_k e^{ik nθ} e^{-ik(mw + ξ)}
  CMatrix sent(n, d);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < d; ++k) sent(r, k) = state[k] * std::polar(1.0, k * grid.phase(r));
  const double w = kTwoPi / bins;
  CMatrix read(d, bins);
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < bins; ++m) read(k, m) = std::polar(1.0, -k * (m * w + shift));
  const CMatrix amp = sent * read;
  RMatrix p = amp.cwiseAbs2() / (static_cast<double>(n) * bins);
  return JointDistribution(std::move(p));
}

JointDistribution joint_distribution(const ProbeState& state, const PhaseGrid& grid,
                                     const ExplicitMeasurement& meas) {
  if (meas.dim() != state.dim()) throw InvalidInput("measurement dimension mismatch");
  const int n = grid.size();
  RMatrix p(n, meas.size());
  for (int r = 0; r < n; ++r) {
    const CVector v = model::encode(state, grid.phase(r));
    for (int m = 0; m < meas.size(); ++m)
      p(r, m) = meas.outcomes()[m].element.expectation(v) / n;
  }
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p.data()[i] < 0.0 && p.data()[i] > -1e-15) p.data()[i] = 0.0;
  return JointDistribution(std::move(p));
}

double mutual_information(const JointDistribution& p) {
  const RMatrix& m = p.matrix();
  const RVector rows = m.rowwise().sum();
  const RVector cols = m.colwise().sum().transpose();
  double joint = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) joint += qlinalg::entropy_term(m.data()[i]);
  return std::max(0.0, entropy(rows) + entropy(cols) - joint);
}

double holevo_bound(const ProbeState& state, const PhaseGrid& grid) {
  const int d = state.dim();
  const int n = grid.size();
  CMatrix rho = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = j % n; k < d; k += n) rho(j, k) = state[j] * std::conj(state[k]);
  return qlinalg::von_neumann_entropy(qlinalg::HermitianMatrix(rho));
}

JointDistribution merge_adjacent_bins(const JointDistribution& p) {
  if (p.cols() % 2 != 0) throw InvalidInput("bin merge needs an even number of bins");
  RMatrix q(p.rows(), p.cols() / 2);
  for (int m = 0; m < q.cols(); ++m) q.col(m) = p.matrix().col(2 * m) + p.matrix().col(2 * m + 1);
  return JointDistribution(std::move(q));
}

ExplicitMeasurement orthogonal_basis_measurement(int dim, const PhaseGrid& grid) {
  const auto strategy = closedform::perfect_discrimination_strategy(dim, grid);
  std::vector<CVector> states;
  for (int r = 0; r < grid.size(); ++r) states.push_back(model::encode(strategy.state, grid.phase(r)));
  return closedform::square_root_measurement(states);
}

ShiftInfo optimize_shift_mi(const ProbeState& state, const PhaseGrid& grid, int bins,
                            const std::vector<double>& shifts) {
  if (shifts.empty()) throw InvalidInput("shift grid is empty");
  const double period = grid.spacing();
  for (double x : shifts)
    if (!(x >= 0.0 && x < period)) throw InvalidInput("shift grid must lie in [0, 2π/N)");
  auto info_at = [&](double xi) {
    return mutual_information(joint_distribution(state, grid, xi, bins));
  };

  ShiftInfo out;
  out.shifts = shifts;
  for (double x : shifts) out.infos.push_back(info_at(x));
  const int m = static_cast<int>(shifts.size());
  int arg = 0;
  for (int i = 1; i < m; ++i) {
    if (out.infos[i] > out.infos[arg] + kTie ||
        (std::abs(out.infos[i] - out.infos[arg]) <= kTie && shifts[i] < shifts[arg]))
      arg = i;
  }
  out.best_shift = shifts[arg];
  out.best_info = out.infos[arg];

  if (m >= 3) {
    const int lo = (arg - 1 + m) % m;
    const int hi = (arg + 1) % m;
    const double x0 = arg == 0 ? shifts[lo] - period : shifts[lo];
    const double x1 = shifts[arg];
    const double x2 = arg == m - 1 ? shifts[hi] + period : shifts[hi];
    const double f0 = out.infos[lo];
    const double f1 = out.infos[arg];
    const double f2 = out.infos[hi];
    const double p = (x1 - x0) * (f1 - f2);
    const double q = (x1 - x2) * (f1 - f0);
    if (p != q) {
      const double v = x1 - 0.5 * ((x1 - x0) * p - (x1 - x2) * q) / (p - q);
      if (std::isfinite(v) && v > x0 && v < x2) {
        const double xi = wrap_shift(v, period);
        const double val = info_at(xi);
        if (val > out.best_info + kTie) {
          out.best_shift = xi;
          out.best_info = val;
        }
      }
    }
  }
  return out;
}

}  // namespace subcov::info

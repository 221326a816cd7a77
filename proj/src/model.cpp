#include "subcov/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subcov::model {

namespace {

constexpr double kPsdTolerance = 1e-10;
constexpr double kCompletenessTolerance = 1e-8;
// |φ| within this of width/2 counts as outside the step window.
constexpr double kStepEdgeMargin = 1e-12;

bool is_psd(const HermitianMatrix& m) {
  return qlinalg::hermitian_eig(m).eigenvalues(0) >= -kPsdTolerance;
}

}  // namespace

std::vector<cplx> phase_cost_weights(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                     double offset) {
  std::vector<cplx> w(2 * dim - 1, cplx(0.0));
  const int n_phases = grid.size();
  for (int n = 0; n < n_phases; ++n) {
    const double c = cost(grid.phase(n) + offset);
    if (c == 0.0) continue;
    const double x = grid.phase(n);
    for (int l = -(dim - 1); l <= dim - 1; ++l) w[l + dim - 1] += c * std::polar(1.0, l * x);
  }
  for (auto& v : w) v /= static_cast<double>(n_phases);
  return w;
}

// ---------------------------------------------------------------- ProbeState

ProbeState ProbeState::from_amplitudes(const CVector& amplitudes) {
  if (amplitudes.size() == 0) throw InvalidInput("probe state needs dim >= 1");
  if (!amplitudes.allFinite()) throw InvalidInput("probe state has non-finite amplitudes");
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvalidInput("probe state has zero norm");
  CVector c = amplitudes / norm;
  qlinalg::fix_gauge(c);
  return ProbeState(std::move(c));
}

ProbeState ProbeState::flat(int dim) {
  if (dim < 1) throw InvalidInput("probe state needs dim >= 1");
  return ProbeState(CVector::Constant(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)))));
}

ProbeState ProbeState::basis(int dim, int k) {
  if (dim < 1 || k < 0 || k >= dim) throw InvalidInput("basis state index out of range");
  CVector c = CVector::Zero(dim);
  c(k) = 1.0;
  return ProbeState(std::move(c));
}

// ----------------------------------------------------------------- PhaseGrid

PhaseGrid::PhaseGrid(int size) : n_(size) {
  if (size < 1) throw InvalidInput("phase grid needs N >= 1");
}

double wrap_phase(double phi) {
  double r = std::remainder(phi, kTwoPi);  // [-π, π]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// -------------------------------------------------------------- CostFunction

CostFunction CostFunction::standard() { return CostFunction(Standard{}); }

CostFunction CostFunction::step(double width) {
  if (!std::isfinite(width) || width <= 0.0 || width > kTwoPi)
    throw InvalidInput("step width must lie in (0, 2π]");
  return CostFunction(Step{width});
}

CostFunction CostFunction::fourier(std::vector<double> alphas) {
  if (alphas.empty()) throw InvalidInput("Fourier cost needs at least one coefficient");
  double sum = 0.0;
  for (double a : alphas) {
    if (!std::isfinite(a)) throw InvalidInput("Fourier coefficient is not finite");
    sum += a;
  }
  if (std::abs(sum) > 1e-12)
    throw InvalidInput("Fourier cost must vanish at zero (coefficients must sum to 0)");
  CostFunction f(Fourier{std::move(alphas)});
  constexpr int kSamples = 10000;
  for (int i = 0; i < kSamples; ++i) {
    const double phi = -kPi + kTwoPi * i / kSamples;
    if (f(phi) < -1e-9) throw InvalidInput("Fourier cost is negative somewhere on the circle");
  }
  return f;
}

double CostFunction::operator()(double phi) const {
  const double x = wrap_phase(phi);
  if (std::holds_alternative<Standard>(v_)) {
    const double s = std::sin(0.5 * x);
    return 4.0 * s * s;
  }
  if (const auto* step = std::get_if<Step>(&v_)) {
    if (step->width >= kTwoPi) return 0.0;
    return std::abs(x) < 0.5 * step->width - kStepEdgeMargin ? 0.0 : 1.0;
  }
  const auto& alphas = std::get<Fourier>(v_).alphas;
  double c = 0.0;
  for (std::size_t m = 0; m < alphas.size(); ++m) c += alphas[m] * std::cos(m * x);
  return c;
}

double CostFunction::width() const {
  if (const auto* step = std::get_if<Step>(&v_)) return step->width;
  throw InvalidInput("cost function is not a step cost");
}

const std::vector<double>& CostFunction::alphas() const {
  if (const auto* f = std::get_if<Fourier>(&v_)) return f->alphas;
  throw InvalidInput("cost function is not a Fourier cost");
}

std::string CostFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_standard()) {
    os << "standard";
  } else if (is_step()) {
    os << "step(sigma=" << width() << ")";
  } else {
    os << "fourier(";
    const auto& a = alphas();
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ")";
  }
  return os.str();
}

double cost_value(const CostFunction& cost, double phi) { return cost(phi); }

// -------------------------------------------------------------- measurements

double completeness_residual(const PhaseGrid& grid, const std::vector<Seed>& seeds) {
  const int dim = seeds.front().element.dim();
  const int n = grid.size();
  double sq = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      cplx g = 0.0;
      if ((j - k) % n == 0)
        for (const auto& s : seeds) g += s.element(j, k);
      sq += std::norm(g - (j == k ? 1.0 : 0.0));
    }
  }
  return std::sqrt(sq);
}

SeedMeasurement::SeedMeasurement(PhaseGrid grid, std::vector<Seed> seeds)
    : grid_(grid), seeds_(std::move(seeds)) {
  if (seeds_.empty()) throw InvalidInput("seed measurement needs at least one seed");
  const int dim = seeds_.front().element.dim();
  for (const auto& s : seeds_) {
    if (s.element.dim() != dim) throw InvalidInput("seed dimensions differ");
    if (!(s.offset >= 0.0 && s.offset < grid_.spacing()))
      throw InvalidInput("seed offset must lie in [0, 2π/N)");
    if (!is_psd(s.element)) throw InvalidInput("seed element is not PSD");
  }
  const double r = completeness_residual(grid_, seeds_);
  if (r > kCompletenessTolerance)
    throw IncompleteMeasurement("seeds do not generate a complete POVM (residual " +
                                std::to_string(r) + ")");
}

HermitianMatrix SeedMeasurement::generated_sum() const {
  CMatrix g = CMatrix::Zero(dim(), dim());
  for (int j = 0; j < dim(); ++j)
    for (int k = 0; k < dim(); ++k)
      if ((j - k) % grid_.size() == 0)
        for (const auto& s : seeds_) g(j, k) += s.element(j, k);
  return HermitianMatrix(g);
}

ExplicitMeasurement::ExplicitMeasurement(std::vector<Outcome> outcomes)
    : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw InvalidInput("measurement needs at least one outcome");
  const int dim = outcomes_.front().element.dim();
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& o : outcomes_) {
    if (o.element.dim() != dim) throw InvalidInput("outcome dimensions differ");
    if (!std::isfinite(o.estimate)) throw InvalidInput("estimate is not finite");
    if (!is_psd(o.element)) throw InvalidInput("measurement element is not PSD");
    sum += o.element.matrix();
  }
  const double r = (sum - CMatrix::Identity(dim, dim)).norm();
  if (r > kCompletenessTolerance)
    throw IncompleteMeasurement("measurement elements do not sum to identity (residual " +
                                std::to_string(r) + ")");
}

// ---------------------------------------------------------------- encodings

CVector encode(const CVector& v, double phi) {
  if (!std::isfinite(phi)) throw InvalidInput("phase is not finite");
  CVector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k)
    out(k) = v(k) * std::polar(1.0, static_cast<double>(k) * phi);
  return out;
}

CVector encode(const ProbeState& state, double phi) { return encode(state.amplitudes(), phi); }

HermitianMatrix conjugate_by_phase(const HermitianMatrix& m, double phi) {
  const int d = m.dim();
  CMatrix out(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out(j, k) = m(j, k) * std::polar(1.0, (j - k) * phi);
  return HermitianMatrix(out);
}

HermitianMatrix flat_seed(int dim, double shift) {
  if (dim < 1) throw InvalidInput("flat seed needs dim >= 1");
  CMatrix m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) m(j, k) = std::polar(1.0, (j - k) * shift);
  return HermitianMatrix(m);
}

CVector amplitude_phases(const ProbeState& state) {
  CVector ph(state.dim());
  for (int k = 0; k < state.dim(); ++k) {
    const double a = std::abs(state[k]);
    ph(k) = a > 0.0 ? state[k] / a : cplx(1.0);
  }
  return ph;
}

HermitianMatrix canonical_covariant_seed(const PhaseGrid& grid, const CVector& phases) {
  const int dim = static_cast<int>(phases.size());
  const int n = grid.size();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k)
      if (j / n == k / n) m(j, k) = phases(j) * std::conj(phases(k));
  return HermitianMatrix(m);
}

HermitianMatrix canonical_covariant_seed(const PhaseGrid& grid, int dim) {
  return canonical_covariant_seed(grid, CVector::Ones(dim));
}

// --------------------------------------------------------------------- costs

double average_cost_explicit(const ProbeState& state, const ExplicitMeasurement& meas,
                             const PhaseGrid& grid, const CostFunction& cost) {
  if (meas.dim() != state.dim()) throw InvalidInput("state and measurement dimensions differ");
  double total = 0.0;
  for (int n = 0; n < grid.size(); ++n) {
    const CVector phi = encode(state, grid.phase(n));
    for (const auto& o : meas.outcomes()) {
      const double c = cost(grid.phase(n) - o.estimate);
      if (c != 0.0) total += o.element.expectation(phi) * c;
    }
  }
  return total / grid.size();
}

double weight_fn(const ProbeState& state, const HermitianMatrix& seed, const PhaseGrid& grid,
                 double phi) {
  return seed.expectation(encode(state, phi)) / grid.size();
}

namespace {

void require_complete_seed(const ProbeState& state, const HermitianMatrix& seed,
                           const PhaseGrid& grid) {
  if (seed.dim() != state.dim()) throw InvalidInput("state and seed dimensions differ");
  const double r = completeness_residual(grid, {Seed{0.0, seed}});
  if (r > kCompletenessTolerance)
    throw IncompleteMeasurement("covariant seed does not generate a complete POVM");
}

}  // namespace

double covariant_cost(const ProbeState& state, const HermitianMatrix& seed, const PhaseGrid& grid,
                      const CostFunction& cost) {
  require_complete_seed(state, seed, grid);
  double total = 0.0;
  for (int n = 0; n < grid.size(); ++n) {
    const double c = cost(grid.phase(n));
    if (c != 0.0) total += seed.expectation(encode(state, grid.phase(n))) * c;
  }
  return total / grid.size();
}

double shifted_cost(const ProbeState& state, const HermitianMatrix& seed, const PhaseGrid& grid,
                    const CostFunction& cost, double shift) {
  require_complete_seed(state, seed, grid);
  double total = 0.0;
  for (int n = 0; n < grid.size(); ++n) {
    const double phi = grid.phase(n) - shift;
    const double c = cost(phi);
    if (c != 0.0) total += weight_fn(state, seed, grid, phi) * c;
  }
  return total;
}

double subcovariant_cost(const ProbeState& state, const SeedMeasurement& seeds,
                         const CostFunction& cost) {
  if (seeds.dim() != state.dim()) throw InvalidInput("state and seed dimensions differ");
  const int d = state.dim();
  const CVector& c = state.amplitudes();
  double total = 0.0;
  for (const auto& s : seeds.seeds()) {
    const auto w = phase_cost_weights(d, seeds.grid(), cost, s.offset);
    cplx acc = 0.0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) acc += std::conj(c(j)) * s.element(j, k) * w[j - k + d - 1] * c(k);
    total += acc.real();
  }
  return total;
}

// ------------------------------------------------------------- symmetrization

ExplicitMeasurement symmetrize_measurement(const ExplicitMeasurement& meas,
                                           const PhaseGrid& grid) {
  const int n_phases = grid.size();
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(n_phases) * meas.size());
  for (int n = 0; n < n_phases; ++n) {
    for (const auto& o : meas.outcomes()) {
      out.push_back(Outcome{conjugate_by_phase(o.element, grid.phase(n)) * (1.0 / n_phases),
                            o.estimate + grid.phase(n)});
    }
  }
  return ExplicitMeasurement(std::move(out));
}

ExplicitMeasurement expand(const SeedMeasurement& seeds) {
  const PhaseGrid& grid = seeds.grid();
  std::vector<Outcome> out;
  for (int n = 0; n < grid.size(); ++n)
    for (const auto& s : seeds.seeds())
      out.push_back(Outcome{conjugate_by_phase(s.element, grid.phase(n)) * (1.0 / grid.size()),
                            grid.phase(n) + s.offset});
  return ExplicitMeasurement(std::move(out));
}

double subcovariance_defect(const ExplicitMeasurement& meas, const PhaseGrid& grid) {
  const auto& outs = meas.outcomes();
  double worst = 0.0;
  for (int j = 1; j < grid.size(); ++j) {
    for (const auto& o : outs) {
      const CMatrix moved = conjugate_by_phase(o.element, grid.phase(j)).matrix();
      const double target = o.estimate + grid.phase(j);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& cand : outs) {
        if (std::abs(wrap_phase(cand.estimate - target)) > 1e-9) continue;
        best = std::min(best, (cand.element.matrix() - moved).norm());
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

// ------------------------------------------------------------------- random

CVector random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(k) = cplx(re, im);
  }
  return v / v.norm();
}

ExplicitMeasurement random_explicit_measurement(int dim, int count, std::mt19937_64& rng) {
  if (dim < 1 || count < 1) throw InvalidInput("random POVM needs dim, count >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<CMatrix> grams;
  CMatrix total = CMatrix::Zero(dim, dim);
  for (int m = 0; m < count; ++m) {
    CMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g(j, k) = cplx(re, im);
      }
    grams.push_back(g * g.adjoint());
    total += grams.back();
  }
  const HermitianMatrix inv_sqrt = qlinalg::spectral_map(
      HermitianMatrix(total), [](double x) { return 1.0 / std::sqrt(x); });
  std::vector<Outcome> outs;
  for (const auto& g : grams) {
    const double est = angle(rng);
    outs.push_back(Outcome{HermitianMatrix(inv_sqrt.matrix() * g * inv_sqrt.matrix()), est});
  }
  return ExplicitMeasurement(std::move(outs));
}

}  // namespace subcov::model

#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

#include "subcov/qlinalg.hpp"
#include "subcov/types.hpp"

namespace subcov::model {

using qlinalg::HermitianMatrix;

/// Pure probe state sum_k c_k |k>, unit norm, with the largest-magnitude
/// amplitude real and nonnegative.
class ProbeState {
 public:
  /// Normalizes and gauge-fixes `amplitudes`.
  static ProbeState from_amplitudes(const CVector& amplitudes);
  /// The flat state |e> = D^{-1/2} sum_k |k>.
  static ProbeState flat(int dim);
  static ProbeState basis(int dim, int k);

  int dim() const { return static_cast<int>(c_.size()); }
  const CVector& amplitudes() const { return c_; }
  cplx operator[](int k) const { return c_(k); }

 private:
  explicit ProbeState(CVector c) : c_(std::move(c)) {}
  CVector c_;
};

/// The N allowed phases 2πn/N.
class PhaseGrid {
 public:
  explicit PhaseGrid(int size);

  int size() const { return n_; }
  double spacing() const { return kTwoPi / n_; }
  double phase(int n) const { return spacing() * n; }

 private:
  int n_;
};

/// Wraps an angle into (-π, π].
double wrap_phase(double phi);

/// Even, 2π-periodic cost of an estimation error.
class CostFunction {
 public:
  struct Standard {};
  struct Step {
    double width;
  };
  struct Fourier {
    std::vector<double> alphas;
  };

  /// 4 sin^2(φ/2)
  static CostFunction standard();
  /// 0 inside |φ| < width/2, 1 otherwise. width in (0, 2π].
  static CostFunction step(double width);
  /// sum_m alphas[m] cos(mφ). Requires sum alphas = 0 and C >= 0.
  static CostFunction fourier(std::vector<double> alphas);

  double operator()(double phi) const;

  bool is_standard() const { return std::holds_alternative<Standard>(v_); }
  bool is_step() const { return std::holds_alternative<Step>(v_); }
  bool is_fourier() const { return std::holds_alternative<Fourier>(v_); }
  double width() const;
  const std::vector<double>& alphas() const;
  std::string describe() const;

 private:
  explicit CostFunction(std::variant<Standard, Step, Fourier> v) : v_(std::move(v)) {}
  std::variant<Standard, Step, Fourier> v_;
};

/// One generating element of a sub-covariant measurement: the operator
/// Π_γ whose U_N orbit carries estimates nθ + γ.
struct Seed {
  double offset;
  HermitianMatrix element;
};

/// Sub-covariant POVM given by its seeds. The generated measurement has
/// elements (1/N) U_{nθ} Π_γ U_{nθ}^† with estimates nθ + γ.
class SeedMeasurement {
 public:
  /// Validates PSD (1e-10) and completeness (1e-8).
  SeedMeasurement(PhaseGrid grid, std::vector<Seed> seeds);

  const PhaseGrid& grid() const { return grid_; }
  const std::vector<Seed>& seeds() const { return seeds_; }
  int count() const { return static_cast<int>(seeds_.size()); }
  int dim() const { return seeds_.front().element.dim(); }

  /// (1/N) sum_s sum_n U Π_s U^†
  HermitianMatrix generated_sum() const;

 private:
  PhaseGrid grid_;
  std::vector<Seed> seeds_;
};

/// Frobenius distance of (1/N) sum_s sum_n U Π_s U^† from the identity.
double completeness_residual(const PhaseGrid& grid, const std::vector<Seed>& seeds);

struct Outcome {
  HermitianMatrix element;
  double estimate;
};

/// Finite POVM with an estimate attached to each outcome.
class ExplicitMeasurement {
 public:
  /// Validates PSD (1e-10) and that elements sum to identity (1e-8).
  explicit ExplicitMeasurement(std::vector<Outcome> outcomes);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  int size() const { return static_cast<int>(outcomes_.size()); }
  int dim() const { return outcomes_.front().element.dim(); }

 private:
  std::vector<Outcome> outcomes_;
};

/// U_φ v: component k multiplied by e^{ikφ}.
CVector encode(const CVector& v, double phi);
CVector encode(const ProbeState& state, double phi);

/// U_φ M U_φ^†
HermitianMatrix conjugate_by_phase(const HermitianMatrix& m, double phi);

double cost_value(const CostFunction& cost, double phi);

double average_cost_explicit(const ProbeState& state, const ExplicitMeasurement& meas,
                             const PhaseGrid& grid, const CostFunction& cost);

/// σ(φ) = <φ|Π₀|φ>/N
double weight_fn(const ProbeState& state, const HermitianMatrix& seed,
                 const PhaseGrid& grid, double phi);

double covariant_cost(const ProbeState& state, const HermitianMatrix& seed,
                      const PhaseGrid& grid, const CostFunction& cost);

/// Cost of the measurement seeded by U_ξ Π₀ U_ξ^† at offset ξ, written as
/// sum_n σ(φ_n - ξ) C(φ_n - ξ).
double shifted_cost(const ProbeState& state, const HermitianMatrix& seed,
                    const PhaseGrid& grid, const CostFunction& cost, double shift);

/// w(l) = (1/N) sum_n e^{i l nθ} C(nθ + offset) for l = -(D-1)..(D-1), stored
/// at index l + D - 1. A_jk = sum_s (Π_s)_jk w_s(j - k).
std::vector<cplx> phase_cost_weights(int dim, const PhaseGrid& grid, const CostFunction& cost,
                                     double offset);

/// <φ₀|A|φ₀> with A = (1/N) sum_s sum_n U_{nθ} Π_s U_{nθ}^† C(nθ + γ_s).
double subcovariant_cost(const ProbeState& state, const SeedMeasurement& seeds,
                         const CostFunction& cost);

/// Group average over U_N: each element Π_m with estimate φ̃_m becomes N
/// elements (1/N) U_{nθ} Π_m U_{nθ}^† with estimates φ̃_m + nθ.
ExplicitMeasurement symmetrize_measurement(const ExplicitMeasurement& meas,
                                           const PhaseGrid& grid);

/// All elements of the sub-covariant POVM generated by `seeds`.
ExplicitMeasurement expand(const SeedMeasurement& seeds);

/// Max deviation of U_{jθ} Π_k U_{jθ}^† from the element whose estimate is
/// shifted by jθ, over all j and k. Elements are matched by estimate.
double subcovariance_defect(const ExplicitMeasurement& meas, const PhaseGrid& grid);

/// D U_ξ |e><e| U_ξ^†
HermitianMatrix flat_seed(int dim, double shift);

/// Covariant seed complete for any N: the index range is cut into chunks of
/// N consecutive levels, each carrying its size times the projector on the
/// flat vector over that chunk, with level k phased by `phases[k]`. For
/// N >= D this is D|ẽ><ẽ|.
HermitianMatrix canonical_covariant_seed(const PhaseGrid& grid, const CVector& phases);
HermitianMatrix canonical_covariant_seed(const PhaseGrid& grid, int dim);

/// Unit-modulus phases of the amplitudes (1 where an amplitude vanishes).
CVector amplitude_phases(const ProbeState& state);

CVector random_unit_vector(int dim, std::mt19937_64& rng);

/// Random POVM with `count` outcomes built as T^{-1/2} G_m T^{-1/2} from
/// random Gram matrices, estimates uniform in [0, 2π).
ExplicitMeasurement random_explicit_measurement(int dim, int count, std::mt19937_64& rng);

}  // namespace subcov::model

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "subcov/model.hpp"

namespace subcov::cli {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kBadArguments = 2, kIoError = 3 };

constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// "A..B" or "A".
std::pair<int, int> parse_range(const std::string& text);

model::CostFunction make_cost(const std::string& kind, double sigma,
                              const std::vector<double>& alphas);

struct CostRow {
  int n = 0;
  double covariant = 0.0;
  double shifted_half = 0.0;
  double optimal = 0.0;
  double xi_opt = 0.0;
  int seeds = 1;
  double seconds = 0.0;
};

/// Covariant and half-shifted state-optimized costs, and the best of the
/// escalated see-saw and the single-shift sweep.
CostRow cost_row(int dim, const model::PhaseGrid& grid, const model::CostFunction& cost,
                 int seeds_max, int xi_points, std::uint64_t rng_seed);

struct InfoRow {
  int n = 0;
  double covariant = 0.0;
  double best_shift = 0.0;
  double xi_star = 0.0;
  double holevo = 0.0;
};

/// N <= D: orthogonal encoding read out in its own basis. N > D: flat state
/// with the shifted-covariant POVM on `bins` outcomes (0 means N).
InfoRow info_row(int dim, const model::PhaseGrid& grid, int bins, int xi_points);

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subcov::cli

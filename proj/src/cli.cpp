#include "subcov/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "subcov/acceptance.hpp"
#include "subcov/closedform.hpp"
#include "subcov/infotheory.hpp"
#include "subcov/optimizer.hpp"
#include "subcov/parallel.hpp"
#include "subcov/svg.hpp"

namespace subcov::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  int dim = 10;
  std::string range = "2..30";
  int n = 10;
  std::string cost = "standard";
  double sigma = kPi / 10;
  std::vector<double> alphas;
  int seeds_max = 3;
  int bins = 0;
  int xi_grid = 65;
  std::string out;
  bool svg = false;
  int jobs = 0;
  std::string seed = "0x5EED";
  bool timing = false;
  bool json = false;
  std::string filter;
  bool slow = false;
};

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used, 0);
    if (used != text.size()) throw InvalidInput("bad seed");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidInput("seed must be an integer (decimal or 0x hex): " + text);
  }
}

std::string seed_text(std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(seed));
  return buf;
}

void check_dim(int dim) {
  if (dim < 1) throw InvalidInput("--dim must be >= 1");
}

int jobs_of(const Settings& s) { return s.jobs > 0 ? s.jobs : default_jobs(); }

std::string svg_path(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return out.substr(0, dot) + ".svg";
  return out + ".svg";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

void emit(const Settings& s, const std::string& text, std::ostream& out) {
  if (s.out.empty())
    out << text;
  else
    write_file(s.out, text);
}

void emit_svg(const Settings& s, const svg::Chart& chart) {
  if (!s.svg) return;
  write_file(svg_path(s.out), svg::render(chart));
}

std::vector<int> grid_sizes(const std::string& range) {
  const auto [a, b] = parse_range(range);
  std::vector<int> ns;
  for (int n = a; n <= b; ++n) ns.push_back(n);
  return ns;
}

std::string fmt(double x) { return svg::format_number(x); }

int cmd_cost_sweep(const Settings& s, std::ostream& out) {
  check_dim(s.dim);
  const auto cost = make_cost(s.cost, s.sigma, s.alphas);
  const auto ns = grid_sizes(s.range);
  if (s.svg && s.out.empty()) throw InvalidInput("--svg needs --out");
  const std::uint64_t seed = parse_seed(s.seed);
  std::vector<CostRow> rows(ns.size());
  parallel_for(static_cast<int>(ns.size()), jobs_of(s), [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    rows[i] = cost_row(s.dim, model::PhaseGrid(ns[i]), cost, s.seeds_max, s.xi_grid, seed);
    if (s.timing)
      rows[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  std::ostringstream csv;
  csv << "# subcov cost-sweep dim=" << s.dim << " cost=" << cost.describe()
      << " seeds-max=" << s.seeds_max << " xi-grid=" << s.xi_grid << " seed=" << seed_text(seed)
      << "\n";
  csv << "N,cost_covariant,cost_shifted_half,cost_optimal,xi_opt,S_opt,seconds\n";
  svg::Chart chart{"Average cost, D = " + std::to_string(s.dim), "N", "cost", {}};
  chart.series = {{"covariant", {}, {}}, {"shifted (xi = pi/N)", {}, {}}, {"optimal", {}, {}}};
  for (const auto& r : rows) {
    csv << r.n << ',' << fmt(r.covariant) << ',' << fmt(r.shifted_half) << ',' << fmt(r.optimal)
        << ',' << fmt(r.xi_opt) << ',' << r.seeds << ',' << fmt(r.seconds) << '\n';
    const double vals[] = {r.covariant, r.shifted_half, r.optimal};
    for (int k = 0; k < 3; ++k) {
      chart.series[k].x.push_back(r.n);
      chart.series[k].y.push_back(vals[k]);
    }
  }
  emit(s, csv.str(), out);
  emit_svg(s, chart);
  return kOk;
}

int cmd_optimize(const Settings& s, std::ostream& out, std::ostream& err) {
  check_dim(s.dim);
  if (s.n < 1) throw InvalidInput("--n must be >= 1");
  const auto cost = make_cost(s.cost, s.sigma, s.alphas);
  const model::PhaseGrid grid(s.n);
  optimizer::SeeSawOptions opts;
  opts.rng_seed = parse_seed(s.seed);
  const auto r = optimizer::escalate_seed_count(s.dim, grid, cost, s.seeds_max, opts);
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';

  nlohmann::ordered_json j;
  j["dim"] = s.dim;
  j["N"] = s.n;
  j["cost_function"] = cost.describe();
  j["seed"] = seed_text(opts.rng_seed);
  j["cost"] = r.cost;
  j["seed_count"] = r.seed_count;
  j["restarts"] = r.restarts_used;
  j["see_saw_iterations"] = r.iterations;
  j["cost_trace"] = r.cost_trace;
  auto& amps = j["state"] = nlohmann::ordered_json::array();
  for (int k = 0; k < r.state.dim(); ++k) amps.push_back({r.state[k].real(), r.state[k].imag()});
  auto& seeds = j["seeds"] = nlohmann::ordered_json::array();
  for (const auto& sd : r.seeds.seeds())
    seeds.push_back({{"offset", sd.offset}, {"trace", sd.element.trace()}});
  j["solver"] = {{"status", optimizer::to_string(r.last_report.status)},
                 {"iterations", r.last_report.iterations},
                 {"primal_residual", r.last_report.primal_residual},
                 {"dual_residual", r.last_report.dual_residual},
                 {"feasibility_residual", r.last_report.feasibility_residual}};
  j["warnings"] = r.warnings;

  if (s.json) {
    out << j.dump(2) << '\n';
  } else {
    out << "dim " << s.dim << ", N " << s.n << ", cost " << cost.describe() << '\n';
    out << "cost          " << fmt(r.cost) << '\n';
    out << "seed count    " << r.seed_count << '\n';
    out << "see-saw       " << r.iterations << " iterations, " << r.restarts_used << " starts\n";
    out << "solver        " << optimizer::to_string(r.last_report.status) << ", "
        << r.last_report.iterations << " iterations, primal " << fmt(r.last_report.primal_residual)
        << ", dual " << fmt(r.last_report.dual_residual) << ", completeness "
        << fmt(r.last_report.feasibility_residual) << '\n';
    out << "state\n";
    for (int k = 0; k < r.state.dim(); ++k)
      out << "  " << k << "  " << fmt(r.state[k].real()) << "  " << fmt(r.state[k].imag()) << '\n';
    out << "seeds (offset, trace)\n";
    for (const auto& sd : r.seeds.seeds())
      out << "  " << fmt(sd.offset) << "  " << fmt(sd.element.trace()) << '\n';
  }
  if (!s.out.empty()) write_file(s.out, j.dump(2) + "\n");
  return kOk;
}

int cmd_mutual_info(const Settings& s, std::ostream& out) {
  check_dim(s.dim);
  if (s.svg && s.out.empty()) throw InvalidInput("--svg needs --out");
  if (s.bins < 0) throw InvalidInput("--bins must be >= 0");
  const auto ns = grid_sizes(s.range);
  std::vector<InfoRow> rows(ns.size());
  parallel_for(static_cast<int>(ns.size()), jobs_of(s), [&](int i) {
    rows[i] = info_row(s.dim, model::PhaseGrid(ns[i]), s.bins, s.xi_grid);
  });

  std::ostringstream csv;
  csv << "# subcov mutual-info dim=" << s.dim << " bins="
      << (s.bins == 0 ? std::string("N") : std::to_string(s.bins)) << " xi-grid=" << s.xi_grid
      << " seed=" << seed_text(parse_seed(s.seed)) << "\n";
  csv << "N,I_covariant,I_best_shift,xi_star,holevo\n";
  svg::Chart chart{"Mutual information, D = " + std::to_string(s.dim), "N", "bits", {}};
  chart.series = {{"covariant", {}, {}}, {"best shift", {}, {}}, {"Holevo", {}, {}}};
  for (const auto& r : rows) {
    csv << r.n << ',' << fmt(r.covariant) << ',' << fmt(r.best_shift) << ',' << fmt(r.xi_star)
        << ',' << fmt(r.holevo) << '\n';
    const double vals[] = {r.covariant, r.best_shift, r.holevo};
    for (int k = 0; k < 3; ++k) {
      chart.series[k].x.push_back(r.n);
      chart.series[k].y.push_back(vals[k]);
    }
  }
  emit(s, csv.str(), out);
  emit_svg(s, chart);
  return kOk;
}

int cmd_dpss(const Settings& s, std::ostream& out) {
  check_dim(s.dim);
  const auto r = closedform::continuous_step_cost(s.dim, s.sigma);
  std::ostringstream csv;
  csv << "# subcov dpss dim=" << s.dim << " sigma=" << fmt(s.sigma) << " cost=" << fmt(r.cost)
      << "\n";
  csv << "k,amplitude\n";
  for (int k = 0; k < s.dim; ++k) csv << k << ',' << fmt(r.state[k].real()) << '\n';
  emit(s, csv.str(), out);
  return kOk;
}

void add_model_flags(CLI::App* app, Settings& s) {
  app->add_option("--dim", s.dim, "Hilbert space dimension D");
  app->add_option("--cost", s.cost, "standard | step | fourier");
  app->add_option("--sigma", s.sigma, "step cost window width (radians)");
  app->add_option("--alphas", s.alphas, "Fourier cost coefficients a0,a1,...")->delimiter(',');
  app->add_option("--seed", s.seed, "RNG seed");
}

}  // namespace

std::pair<int, int> parse_range(const std::string& text) {
  auto to_int = [&](const std::string& part) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(part, &used);
      if (used != part.size()) throw InvalidInput("");
      return v;
    } catch (const std::exception&) {
      throw InvalidInput("bad N range: " + text);
    }
  };
  const auto dots = text.find("..");
  int a = 0;
  int b = 0;
  if (dots == std::string::npos) {
    a = b = to_int(text);
  } else {
    a = to_int(text.substr(0, dots));
    b = to_int(text.substr(dots + 2));
  }
  if (a < 1 || b < a) throw InvalidInput("N range must satisfy 1 <= A <= B: " + text);
  return {a, b};
}

model::CostFunction make_cost(const std::string& kind, double sigma,
                              const std::vector<double>& alphas) {
  if (kind == "standard") return model::CostFunction::standard();
  if (kind == "step") return model::CostFunction::step(sigma);
  if (kind == "fourier") return model::CostFunction::fourier(alphas);
  throw InvalidInput("unknown cost function: " + kind);
}

CostRow cost_row(int dim, const model::PhaseGrid& grid, const model::CostFunction& cost,
                 int seeds_max, int xi_points, std::uint64_t rng_seed) {
  CostRow row;
  row.n = grid.size();
  row.covariant = optimizer::optimize_state_for_shift(dim, grid, cost, 0.0).cost;
  row.shifted_half = optimizer::optimize_state_for_shift(dim, grid, cost, grid.spacing() / 2).cost;
  optimizer::SeeSawOptions opts;
  opts.rng_seed = rng_seed;
  const auto best = optimizer::escalate_seed_count(dim, grid, cost, seeds_max, opts);
  const auto sweep =
      optimizer::sweep_shift(dim, grid, cost, optimizer::uniform_shift_grid(grid, xi_points));
  row.optimal = best.cost;
  row.xi_opt = best.dominant_offset();
  row.seeds = best.seed_count;
  if (sweep.best_cost < best.cost - 1e-12) {
    row.optimal = sweep.best_cost;
    row.xi_opt = sweep.best_shift;
    row.seeds = 1;
  }
  return row;
}

InfoRow info_row(int dim, const model::PhaseGrid& grid, int bins, int xi_points) {
  InfoRow row;
  row.n = grid.size();
  if (grid.size() <= dim) {
    const auto strategy = closedform::perfect_discrimination_strategy(dim, grid);
    const auto meas = info::orthogonal_basis_measurement(dim, grid);
    row.covariant = info::mutual_information(info::joint_distribution(strategy.state, grid, meas));
    row.best_shift = row.covariant;
    row.holevo = info::holevo_bound(strategy.state, grid);
    return row;
  }
  const auto state = model::ProbeState::flat(dim);
  const int k = bins == 0 ? grid.size() : bins;
  row.covariant = info::mutual_information(info::joint_distribution(state, grid, 0.0, k));
  const auto best =
      info::optimize_shift_mi(state, grid, k, optimizer::uniform_shift_grid(grid, xi_points));
  row.best_shift = best.best_info;
  row.xi_star = best.best_shift;
  row.holevo = info::holevo_bound(state, grid);
  return row;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Discrete phase estimation: covariant, shifted and sub-covariant strategies"};
  app.set_config("--config", "", "TOML config file");
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("cost-sweep", "Optimized average cost over a range of N");
  add_model_flags(sweep, s);
  sweep->add_option("--n", s.range, "N range A..B");
  sweep->add_option("--seeds-max", s.seeds_max, "largest seed count tried");
  sweep->add_option("--xi-grid", s.xi_grid, "shift grid points on [0, 2pi/N)");
  sweep->add_option("--out", s.out, "CSV output path (default stdout)");
  sweep->add_flag("--svg", s.svg, "also write an SVG chart next to --out");
  sweep->add_option("--jobs", s.jobs, "worker threads (default: logical cores)");
  sweep->add_flag("--timing", s.timing, "fill the seconds column with wall time");

  auto* optimize = app.add_subcommand("optimize", "Full see-saw optimization for one N");
  add_model_flags(optimize, s);
  optimize->add_option("--n", s.n, "number of phases N");
  optimize->add_option("--seeds-max", s.seeds_max, "largest seed count tried");
  optimize->add_option("--out", s.out, "JSON report path");
  optimize->add_flag("--json", s.json, "print the JSON report instead of text");

  auto* mi = app.add_subcommand("mutual-info", "Mutual information and Holevo bound over N");
  mi->add_option("--dim", s.dim, "Hilbert space dimension D");
  mi->add_option("--n", s.range, "N range A..B");
  mi->add_option("--bins", s.bins, "outcome bins K (0: K = N)");
  mi->add_option("--xi-grid", s.xi_grid, "shift grid points on [0, 2pi/N)");
  mi->add_option("--out", s.out, "CSV output path (default stdout)");
  mi->add_flag("--svg", s.svg, "also write an SVG chart next to --out");
  mi->add_option("--jobs", s.jobs, "worker threads (default: logical cores)");
  mi->add_option("--seed", s.seed, "RNG seed");

  auto* dpss = app.add_subcommand("dpss", "Continuous-limit step cost and its optimal state");
  dpss->add_option("--dim", s.dim, "Hilbert space dimension D");
  dpss->add_option("--sigma", s.sigma, "step cost window width (radians)");
  dpss->add_option("--out", s.out, "CSV output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--filter", s.filter, "only checks whose name contains this text");
  verify->add_flag("--slow", s.slow, "include slow checks");

  std::vector<const char*> argv{"subcov"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  }

  try {
    if (sweep->parsed()) return cmd_cost_sweep(s, out);
    if (optimize->parsed()) return cmd_optimize(s, out, err);
    if (mi->parsed()) return cmd_mutual_info(s, out);
    if (dpss->parsed()) return cmd_dpss(s, out);
    if (verify->parsed()) {
      return acceptance::run_checks(acceptance::acceptance_checks(), s.filter, s.slow, out) == 0
                 ? kOk
                 : kVerifyFailed;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const IncompleteMeasurement& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  }
  return kBadArguments;
}

}  // namespace subcov::cli

// wkde: command-line front end for the simulation, bandwidth and curvature
// tools. Data goes to stdout or --out, diagnostics to stderr.

#include "CLI11.hpp"

#include "wkde/bandwidth.hpp"
#include "wkde/curvature.hpp"
#include "wkde/densities.hpp"
#include "wkde/error.hpp"
#include "wkde/estimator.hpp"
#include "wkde/io.hpp"
#include "wkde/risk.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace wkde;

namespace {

// independent of --threads so that the curvature sum is reproducible
constexpr std::size_t curvature_blocks = 16;

struct Options
{
  std::uint64_t seed = 123;
  bool seed_given = false;
  unsigned threads = 1;

  std::string config_path;
  std::string out_path;

  std::string input;
  std::string column = "eruptions";
  std::string method = "gcpi";
  std::string kernel = "epanechnikov";
  double curvature = 0.0;
  double pilot_alpha = 0.0;
  double pilot_b = 0.0;
  double tau = default_tau;
  std::string h_grid;

  std::string spec = "kinked:eps=0.5";
  std::string grid = "-6,6,1201";
};

std::vector<double> parse_triple(const std::string& text, const char* what)
{
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) {
        throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::invalid_parameter, std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (v.size() != 3) {
    throw Error(Errc::invalid_parameter, std::string(what) + " expects lo,hi,count");
  }
  if (!(v[2] >= 2.0) || v[2] != std::floor(v[2])) {
    throw Error(Errc::invalid_parameter, std::string(what) + ": count must be an integer >= 2");
  }
  return v;
}

// writes to --out when given, else stdout; the file only appears on success
void write_output(const std::string& path, const std::string& data)
{
  if (path.empty() || path == "-") {
    std::cout << data;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(Errc::file_not_found, "cannot open '" + path + "' for writing");
  }
  out << data;
  if (!out) {
    throw Error(Errc::file_not_found, "write to '" + path + "' failed");
  }
}

void print_kv(const std::string& key, const std::string& value)
{
  std::cout << key << '=' << value << '\n';
}

int run_simulate(const Options& o)
{
  auto cfg = load_config(o.config_path);
  if (o.seed_given) {
    cfg.master_seed = o.seed;
  }
  const auto rows = monte_carlo_mise(cfg, o.threads);
  std::ostringstream csv;
  write_results_csv(csv, rows);
  write_output(o.out_path, csv.str());
  for (const auto& r : rows) {
    if (r.failures > 0) {
      std::cerr << "warning: n=" << r.n << " kernel=" << r.kernel << " selector=" << r.selector << ": "
                << r.failures << " of " << cfg.reps << " replications failed and were excluded\n";
    }
  }
  return 0;
}

PilotRule data_pilot_rule(const Options& o)
{
  if (o.pilot_b > 0.0) {
    return PilotRule::fixed(o.pilot_b);
  }
  auto rule = PilotRule::data();
  if (o.pilot_alpha != 0.0) {
    if (!validate_pilot_rate(o.pilot_alpha)) {
      throw Error(Errc::invalid_parameter, "--pilot-alpha must lie in (0, 2/9)");
    }
    rule.alpha = o.pilot_alpha;
  }
  return rule;
}

void check_tau(double tau)
{
  if (!(tau > 0.0)) {
    throw Error(Errc::invalid_parameter, "--tau must be positive");
  }
}

int run_bandwidth(const Options& o)
{
  const auto kernel = kernel_by_name(o.kernel);
  const auto sample = ingest_csv(o.input, o.column);
  if (sample.size() == 0) {
    throw Error(Errc::empty_sample, "column '" + o.column + "' has no rows");
  }
  BandwidthResult result;
  if (o.method == "amise_oracle") {
    if (o.curvature == 0.0) {
      throw Error(Errc::invalid_parameter, "amise_oracle needs --curvature");
    }
    result = oracle_bandwidth(kernel, o.curvature, sample.size());
  } else if (o.method == "gcpi") {
    check_tau(o.tau);
    result = gcpi_bandwidth(sample,
                            kernel,
                            PilotSpec::gaussian(),
                            data_pilot_rule(o),
                            o.tau,
                            curvature_blocks,
                            o.threads);
  } else if (o.method == "silverman") {
    result.selector = "silverman";
    result.h = silverman_bandwidth(sample);
  } else if (o.method == "lscv") {
    std::vector<double> grid;
    if (o.h_grid.empty()) {
      grid = default_lscv_grid(sample);
    } else {
      const auto g = parse_triple(o.h_grid, "--h-grid");
      grid = log_grid(g[0], g[1], static_cast<std::size_t>(g[2]));
    }
    result = lscv_bandwidth(sample, kernel, grid, o.threads);
  } else {
    throw Error(Errc::unknown_name, "unknown method '" + o.method + "'");
  }

  // best-effort mode count on a grid spanning the data
  const auto [lo_it, hi_it] = std::minmax_element(sample.values.begin(), sample.values.end());
  const double pad = result.h * std::min(kernel.effective_radius(), 4.0);
  const EvaluationGrid grid{ *lo_it - pad, *hi_it + pad, 2001 };
  const auto fhat = kde_eval_grid(sample, kernel, result.h, grid);

  print_kv("selector", result.selector);
  print_kv("kernel", kernel.name());
  print_kv("n", std::to_string(sample.size()));
  print_kv("h", format_real(result.h));
  for (const auto& [key, value] : result.diagnostics) {
    print_kv(key, format_real(value));
  }
  print_kv("modes", std::to_string(count_modes(fhat)));
  return 0;
}

int run_curvature(const Options& o)
{
  check_tau(o.tau);
  const auto sample = ingest_csv(o.input, o.column);
  const auto est = estimate_curvature(
    sample, PilotSpec::gaussian(), data_pilot_rule(o), o.tau, curvature_blocks, o.threads);
  print_kv("n", std::to_string(est.n));
  print_kv("raw", format_real(est.raw));
  print_kv("truncated", format_real(est.truncated));
  print_kv("b", format_real(est.pilot_bandwidth));
  print_kv("truncation_hit", est.truncation_hit ? "1" : "0");
  return 0;
}

int run_density(const Options& o)
{
  const auto g = parse_triple(o.grid, "--grid");
  const EvaluationGrid grid{ g[0], g[1], static_cast<std::size_t>(g[2]) };
  grid.validate();
  std::ostringstream csv;
  emit_density_grid(o.spec, grid, csv);
  write_output(o.out_path, csv.str());
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Kernel density estimation under weak curvature: simulation and bandwidth tools" };
  app.require_subcommand(1);
  // global flags may also follow the subcommand
  app.fallthrough();
  Options o;

  auto* seed = app.add_option("--seed", o.seed, "Master seed for simulations (overrides the config)");
  app.add_option("--threads", o.threads, "Worker threads; never changes the output")
    ->check(CLI::Range(1u, 1024u));

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo MISE experiment from a config file");
  sim->add_option("--config", o.config_path, "Experiment config")->required();
  sim->add_option("--out", o.out_path, "Result CSV (default stdout)");

  auto* bw = app.add_subcommand("bandwidth", "Select a bandwidth for one CSV column");
  bw->add_option("--input", o.input, "CSV file with a header row")->required();
  bw->add_option("--column", o.column, "Column name")->capture_default_str();
  bw->add_option("--method", o.method, "amise_oracle, gcpi, silverman or lscv")->capture_default_str();
  bw->add_option("--kernel", o.kernel, "Kernel name")->capture_default_str();
  bw->add_option("--curvature", o.curvature, "Known R(f''), for amise_oracle");
  auto* alpha = bw->add_option("--pilot-alpha", o.pilot_alpha, "Pilot rate: b = s_rob n^-alpha (default 1/9)");
  bw->add_option("--pilot-b", o.pilot_b, "Fixed pilot bandwidth")->excludes(alpha);
  bw->add_option("--tau", o.tau, "Curvature floor")->capture_default_str();
  bw->add_option("--h-grid", o.h_grid, "LSCV grid lo,hi,count (log-spaced)");

  auto* cv = app.add_subcommand("curvature", "Estimate R(f'') for one CSV column");
  cv->add_option("--input", o.input, "CSV file with a header row")->required();
  cv->add_option("--column", o.column, "Column name")->capture_default_str();
  auto* calpha = cv->add_option("--pilot-alpha", o.pilot_alpha, "Pilot rate: b = s_rob n^-alpha (default 1/9)");
  cv->add_option("--pilot-b", o.pilot_b, "Fixed pilot bandwidth")->excludes(calpha);
  cv->add_option("--tau", o.tau, "Curvature floor")->capture_default_str();

  auto* dens = app.add_subcommand("density", "Tabulate a model density and its a.e. second derivative");
  dens->add_option("--spec", o.spec, "Model spec, e.g. kinked:eps=0.5")->capture_default_str();
  dens->add_option("--grid", o.grid, "lo,hi,count")->capture_default_str();
  dens->add_option("--out", o.out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help goes to stdout with status 0, everything else is a usage error
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }
  o.seed_given = seed->count() > 0;

  try {
    if (sim->parsed()) {
      return run_simulate(o);
    }
    if (bw->parsed()) {
      return run_bandwidth(o);
    }
    if (cv->parsed()) {
      return run_curvature(o);
    }
    return run_density(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

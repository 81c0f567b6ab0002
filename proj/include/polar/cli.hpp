#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polar/channel_sim.hpp"
#include "polar/construction.hpp"
#include "polar/io.hpp"
#include "polar/oracles.hpp"
#include "polar/version.hpp"

namespace polar::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::filesystem::path resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_absolute()) return p;
  const char* dir = std::getenv("POLAR_TOOLKIT_OUTDIR");
  return dir && *dir ? std::filesystem::path(dir) / p : p;
}

inline std::string join_args(const std::vector<std::string>& args) {
  std::string s = "polar_tool";
  for (const auto& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1)
    throw UsageError("grid requires 0 < min <= max and points >= 1");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    g[i] = std::exp(llo + (lhi - llo) * double(i) / (points - 1));
  return g;
}

inline std::vector<double> db_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw UsageError("grid requires min <= max and step > 0");
  std::vector<double> g;
  for (double s = lo; s <= hi + 1e-9; s += step) g.push_back(s);
  return g;
}

inline std::uint32_t resolve_k(int n, std::optional<std::uint32_t> k,
                               std::optional<double> rate) {
  const std::size_t N = std::size_t(1) << n;
  if (k.has_value() == rate.has_value())
    throw UsageError("give exactly one of --k and --rate");
  std::uint32_t K = k ? *k : std::uint32_t(std::llround(*rate * double(N)));
  if (K < 1 || K > N) throw UsageError("K out of range [1, N]");
  return K;
}

namespace detail {

struct ConstructArgs {
  int n = 0;
  std::optional<std::uint32_t> k;
  std::optional<double> rate;
  std::string method = "improved-ga";
  std::optional<double> design_snr_db;
  std::vector<double> band;
  std::string out;
  std::string reliability_out;
};

inline int cmd_construct(const ConstructArgs& a, const std::string& echo) {
  Method method = method_from_name(a.method);
  std::uint32_t K = resolve_k(a.n, a.k, a.rate);
  if (a.design_snr_db.has_value() == !a.band.empty())
    throw UsageError("give exactly one of --design-snr-db and --target-bler-band");
  DesignSnr ds{};
  if (a.design_snr_db) {
    ds.db = *a.design_snr_db;
    ds.linear = db_to_linear(ds.db);
  } else {
    ds = find_design_snr(a.n, K, a.band[0], a.band[1], method);
  }
  ReliabilityVector rel = run_construction(a.n, ds.linear, method);
  PolarCodeSpec code = select_info_set(rel, K);
  double est = estimate_bler(code, rel).value;

  std::string out = a.out;
  if (out.empty())
    out = "code_n" + std::to_string(a.n) + "_k" + std::to_string(K) + "_" + a.method + ".json";
  io::write_code_spec(resolve_out(out), code, echo);
  if (!a.reliability_out.empty()) {
    const char* table = rel.kind == ReliabilityKind::MeanLlr ? "reliability-mean-llr"
                                                             : "reliability-flip-prob";
    io::CsvWriter csv(table, echo, "index,value");
    for (std::size_t i = 0; i < rel.values.size(); ++i)
      csv.add_row(std::to_string(i) + "," + io::fmt_g(rel.values[i]));
    csv.write(resolve_out(a.reliability_out));
  }
  std::cout << "design_snr_db=" << io::fmt_g(ds.db)
            << " estimated_bler=" << io::fmt_g(est) << "\n";
  return 0;
}

struct GridArgs {
  int n = 0;
  std::optional<std::uint32_t> k;
  std::optional<double> rate;
  std::string method = "improved-ga";
  double snr_min = 0.0, snr_max = 0.0, step = 0.25;
  std::string out;
};

inline int cmd_sweep(const GridArgs& a, const std::string& echo) {
  Method method = method_from_name(a.method);
  std::uint32_t K = resolve_k(a.n, a.k, a.rate);
  io::CsvWriter csv("design-sweep", echo, "design_snr_db,min_est_bler");
  for (double s : db_grid(a.snr_min, a.snr_max, a.step)) {
    double v = min_estimated_bler(a.n, K, db_to_linear(s), method);
    csv.add_row(io::fmt_g(s) + "," + io::fmt_g(v));
  }
  csv.write(resolve_out(a.out.empty() ? "sweep.csv" : a.out));
  return 0;
}

struct EstimateArgs {
  std::string spec;
  double snr_min = 0.0, snr_max = 0.0, step = 0.25;
  std::string out;
};

inline int cmd_estimate(const EstimateArgs& a, const std::string& echo) {
  PolarCodeSpec code = io::read_code_spec(a.spec);
  io::CsvWriter csv("code-estimate", echo, "channel_snr_db,est_bler");
  for (double s : db_grid(a.snr_min, a.snr_max, a.step)) {
    ReliabilityVector rel = run_construction(code.n, db_to_linear(s), code.method);
    double v = estimate_bler(code, rel).value;
    csv.add_row(io::fmt_g(s) + "," + io::fmt_g(v));
  }
  csv.write(resolve_out(a.out.empty() ? "estimate.csv" : a.out));
  return 0;
}

struct SimulateArgs {
  std::string spec;
  std::vector<double> snr_db;
  std::optional<double> snr_min, snr_max;
  double step = 0.25;
  std::uint64_t seed = 1;
  std::uint64_t target_errors = 100;
  std::uint64_t max_blocks = 10'000'000;
  std::uint64_t chunk_blocks = 256;
  int workers = 1;
  bool all_zero = false;
  std::string out;
};

inline int cmd_simulate(const SimulateArgs& a, const std::string& echo) {
  PolarCodeSpec code = io::read_code_spec(a.spec);
  std::vector<double> grid = a.snr_db;
  if (grid.empty()) {
    if (!a.snr_min || !a.snr_max)
      throw UsageError("give --snr-db points or --snr-min-db/--snr-max-db");
    grid = db_grid(*a.snr_min, *a.snr_max, a.step);
  }
  const std::string columns =
      "n,K,method,design_snr_db,channel_snr_db,blocks,block_errs,bler,ber,seed";
  auto out_path = resolve_out(a.out.empty() ? "campaign.csv" : a.out);
  int failures = 0;
  for (double s : grid) {
    sim::TrialConfig cfg;
    cfg.snr_linear = db_to_linear(s);
    cfg.target_block_errors = a.target_errors;
    cfg.max_blocks = a.max_blocks;
    cfg.master_seed = a.seed;
    cfg.workers = a.workers;
    cfg.all_zero = a.all_zero;
    cfg.chunk_blocks = a.chunk_blocks;
    sim::SimResult r = sim::run_trials(code, cfg);
    std::string row = std::to_string(code.n) + "," + std::to_string(code.k) + "," +
                      method_name(code.method) + "," + io::fmt_g(code.design_snr_db) + "," +
                      io::fmt_g(s) + "," + std::to_string(r.blocks) + "," +
                      std::to_string(r.block_errors) + "," + io::fmt_g(r.bler) + "," +
                      io::fmt_g(r.ber) + "," + std::to_string(r.master_seed);
    try {
      io::append_campaign_rows(out_path, echo, columns, {row});
    } catch (const std::exception& e) {
      std::cerr << "row write failed at " << io::fmt_g(s) << " dB: " << e.what() << "\n";
      ++failures;
      continue;
    }
    std::cout << "snr_db=" << io::fmt_g(s) << " blocks=" << r.blocks
              << " block_errs=" << r.block_errors << " bler=" << io::fmt_g(r.bler)
              << " ci95=[" << io::fmt_g(r.ci_lo) << "," << io::fmt_g(r.ci_hi) << "]"
              << " stop=" << r.stop_reason << "\n";
  }
  if (failures) throw std::runtime_error(std::to_string(failures) + " row(s) failed to write");
  return 0;
}

struct TableArgs {
  double gamma_min = 1e-3, gamma_max = 1e3;
  int points = 200;
  std::string out;
};

inline int cmd_kernel(const TableArgs& a, const std::string& echo) {
  io::CsvWriter csv("kernel-table", echo,
                    "gamma,xi_hat,check_improved,check_conventional,check_ha,variable,"
                    "asymptote,exact_mean");
  for (double g : log_grid(a.gamma_min, a.gamma_max, a.points)) {
    csv.add_row(io::fmt_g(g) + "," + io::fmt_g(ga::xi_hat(g)) + "," +
                io::fmt_g(ga::check_node_transform(g, GaVariant::ImprovedLogDomain)) + "," +
                io::fmt_g(ga::check_node_transform(g, GaVariant::ConventionalChung)) + "," +
                io::fmt_g(ga::check_node_transform(g, GaVariant::HaModified)) + "," +
                io::fmt_g(ga::variable_node_transform(g)) + "," +
                io::fmt_g(g - 4.0 * std::numbers::ln2) + "," +
                io::fmt_g(oracle::exact_mean_boxplus(g)));
  }
  csv.write(resolve_out(a.out.empty() ? "kernel.csv" : a.out));
  return 0;
}

inline int cmd_oracle_compare(const TableArgs& a, const std::string& echo) {
  io::CsvWriter csv("oracle-compare", echo,
                    "gamma,xi_hat,xi_numeric,check_improved,check_conventional,check_ha,"
                    "exact_mean,asymptote");
  for (double g : log_grid(a.gamma_min, a.gamma_max, a.points)) {
    csv.add_row(io::fmt_g(g) + "," + io::fmt_g(ga::xi_hat(g)) + "," +
                io::fmt_g(oracle::log_phi_numeric(g)) + "," +
                io::fmt_g(ga::check_node_transform(g, GaVariant::ImprovedLogDomain)) + "," +
                io::fmt_g(ga::check_node_transform(g, GaVariant::ConventionalChung)) + "," +
                io::fmt_g(ga::check_node_transform(g, GaVariant::HaModified)) + "," +
                io::fmt_g(oracle::exact_mean_boxplus(g)) + "," +
                io::fmt_g(g - 4.0 * std::numbers::ln2));
  }
  csv.write(resolve_out(a.out.empty() ? "oracle_compare.csv" : a.out));
  return 0;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"polar-code design and evaluation toolkit " POLAR_TOOLKIT_VERSION};
  app.require_subcommand(1);
  app.set_version_flag("--version", "polar-toolkit " POLAR_TOOLKIT_VERSION);

  detail::ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "design a code and write its spec file");
  construct->add_option("--n", ca.n, "log2 block length")->required()->check(CLI::Range(1, 22));
  construct->add_option("--k", ca.k, "information bits per block");
  construct->add_option("--rate", ca.rate, "code rate K/N");
  construct->add_option("--method", ca.method,
                        "improved-ga | conventional-ga | ha-ga | flipping");
  construct->add_option("--design-snr-db", ca.design_snr_db, "design Es/N0 in dB");
  construct->add_option("--target-bler-band", ca.band,
                        "search for the design SNR hitting this BLER band")
      ->expected(2);
  construct->add_option("--out", ca.out, "spec file path (default code_n<k>_...json)");
  construct->add_option("--reliability-out", ca.reliability_out,
                        "also dump per-channel reliabilities as CSV");

  detail::GridArgs sa;
  auto* sweep = app.add_subcommand("sweep", "minimum estimated BLER vs design SNR");
  sweep->add_option("--n", sa.n, "log2 block length")->required()->check(CLI::Range(1, 22));
  sweep->add_option("--k", sa.k, "information bits per block");
  sweep->add_option("--rate", sa.rate, "code rate K/N");
  sweep->add_option("--method", sa.method, "construction method");
  sweep->add_option("--snr-min-db", sa.snr_min, "grid start")->required();
  sweep->add_option("--snr-max-db", sa.snr_max, "grid end")->required();
  sweep->add_option("--step-db", sa.step, "grid step (default 0.25)");
  sweep->add_option("--out", sa.out, "CSV output path");

  detail::EstimateArgs ea;
  auto* estimate = app.add_subcommand("estimate", "estimated BLER vs channel SNR for a code");
  estimate->add_option("--spec", ea.spec, "code spec file")->required();
  estimate->add_option("--snr-min-db", ea.snr_min, "grid start")->required();
  estimate->add_option("--snr-max-db", ea.snr_max, "grid end")->required();
  estimate->add_option("--step-db", ea.step, "grid step (default 0.25)");
  estimate->add_option("--out", ea.out, "CSV output path");

  detail::SimulateArgs ma;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BLER/BER campaign");
  simulate->add_option("--spec", ma.spec, "code spec file")->required();
  simulate->add_option("--snr-db", ma.snr_db, "explicit channel SNR points (dB)");
  simulate->add_option("--snr-min-db", ma.snr_min, "grid start");
  simulate->add_option("--snr-max-db", ma.snr_max, "grid end");
  simulate->add_option("--step-db", ma.step, "grid step (default 0.25)");
  simulate->add_option("--seed", ma.seed, "master seed (default 1)");
  simulate->add_option("--target-errors", ma.target_errors,
                       "stop after this many block errors (default 100)");
  simulate->add_option("--max-blocks", ma.max_blocks, "hard block cap (default 1e7)");
  simulate->add_option("--chunk-blocks", ma.chunk_blocks,
                       "stop-rule granularity in blocks (default 256)");
  simulate->add_option("--workers", ma.workers, "worker threads, 0 = hardware (default 1)");
  simulate->add_flag("--all-zero", ma.all_zero, "send all-zero codewords (symmetry check)");
  simulate->add_option("--out", ma.out, "campaign CSV (appended, resumable)");

  detail::TableArgs ka;
  auto* kernel = app.add_subcommand("kernel", "dump kernel transform tables as CSV");
  kernel->add_option("--gamma-min", ka.gamma_min, "grid start (default 1e-3)");
  kernel->add_option("--gamma-max", ka.gamma_max, "grid end (default 1e3)");
  kernel->add_option("--points", ka.points, "log-spaced point count (default 200)");
  kernel->add_option("--out", ka.out, "CSV output path");

  detail::TableArgs oa;
  oa.gamma_max = 50.0;
  oa.points = 60;
  auto* ocomp = app.add_subcommand("oracle-compare",
                                   "kernel approximations next to quadrature oracles");
  ocomp->add_option("--gamma-min", oa.gamma_min, "grid start (default 1e-3)");
  ocomp->add_option("--gamma-max", oa.gamma_max, "grid end (default 50)");
  ocomp->add_option("--points", oa.points, "log-spaced point count (default 60)");
  ocomp->add_option("--out", oa.out, "CSV output path");

  std::vector<const char*> argv;
  argv.push_back("polar_tool");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string echo = join_args(args);
  try {
    if (app.got_subcommand(construct)) return detail::cmd_construct(ca, echo);
    if (app.got_subcommand(sweep)) return detail::cmd_sweep(sa, echo);
    if (app.got_subcommand(estimate)) return detail::cmd_estimate(ea, echo);
    if (app.got_subcommand(simulate)) return detail::cmd_simulate(ma, echo);
    if (app.got_subcommand(kernel)) return detail::cmd_kernel(ka, echo);
    if (app.got_subcommand(ocomp)) return detail::cmd_oracle_compare(oa, echo);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

inline int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}

}  // namespace polar::cli

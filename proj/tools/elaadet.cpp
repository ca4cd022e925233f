// Command line driver for the detection experiments: convergence runs,
// large-array limit checks, per-iteration cost verification, BER sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "elaa/harness.hpp"

namespace {

using namespace elaa;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::size_t workers = 0;
  std::vector<std::string> overrides;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig load_with_overrides(const std::string& path, const GlobalOpts& g) {
  std::string text = read_text(path);
  for (const std::string& kv : g.overrides) text = apply_override(text, kv);
  ExperimentConfig cfg = parse_config(text);
  if (g.seed) cfg.seed = *g.seed;
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  if (g.workers) cfg.workers = g.workers;
  cfg.validate();
  return cfg;
}

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", *v);
  return buf;
}

int cmd_run(const std::string& config_path, const GlobalOpts& g) {
  const ExperimentConfig cfg = load_with_overrides(config_path, g);
  const ExperimentSummary summary = run_experiment(cfg);
  std::printf("experiment %s  (hash %s, seed %llu, %zu trials, snr %.1f dB)\n",
              summary.name.c_str(), summary.config_hash.c_str(),
              static_cast<unsigned long long>(summary.seed), summary.trials,
              summary.snr_db);
  std::printf("%-9s %9s %9s %9s %12s %14s\n", "method", "converged", "diverged",
              "capped", "median_iter", "median_macs");
  for (Method m : cfg.methods) {
    const MethodAggregate& agg = summary.methods.at(std::string(method_name(m)));
    std::printf("%-9s %9zu %9zu %9zu %12s %14s\n", method_name(m).data(),
                agg.converged, agg.diverged, agg.max_iters,
                opt_str(agg.median_iters).c_str(), opt_str(agg.median_macs).c_str());
  }
  std::printf("results written to %s\n", cfg.output_dir.c_str());
  return 0;
}

int cmd_theorem1(const std::string& config_path, const GlobalOpts& g) {
  const ExperimentConfig cfg = load_with_overrides(config_path, g);
  const Theorem1Report report = validate_theorem1(cfg);
  std::printf("%8s %14s\n", "m", "mean_delta");
  for (const Theorem1Row& row : report.rows)
    std::printf("%8zu %14.6e\n", row.m, row.mean_delta);
  if (!report.strictly_decreasing) {
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      if (!(report.rows[i].mean_delta < report.rows[i - 1].mean_delta)) {
        std::fprintf(stderr,
                     "deviation did not decrease from m=%zu (%.6e) to m=%zu (%.6e)\n",
                     report.rows[i - 1].m, report.rows[i - 1].mean_delta,
                     report.rows[i].m, report.rows[i].mean_delta);
      }
    }
    return 1;
  }
  std::printf("mean deviation strictly decreasing across the grid\n");
  return 0;
}

int cmd_flops(const std::string& config_path, std::vector<std::size_t> n_grid,
              const GlobalOpts& g) {
  std::uint64_t seed = g.seed.value_or(1);
  if (!config_path.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_text(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    for (auto it = doc.begin(); it != doc.end(); ++it)
      if (it.key() != "name" && it.key() != "n_grid" && it.key() != "seed")
        throw ConfigError("config: unknown key '" + it.key() + "'");
    if (doc.contains("n_grid")) n_grid = doc["n_grid"].get<std::vector<std::size_t>>();
    if (doc.contains("seed") && !g.seed) seed = doc["seed"].get<std::uint64_t>();
  }
  const FlopsReport report = verify_flops(n_grid, seed);
  std::printf("%-9s %5s %12s %12s  status\n", "method", "n", "expected", "measured");
  for (const FlopsRow& row : report.rows) {
    const bool ok = row.expected == row.measured;
    std::printf("%-9s %5zu %12llu %12llu  %s\n", method_name(row.method).data(),
                row.n, static_cast<unsigned long long>(row.expected),
                static_cast<unsigned long long>(row.measured),
                ok ? "ok" : "MISMATCH");
    if (!ok) {
      std::fprintf(stderr, "cost mismatch: %s at n=%zu expected %llu, measured %llu\n",
                   method_name(row.method).data(), row.n,
                   static_cast<unsigned long long>(row.expected),
                   static_cast<unsigned long long>(row.measured));
    }
  }
  return report.all_match ? 0 : 1;
}

int cmd_ber(const std::string& config_path, const GlobalOpts& g) {
  const ExperimentConfig cfg = load_with_overrides(config_path, g);
  const std::vector<BerRow> rows = ber_sweep(cfg);
  std::printf("%-9s %8s %12s %12s %10s\n", "method", "snr_db", "mean_ber",
              "median_ber", "converged");
  for (const BerRow& row : rows)
    std::printf("%-9s %8.1f %12.6g %12.6g %7zu/%zu\n", row.method.c_str(),
                row.snr_db, row.mean_ber, row.median_ber, row.converged, row.trials);
  std::printf("results written to %s\n", cfg.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterative uplink detection simulator for large antenna arrays"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "override the experiment seed");
  app.add_option("--out-dir", g.out_dir, "override the output directory");
  app.add_option("--workers", g.workers, "override the worker thread count");
  app.add_option("--override", g.overrides,
                 "config override key.path=value (repeatable)");

  std::string run_config, theorem1_config, ber_config, flops_config;
  std::vector<std::size_t> n_grid = {4, 8, 32};

  CLI::App* run_cmd = app.add_subcommand("run", "convergence experiment");
  run_cmd->add_option("config", run_config, "experiment config JSON")->required();

  CLI::App* th_cmd = app.add_subcommand("theorem1", "Gram limit validation");
  th_cmd->add_option("config", theorem1_config, "experiment config JSON")->required();

  CLI::App* fl_cmd = app.add_subcommand("flops", "per-iteration cost verification");
  fl_cmd->add_option("config", flops_config, "optional flops config JSON");
  fl_cmd->add_option("--n", n_grid, "detector sizes to check")->delimiter(',');

  CLI::App* ber_cmd = app.add_subcommand("ber", "bit error rate sweep");
  ber_cmd->add_option("config", ber_config, "experiment config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_config, g);
    if (th_cmd->parsed()) return cmd_theorem1(theorem1_config, g);
    if (fl_cmd->parsed()) return cmd_flops(flops_config, n_grid, g);
    if (ber_cmd->parsed()) return cmd_ber(ber_config, g);
  } catch (const elaa::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

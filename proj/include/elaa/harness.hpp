#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elaa/channel.hpp"
#include "elaa/metrics.hpp"
#include "elaa/solvers.hpp"
#include "elaa/system.hpp"

namespace elaa {

inline constexpr const char* kVersion = "0.1.0";

// Experiment description, normally loaded from a JSON file. Unknown keys
// are rejected with their path. snr_db holds the grid for BER sweeps;
// convergence experiments use its first entry.
struct ExperimentConfig {
  std::string name = "experiment";
  GeometryConfig geometry;
  std::optional<double> pathloss_alpha;  // defaults to wavelength / (4 pi)
  double pathloss_beta = 1.0;
  bool normalize_columns = true;
  double kappa = 8.0;
  std::vector<double> snr_db = {20.0};
  double ridge = 0.0;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  SolverConfig solver;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::size_t workers = 1;
  std::vector<std::size_t> m_grid;  // array sizes for the limit validation

  PathlossModel pathloss() const;
  void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Applies "a.b.c=value" onto the JSON document before parsing. The value is
// parsed as JSON when possible and treated as a string otherwise.
std::string apply_override(const std::string& json_text, const std::string& kv);

// Canonical serialized form with every field explicit and keys sorted.
// output_dir and workers are excluded so relocating results or changing the
// thread count keeps the identity stable.
std::string to_canonical_json(const ExperimentConfig& cfg);

// 64-bit FNV-1a over the canonical form, as a 16-digit hex string.
std::string config_hash(const ExperimentConfig& cfg);

struct MethodAggregate {
  std::size_t converged = 0;
  std::size_t diverged = 0;
  std::size_t max_iters = 0;
  std::size_t fallback_steps = 0;
  double convergence_rate = 0.0;
  // Lower-median order statistics over trials; unreached trials count as
  // +inf and an infinite median reports as absent.
  std::optional<double> median_iters;
  std::optional<double> q1_iters;
  std::optional<double> q3_iters;
  std::optional<double> median_macs;
};

struct ExperimentSummary {
  std::string name;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double snr_db = 0.0;
  double tol = 0.0;
  std::vector<std::string> trial_input_hashes;
  std::map<std::string, MethodAggregate> methods;  // keyed by method name
};

// Runs the convergence experiment: fixed geometry, per-trial channel and
// noise, every configured method on identical systems. Writes one trace CSV
// per method plus summary.json under output_dir, and returns the summary.
// Trials are independent; workers > 1 distributes them over threads without
// changing any output byte.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

struct Theorem1Row {
  std::size_t m = 0;
  double mean_delta = 0.0;  // mean |A - A_inf|_F / |A_inf|_F over trials
};

struct Theorem1Report {
  std::vector<Theorem1Row> rows;
  bool strictly_decreasing = false;
};

// Measures the Gram deviation from its deterministic limit over cfg.m_grid.
// Requires normalized columns. Writes theorem1.csv under output_dir.
Theorem1Report validate_theorem1(const ExperimentConfig& cfg);

struct FlopsRow {
  Method method;
  std::size_t n = 0;
  std::uint64_t expected = 0;  // 3 iterations * cost_per_iteration
  std::uint64_t measured = 0;  // counter value after 3 iterations
};

struct FlopsReport {
  std::vector<FlopsRow> rows;
  bool all_match = false;
};

// Runs every method for exactly three iterations on a channel-derived
// instance per n and compares counted operations against the cost model.
FlopsReport verify_flops(const std::vector<std::size_t>& n_grid,
                         std::uint64_t seed = 1);

struct BerRow {
  std::string method;  // solver name or "oracle"
  double snr_db = 0.0;
  double mean_ber = 0.0;
  double median_ber = 0.0;
  std::size_t converged = 0;  // trials where the solver met its tolerance
  std::size_t trials = 0;
};

// Symbol-error sweep across cfg.snr_db. The exact solve ("oracle") is always
// included; configured methods use their terminal iterate, converged or not.
// Writes ber.csv under output_dir.
std::vector<BerRow> ber_sweep(const ExperimentConfig& cfg);

}  // namespace elaa

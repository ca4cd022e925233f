#include "elaa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include "json.hpp"

namespace elaa {

namespace {

using njson = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void reject_unknown(const njson& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("config: unknown key '" + join_path(path, it.key()) + "'");
  }
}

template <typename T>
T field_or(const njson& obj, const std::string& path, const char* key, T def) {
  if (!obj.contains(key)) return def;
  try {
    return obj.at(key).get<T>();
  } catch (const njson::exception&) {
    throw ConfigError("config: bad value for '" + join_path(path, key) + "'");
  }
}

// Deterministic shortest-faithful float formatting for CSV output.
std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

// Runs fn(0..trials-1), optionally across threads. Results must be stored
// by trial index by the caller; the schedule never affects outputs.
void for_each_trial(std::size_t trials, std::size_t workers,
                    const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || trials <= 1) {
    for (std::size_t t = 0; t < trials; ++t) fn(t);
    return;
  }
  const std::size_t pool_size = std::min(workers, trials);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(pool_size);
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (std::size_t w = 0; w < pool_size; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t; (t = next.fetch_add(1)) < trials;) fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
        next.store(trials);
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

// Lower-median order statistics; +inf entries sort to the top.
double order_stat(std::vector<double> v, std::size_t num, std::size_t den) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) * num / den];
}

std::optional<double> finite_or_absent(double v) {
  if (std::isinf(v)) return std::nullopt;
  return v;
}

BitBlock random_bits(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  BitBlock block;
  block.bits.resize(count);
  for (std::size_t i = 0; i < count; ++i) block.bits[i] = rng.bit() ? 1 : 0;
  return block;
}

double noise_variance_for(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

}  // namespace

PathlossModel ExperimentConfig::pathloss() const {
  PathlossModel pl = PathlossModel::free_space(geometry.wavelength_m());
  if (pathloss_alpha) pl.alpha = *pathloss_alpha;
  pl.beta = pathloss_beta;
  pl.normalize_columns = normalize_columns;
  return pl;
}

void ExperimentConfig::validate() const {
  geometry.validate();
  if (pathloss_alpha && *pathloss_alpha <= 0.0)
    throw ConfigError("config: pathloss.alpha must be positive");
  if (!(kappa >= 0.0)) throw ConfigError("config: kappa must be >= 0");
  if (ridge < 0.0) throw ConfigError("config: ridge must be >= 0");
  if (snr_db.empty()) throw ConfigError("config: snr_db must not be empty");
  if (trials == 0) throw ConfigError("config: trials must be >= 1");
  if (workers == 0) throw ConfigError("config: workers must be >= 1");
  if (solver.max_iters == 0) throw ConfigError("config: solver.max_iters must be >= 1");
  if (!(solver.tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
  if (!(solver.divergence_factor > 1.0))
    throw ConfigError("config: solver.divergence_factor must exceed 1");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j])
        throw ConfigError("config: duplicate method '" +
                          std::string(method_name(methods[i])) + "'");
  for (std::size_t m : m_grid)
    if (m == 0) throw ConfigError("config: m_grid entries must be positive");
}

ExperimentConfig parse_config(const std::string& json_text) {
  njson doc;
  try {
    doc = njson::parse(json_text);
  } catch (const njson::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, "",
                 {"name", "geometry", "pathloss", "kappa", "snr_db", "ridge",
                  "methods", "solver", "trials", "seed", "output_dir", "workers",
                  "m_grid"});

  ExperimentConfig cfg;
  cfg.name = field_or<std::string>(doc, "", "name", cfg.name);

  if (doc.contains("geometry")) {
    const njson& g = doc.at("geometry");
    if (!g.is_object()) throw ConfigError("config: geometry must be an object");
    reject_unknown(g, "geometry",
                   {"carrier_freq_hz", "num_service_antennas", "num_users",
                    "antennas_per_user", "user_line_distance_m", "user_spread_m",
                    "element_spacing_wavelengths"});
    GeometryConfig& gc = cfg.geometry;
    gc.carrier_freq_hz = field_or(g, "geometry", "carrier_freq_hz", gc.carrier_freq_hz);
    gc.num_service_antennas =
        field_or(g, "geometry", "num_service_antennas", gc.num_service_antennas);
    gc.num_users = field_or(g, "geometry", "num_users", gc.num_users);
    gc.antennas_per_user =
        field_or(g, "geometry", "antennas_per_user", gc.antennas_per_user);
    gc.user_line_distance_m =
        field_or(g, "geometry", "user_line_distance_m", gc.user_line_distance_m);
    gc.user_spread_m = field_or(g, "geometry", "user_spread_m", gc.user_spread_m);
    gc.element_spacing_wavelengths = field_or(g, "geometry", "element_spacing_wavelengths",
                                              gc.element_spacing_wavelengths);
  }

  if (doc.contains("pathloss")) {
    const njson& p = doc.at("pathloss");
    if (!p.is_object()) throw ConfigError("config: pathloss must be an object");
    reject_unknown(p, "pathloss", {"alpha", "beta", "normalize_columns"});
    if (p.contains("alpha"))
      cfg.pathloss_alpha = field_or<double>(p, "pathloss", "alpha", 0.0);
    cfg.pathloss_beta = field_or(p, "pathloss", "beta", cfg.pathloss_beta);
    cfg.normalize_columns =
        field_or(p, "pathloss", "normalize_columns", cfg.normalize_columns);
  }

  cfg.kappa = field_or(doc, "", "kappa", cfg.kappa);
  cfg.ridge = field_or(doc, "", "ridge", cfg.ridge);

  if (doc.contains("snr_db")) {
    const njson& s = doc.at("snr_db");
    if (s.is_number()) {
      cfg.snr_db = {s.get<double>()};
    } else {
      cfg.snr_db = field_or<std::vector<double>>(doc, "", "snr_db", {});
    }
  }

  if (doc.contains("methods")) {
    const auto names = field_or<std::vector<std::string>>(doc, "", "methods", {});
    cfg.methods.clear();
    for (const std::string& name : names) {
      const std::optional<Method> m = method_from_name(name);
      if (!m) throw ConfigError("config: unknown method '" + name + "'");
      cfg.methods.push_back(*m);
    }
  }

  if (doc.contains("solver")) {
    const njson& s = doc.at("solver");
    if (!s.is_object()) throw ConfigError("config: solver must be an object");
    reject_unknown(s, "solver",
                   {"max_iters", "tol", "divergence_factor", "conjugate_step",
                    "classical_bfgs"});
    cfg.solver.max_iters = field_or(s, "solver", "max_iters", cfg.solver.max_iters);
    cfg.solver.tol = field_or(s, "solver", "tol", cfg.solver.tol);
    cfg.solver.divergence_factor =
        field_or(s, "solver", "divergence_factor", cfg.solver.divergence_factor);
    cfg.solver.conjugate_step =
        field_or(s, "solver", "conjugate_step", cfg.solver.conjugate_step);
    cfg.solver.classical_bfgs =
        field_or(s, "solver", "classical_bfgs", cfg.solver.classical_bfgs);
  }

  cfg.trials = field_or(doc, "", "trials", cfg.trials);
  cfg.seed = field_or(doc, "", "seed", cfg.seed);
  cfg.output_dir = field_or(doc, "", "output_dir", cfg.output_dir);
  cfg.workers = field_or(doc, "", "workers", cfg.workers);
  cfg.m_grid = field_or(doc, "", "m_grid", cfg.m_grid);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string apply_override(const std::string& json_text, const std::string& kv) {
  const std::size_t eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key.path=value, got '" + kv + "'");
  std::string path = kv.substr(0, eq);
  const std::string raw = kv.substr(eq + 1);
  njson doc;
  try {
    doc = njson::parse(json_text);
  } catch (const njson::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  njson value = njson::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // unquoted strings pass through
  std::replace(path.begin(), path.end(), '.', '/');
  try {
    doc[njson::json_pointer("/" + path)] = value;
  } catch (const njson::exception& e) {
    throw ConfigError("override '" + kv + "': " + e.what());
  }
  return doc.dump();
}

std::string to_canonical_json(const ExperimentConfig& cfg) {
  njson doc;
  doc["name"] = cfg.name;
  doc["geometry"]["carrier_freq_hz"] = cfg.geometry.carrier_freq_hz;
  doc["geometry"]["num_service_antennas"] = cfg.geometry.num_service_antennas;
  doc["geometry"]["num_users"] = cfg.geometry.num_users;
  doc["geometry"]["antennas_per_user"] = cfg.geometry.antennas_per_user;
  doc["geometry"]["user_line_distance_m"] = cfg.geometry.user_line_distance_m;
  doc["geometry"]["user_spread_m"] = cfg.geometry.user_spread_m;
  doc["geometry"]["element_spacing_wavelengths"] =
      cfg.geometry.element_spacing_wavelengths;
  doc["pathloss"]["alpha"] =
      cfg.pathloss_alpha ? njson(*cfg.pathloss_alpha) : njson(nullptr);
  doc["pathloss"]["beta"] = cfg.pathloss_beta;
  doc["pathloss"]["normalize_columns"] = cfg.normalize_columns;
  doc["kappa"] = cfg.kappa;
  doc["snr_db"] = cfg.snr_db;
  doc["ridge"] = cfg.ridge;
  njson names = njson::array();
  for (Method m : cfg.methods) names.push_back(std::string(method_name(m)));
  doc["methods"] = names;
  doc["solver"]["max_iters"] = cfg.solver.max_iters;
  doc["solver"]["tol"] = cfg.solver.tol;
  doc["solver"]["divergence_factor"] = cfg.solver.divergence_factor;
  doc["solver"]["conjugate_step"] = cfg.solver.conjugate_step;
  doc["solver"]["classical_bfgs"] = cfg.solver.classical_bfgs;
  doc["trials"] = cfg.trials;
  doc["seed"] = cfg.seed;
  doc["m_grid"] = cfg.m_grid;
  // output_dir and workers are excluded: moving results or changing the
  // thread count must not change the hash, since neither affects any byte
  // of the output
  return doc.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  return hex64(fnv1a(to_canonical_json(cfg)));
}

namespace {

struct TrialOutput {
  std::vector<IterationTrace> traces;  // one per configured method
};

// Shared deterministic precomputation: geometry, line-of-sight component,
// static component. Identical for every trial of one experiment.
struct ExperimentBase {
  Geometry geo;
  PathlossModel pl;
  RealMatrix distances;
  CMatrix h_los;
  CMatrix psi;
  std::size_t n = 0;
};

ExperimentBase make_base(const ExperimentConfig& cfg) {
  ExperimentBase base;
  base.geo = build_geometry(cfg.geometry);
  base.pl = cfg.pathloss();
  base.distances = pairwise_distances(base.geo);
  base.h_los = los_matrix(base.distances, base.geo.wavelength_m, base.pl);
  base.psi = static_component(base.h_los, cfg.kappa, cfg.ridge);
  base.n = cfg.geometry.total_user_antennas();
  return base;
}

// Channel, symbols and received vector for one trial at one noise level.
struct TrialSystem {
  GramSystem sys;
  Splitting splitting;
  CVector x_star;
  BitBlock bits;
};

TrialSystem make_trial_system(const ExperimentConfig& cfg, const ExperimentBase& base,
                              std::size_t trial, double noise_var,
                              std::uint64_t noise_extra) {
  const CMatrix h_nlos = nlos_matrix(
      base.distances, base.pl, derive_subseed(cfg.seed, trial, StreamRole::NlosFading));
  const ChannelRealization ch = rician_combine(base.h_los, h_nlos, cfg.kappa);

  TrialSystem ts;
  ts.bits = random_bits(4 * base.n, derive_subseed(cfg.seed, trial, StreamRole::SymbolBits));
  CVector s = qam16_modulate(ts.bits);
  const TxInstance tx =
      transmit(ch.h, std::move(s), noise_var,
               derive_subseed(cfg.seed, trial, StreamRole::Noise, noise_extra));
  ts.sys = gram_system(ch.h, tx.r, cfg.ridge);
  ts.sys.psi = base.psi;
  ts.x_star = solve_hermitian(ts.sys.a, ts.sys.b);
  ts.splitting = split(ts.sys.a);
  return ts;
}

std::string trace_csv(const ExperimentConfig& cfg, Method m,
                      const std::vector<TrialOutput>& outputs, std::size_t mi) {
  std::string csv = "method,trial,iter,rel_residual,rel_error,cum_macs,status\n";
  for (std::size_t t = 0; t < outputs.size(); ++t) {
    const IterationTrace& tr = outputs[t].traces[mi];
    for (const IterationRecord& rec : tr.records) {
      csv += method_name(m);
      csv += ',';
      csv += std::to_string(t);
      csv += ',';
      csv += std::to_string(rec.iter);
      csv += ',';
      csv += fmt_double(rec.rel_residual);
      csv += ',';
      csv += fmt_double(rec.rel_error);
      csv += ',';
      csv += std::to_string(rec.cum_macs);
      csv += ',';
      csv += status_name(tr.status);
      csv += '\n';
    }
  }
  (void)cfg;
  return csv;
}

njson aggregate_json(const MethodAggregate& agg) {
  njson j;
  j["converged"] = agg.converged;
  j["diverged"] = agg.diverged;
  j["max_iters"] = agg.max_iters;
  j["fallback_steps"] = agg.fallback_steps;
  j["convergence_rate"] = agg.convergence_rate;
  j["median_iters_to_tol"] = agg.median_iters ? njson(*agg.median_iters) : njson(nullptr);
  j["q1_iters_to_tol"] = agg.q1_iters ? njson(*agg.q1_iters) : njson(nullptr);
  j["q3_iters_to_tol"] = agg.q3_iters ? njson(*agg.q3_iters) : njson(nullptr);
  j["median_macs_to_tol"] = agg.median_macs ? njson(*agg.median_macs) : njson(nullptr);
  return j;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.methods.empty())
    throw ConfigError("run_experiment: methods must not be empty");
  const ExperimentBase base = make_base(cfg);
  const double snr_db = cfg.snr_db.front();
  const double noise_var = noise_variance_for(snr_db);

  std::vector<TrialOutput> outputs(cfg.trials);
  for_each_trial(cfg.trials, cfg.workers, [&](std::size_t t) {
    const TrialSystem ts = make_trial_system(cfg, base, t, noise_var, 0);
    TrialOutput& out = outputs[t];
    out.traces.reserve(cfg.methods.size());
    for (Method m : cfg.methods)
      out.traces.push_back(run(m, ts.sys, &ts.splitting, cfg.solver, &ts.x_star));
  });

  ExperimentSummary summary;
  summary.name = cfg.name;
  summary.config_hash = config_hash(cfg);
  summary.seed = cfg.seed;
  summary.trials = cfg.trials;
  summary.snr_db = snr_db;
  summary.tol = cfg.solver.tol;
  for (const TrialOutput& out : outputs)
    summary.trial_input_hashes.push_back(hex64(out.traces.front().input_hash));

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    MethodAggregate agg;
    std::vector<double> iters, macs;
    for (const TrialOutput& out : outputs) {
      const IterationTrace& tr = out.traces[mi];
      switch (tr.status) {
        case TerminalStatus::Converged: ++agg.converged; break;
        case TerminalStatus::Diverged: ++agg.diverged; break;
        case TerminalStatus::MaxIters: ++agg.max_iters; break;
      }
      agg.fallback_steps += tr.fallback_steps;
      const auto it = iterations_to_tolerance(tr, cfg.solver.tol);
      const auto mc = macs_to_tolerance(tr, cfg.solver.tol);
      iters.push_back(it ? static_cast<double>(*it) : kInf);
      macs.push_back(mc ? static_cast<double>(*mc) : kInf);
    }
    agg.convergence_rate =
        static_cast<double>(agg.converged) / static_cast<double>(cfg.trials);
    agg.median_iters = finite_or_absent(order_stat(iters, 1, 2));
    agg.q1_iters = finite_or_absent(order_stat(iters, 1, 4));
    agg.q3_iters = finite_or_absent(order_stat(iters, 3, 4));
    agg.median_macs = finite_or_absent(order_stat(macs, 1, 2));
    summary.methods[std::string(method_name(cfg.methods[mi]))] = agg;
  }

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    const Method m = cfg.methods[mi];
    write_file(out_dir / ("trace_" + std::string(method_name(m)) + ".csv"),
               trace_csv(cfg, m, outputs, mi));
  }

  njson doc;
  doc["code_version"] = kVersion;
  doc["config_hash"] = summary.config_hash;
  doc["name"] = summary.name;
  doc["seed"] = summary.seed;
  doc["snr_db"] = summary.snr_db;
  doc["tol"] = summary.tol;
  doc["trials"] = summary.trials;
  doc["trial_input_hashes"] = summary.trial_input_hashes;
  njson methods_json;
  for (const auto& [name, agg] : summary.methods) methods_json[name] = aggregate_json(agg);
  doc["methods"] = methods_json;
  write_file(out_dir / "summary.json", doc.dump(2) + "\n");

  return summary;
}

Theorem1Report validate_theorem1(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.m_grid.size() < 2)
    throw ConfigError("theorem1: m_grid needs at least two array sizes");
  for (std::size_t i = 1; i < cfg.m_grid.size(); ++i)
    if (cfg.m_grid[i] <= cfg.m_grid[i - 1])
      throw ConfigError("theorem1: m_grid must be strictly increasing");
  if (!cfg.normalize_columns)
    throw ConfigError("theorem1: requires normalize_columns");

  Theorem1Report report;
  for (const std::size_t m : cfg.m_grid) {
    GeometryConfig gc = cfg.geometry;
    gc.num_service_antennas = m;
    const Geometry geo = build_geometry(gc);
    PathlossModel pl = cfg.pathloss();
    const RealMatrix d = pairwise_distances(geo);
    const CMatrix h_los = los_matrix(d, geo.wavelength_m, pl);
    const CMatrix a_inf = asymptotic_gram(h_los, cfg.kappa);
    const double denom = fro_norm(a_inf);

    double acc = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const CMatrix h_nlos = nlos_matrix(
          d, pl, derive_subseed(cfg.seed, t, StreamRole::NlosFading, m));
      const ChannelRealization ch = rician_combine(h_los, h_nlos, cfg.kappa);
      const CMatrix a = gram(ch.h);
      CMatrix diff = a;
      for (std::size_t i = 0; i < diff.entries().size(); ++i)
        diff.entries()[i] -= a_inf.entries()[i];
      acc += fro_norm(diff) / denom;
    }
    report.rows.push_back({m, acc / static_cast<double>(cfg.trials)});
  }

  report.strictly_decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (!(report.rows[i].mean_delta < report.rows[i - 1].mean_delta))
      report.strictly_decreasing = false;

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  std::string csv = "m,mean_delta\n";
  for (const Theorem1Row& row : report.rows)
    csv += std::to_string(row.m) + "," + fmt_double(row.mean_delta) + "\n";
  write_file(out_dir / "theorem1.csv", csv);
  return report;
}

FlopsReport verify_flops(const std::vector<std::size_t>& n_grid, std::uint64_t seed) {
  FlopsReport report;
  report.all_match = true;
  for (const std::size_t n : n_grid) {
    if (n == 0) throw ConfigError("verify_flops: n must be positive");
    ExperimentConfig cfg;
    cfg.geometry.num_service_antennas = 8 * n;
    cfg.geometry.num_users = n;
    cfg.geometry.antennas_per_user = 1;
    cfg.seed = derive_subseed(seed, n, StreamRole::Instance);
    const ExperimentBase base = make_base(cfg);
    const TrialSystem ts =
        make_trial_system(cfg, base, 0, noise_variance_for(20.0), 0);

    SolverConfig sc;
    sc.max_iters = 3;
    sc.tol = 0.0;
    sc.divergence_factor = 1e300;
    for (Method m : kAllMethods) {
      const IterationTrace tr = run(m, ts.sys, &ts.splitting, sc);
      const IterationRecord& last = tr.records.back();
      FlopsRow row;
      row.method = m;
      row.n = n;
      row.expected = 3 * cost_per_iteration(m, n);
      row.measured = last.cum_macs;
      if (last.iter != 3 || row.measured != row.expected) report.all_match = false;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<BerRow> ber_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const ExperimentBase base = make_base(cfg);
  const std::size_t num_snr = cfg.snr_db.size();
  const std::size_t num_rows = 1 + cfg.methods.size();  // oracle first

  struct Cell {
    double ber = 0.0;
    bool converged = false;
  };
  std::vector<std::vector<Cell>> cells(cfg.trials,
                                       std::vector<Cell>(num_snr * num_rows));

  for_each_trial(cfg.trials, cfg.workers, [&](std::size_t t) {
    for (std::size_t k = 0; k < num_snr; ++k) {
      const double noise_var = noise_variance_for(cfg.snr_db[k]);
      const TrialSystem ts = make_trial_system(cfg, base, t, noise_var, k);
      Cell& oracle = cells[t][k * num_rows];
      oracle.ber = ber(ts.bits, qam16_demodulate(ts.x_star));
      oracle.converged = true;
      for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        CVector final_x;
        const IterationTrace tr =
            run(cfg.methods[mi], ts.sys, &ts.splitting, cfg.solver, &ts.x_star,
                &final_x);
        Cell& cell = cells[t][k * num_rows + 1 + mi];
        cell.ber = ber(ts.bits, qam16_demodulate(final_x));
        cell.converged = tr.status == TerminalStatus::Converged;
      }
    }
  });

  std::vector<BerRow> rows;
  auto emit = [&](const std::string& name, std::size_t row_index) {
    for (std::size_t k = 0; k < num_snr; ++k) {
      BerRow row;
      row.method = name;
      row.snr_db = cfg.snr_db[k];
      row.trials = cfg.trials;
      std::vector<double> values;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const Cell& cell = cells[t][k * num_rows + row_index];
        row.mean_ber += cell.ber;
        row.converged += cell.converged;
        values.push_back(cell.ber);
      }
      row.mean_ber /= static_cast<double>(cfg.trials);
      row.median_ber = order_stat(values, 1, 2);
      rows.push_back(row);
    }
  };
  emit("oracle", 0);
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
    emit(std::string(method_name(cfg.methods[mi])), 1 + mi);

  const std::filesystem::path out_dir(cfg.output_dir);
  std::filesystem::create_directories(out_dir);
  std::string csv = "method,snr_db,mean_ber,median_ber,converged,trials\n";
  for (const BerRow& row : rows) {
    csv += row.method + "," + fmt_double(row.snr_db) + "," + fmt_double(row.mean_ber) +
           "," + fmt_double(row.median_ber) + "," + std::to_string(row.converged) +
           "," + std::to_string(row.trials) + "\n";
  }
  write_file(out_dir / "ber.csv", csv);
  return rows;
}

}  // namespace elaa

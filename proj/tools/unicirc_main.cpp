// Command-line front end: seeded, reproducible density grids, sample batches,
// Morris integral evaluation, analytic moments, and Monte Carlo verification
// reports, in CSV or JSON.
//
// Exit codes: 0 success, 1 bad flags, 2 domain errors (degenerate ensemble,
// unsupported beta, invalid parameters), 3 statistical failure in `verify`
// (the report is still emitted).
//
// stdout carries only data; diagnostics go to stderr.  Every artifact embeds
// the full run configuration and the library version, which is sufficient to
// reproduce it exactly.  Sampling shards the batch into fixed-size blocks,
// block i drawing from stream_id + i, so output is byte-identical for any
// worker count (capped by UNICIRC_THREADS).

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "unicirc/unicirc.hpp"

using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string command;
  int beta = 2;
  int N = 2;
  bool unimodular = true;
  long long count = 0;
  int grid_points = 512;
  int bins = 64;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::string format = "csv";
  std::string normalization = "total";
  std::string output_path;  // empty = stdout

  // morris
  int n_vars = 0;
  double a = 0.0, b = 0.0, lam = 0.0;
  // moments
  int k = 0;
  bool has_count = false;
  // verify
  bool expect_uniform = false;
};

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  if (cfg.command == "morris") {
    j["n_vars"] = cfg.n_vars;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["lam"] = cfg.lam;
  } else {
    j["beta"] = cfg.beta;
    j["N"] = cfg.N;
    j["unimodular"] = cfg.unimodular;
  }
  if (cfg.command == "density") {
    j["grid_points"] = cfg.grid_points;
    j["normalization"] = cfg.normalization;
  }
  if (cfg.command == "sample" || cfg.command == "verify" ||
      (cfg.command == "moments" && cfg.has_count)) {
    j["count"] = cfg.count;
    j["seed"] = cfg.seed;
    j["stream_id"] = cfg.stream_id;
  }
  if (cfg.command == "verify") {
    j["bins"] = cfg.bins;
    j["expect_uniform"] = cfg.expect_uniform;
  }
  if (cfg.command == "moments") j["k"] = cfg.k;
  j["format"] = cfg.format;
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Streams the artifact to --output or stdout.
void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) {
    throw unicirc::InvalidParams("cannot open output file " + cfg.output_path);
  }
  out << text;
}

std::string csv_preamble(const RunConfig& cfg) {
  return "# unicirc " + std::string(unicirc::kVersion) + "\n# config " +
         config_json(cfg).dump() + "\n";
}

int thread_cap() {
  if (const char* env = std::getenv("UNICIRC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic sharded sampling: block i of fixed size draws from
// RngStream{seed, stream_id + i} regardless of how many workers run.
std::vector<unicirc::PhaseVector> sample_sharded(
    const unicirc::EnsembleSpec& spec, long long count, std::uint64_t seed,
    std::uint64_t stream_id,
    unicirc::Beta2Path path = unicirc::Beta2Path::determinant_correction) {
  constexpr long long kShard = 8192;
  const long long n_shards = (count + kShard - 1) / kShard;
  std::vector<std::vector<unicirc::PhaseVector>> results(
      static_cast<std::size_t>(n_shards));

  std::atomic<long long> next{0};
  auto work = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= n_shards) break;
      const long long n =
          std::min(kShard, count - i * kShard);
      unicirc::PhiloxEngine rng{unicirc::RngStream{
          seed, stream_id + static_cast<std::uint64_t>(i)}};
      results[static_cast<std::size_t>(i)] =
          unicirc::sample_eigenphases(spec, static_cast<int>(n), rng, path);
    }
  };
  const int workers = static_cast<int>(
      std::min<long long>(thread_cap(), n_shards));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::vector<unicirc::PhaseVector> batch;
  batch.reserve(static_cast<std::size_t>(count));
  for (auto& shard : results) {
    for (auto& pv : shard) batch.push_back(std::move(pv));
  }
  return batch;
}

int run_density(const RunConfig& cfg) {
  const unicirc::EnsembleSpec spec{cfg.beta, cfg.N, cfg.unimodular};
  const auto norm = cfg.normalization == "per_eigenvalue"
                        ? unicirc::Normalization::per_eigenvalue
                        : unicirc::Normalization::total;
  const auto grid = unicirc::density_grid(spec, cfg.grid_points, norm);

  if (cfg.format == "json") {
    json out;
    out["version"] = unicirc::kVersion;
    out["config"] = config_json(cfg);
    json points = json::array();
    for (const auto& p : grid) {
      points.push_back({{"theta", p.theta}, {"rho", p.rho}});
    }
    out["points"] = points;
    emit(cfg, out.dump(2) + "\n");
  } else {
    std::string text = csv_preamble(cfg) + "theta,rho\n";
    for (const auto& p : grid) {
      text += fmt17(p.theta) + "," + fmt17(p.rho) + "\n";
    }
    emit(cfg, text);
  }
  return 0;
}

int run_sample(const RunConfig& cfg) {
  const unicirc::EnsembleSpec spec{cfg.beta, cfg.N, cfg.unimodular};
  if (!spec.samplable()) {
    throw unicirc::UnsupportedBeta(
        "sample: matrix models exist for beta in {1, 2, 4}");
  }
  if (cfg.count < 1) throw unicirc::InvalidParams("sample: count must be >= 1");
  const auto batch = sample_sharded(spec, cfg.count, cfg.seed, cfg.stream_id);

  if (cfg.format == "json") {
    json out;
    out["version"] = unicirc::kVersion;
    out["config"] = config_json(cfg);
    json samples = json::array();
    for (const auto& pv : batch) {
      json row = json::array();
      for (double p : pv.phases) row.push_back(p);
      samples.push_back(row);
    }
    out["samples"] = samples;
    emit(cfg, out.dump(2) + "\n");
  } else {
    std::string text = csv_preamble(cfg);
    for (int j = 0; j < cfg.N; ++j) {
      text += (j ? "," : "") + ("phase_" + std::to_string(j));
    }
    text += "\n";
    for (const auto& pv : batch) {
      for (std::size_t j = 0; j < pv.size(); ++j) {
        if (j) text += ",";
        text += fmt17(pv[j]);
      }
      text += "\n";
    }
    emit(cfg, text);
  }
  return 0;
}

int run_verify(const RunConfig& cfg) {
  const unicirc::EnsembleSpec spec{cfg.beta, cfg.N, cfg.unimodular};
  if (!spec.samplable()) {
    throw unicirc::UnsupportedBeta(
        "verify: matrix models exist for beta in {1, 2, 4}");
  }
  if (spec.unimodular && spec.N == 1) {
    throw unicirc::DegenerateEnsemble(
        "verify: unimodular N = 1 is an atom at theta = 0; no density to test");
  }
  const long long count = cfg.count > 0 ? cfg.count : 200000;

  // Expected density: the matching exact density, or the deliberately
  // mismatched flat one under --expect-uniform (a power diagnostic).
  const bool flat = cfg.expect_uniform || !spec.unimodular;
  auto density = [&](double theta) -> double {
    if (flat) return spec.N / unicirc::kTwoPi;
    return unicirc::closed_form_density(spec.beta, spec.N, theta);
  };

  const auto batch = sample_sharded(spec, count, cfg.seed, cfg.stream_id);
  const auto counts = unicirc::histogram(batch, unicirc::HistogramSpec{cfg.bins});
  auto report = unicirc::chi_square_gof(counts, density);

  std::vector<double> pooled;
  pooled.reserve(batch.size() * static_cast<std::size_t>(spec.N));
  for (const auto& pv : batch) {
    pooled.insert(pooled.end(), pv.phases.begin(), pv.phases.end());
  }
  std::sort(pooled.begin(), pooled.end());
  const unicirc::TabulatedCdf cdf(density);
  const auto ks = unicirc::ks_test(pooled, cdf);
  report.ks_statistic = ks.statistic;

  constexpr double kPThreshold = 1e-3;
  constexpr double kZThreshold = 4.0;
  const bool chi_pass = report.p_value > kPThreshold;
  const bool ks_pass = ks.p_value > kPThreshold;

  json tests;
  tests["chi_square"] = {{"statistic", report.chi_square},
                         {"dof", report.dof},
                         {"p_value", report.p_value},
                         {"bins_used", report.bins_used},
                         {"threshold", kPThreshold},
                         {"pass", chi_pass}};
  tests["ks"] = {{"statistic", ks.statistic},
                 {"p_value", ks.p_value},
                 {"threshold", kPThreshold},
                 {"pass", ks_pass},
                 {"note", "pooled eigenphases are dependent; diagnostic"}};

  bool all_pass = chi_pass && ks_pass;
  json moments = json::array();
  std::vector<int> ks_orders{spec.N};
  if (spec.beta == 4) ks_orders.push_back(2 * spec.N);
  for (int k : ks_orders) {
    const double analytic =
        flat ? 0.0
             : unicirc::trace_power_expectation(spec.beta, spec.N, k);
    const auto mc = unicirc::moment_check(batch, k, analytic);
    const bool pass = std::abs(mc.z_score) < kZThreshold;
    all_pass = all_pass && pass;
    moments.push_back({{"k", k},
                       {"analytic", analytic},
                       {"empirical", mc.empirical_mean},
                       {"standard_error", mc.standard_error},
                       {"z_score", mc.z_score},
                       {"threshold", kZThreshold},
                       {"pass", pass}});
  }
  tests["moments"] = moments;

  json out;
  out["version"] = unicirc::kVersion;
  out["config"] = config_json(cfg);
  out["sample_count"] = count;
  out["tests"] = tests;
  out["all_pass"] = all_pass;
  emit(cfg, out.dump(2) + "\n");
  return all_pass ? 0 : 3;
}

int run_morris(const RunConfig& cfg) {
  unicirc::MorrisParams p;
  p.n_vars = cfg.n_vars;
  p.a = cfg.a;
  p.b = cfg.b;
  p.lam = cfg.lam;
  // Parameters that are exact half-integers get the integer pole channel.
  const auto half = [](double x) -> std::optional<std::int64_t> {
    const double twice = 2.0 * x;
    if (twice == std::round(twice) && std::abs(twice) < 1e15) {
      return static_cast<std::int64_t>(twice);
    }
    return std::nullopt;
  };
  const auto a2 = half(cfg.a), b2 = half(cfg.b), l2 = half(cfg.lam);
  if (a2 && b2 && l2) {
    p.half_integer = unicirc::MorrisParams::TwiceInts{*a2, *b2, *l2};
  }
  const auto ev = unicirc::morris_integral_eval(p);

  if (cfg.format == "json") {
    json out;
    out["version"] = unicirc::kVersion;
    out["config"] = config_json(cfg);
    out["value"] = ev.value;
    out["exact_zero"] = ev.exact_zero;
    if (ev.exact_zero) {
      out["pole"] = {{"j", ev.pole_j}, {"gamma_argument", ev.pole_argument}};
    } else {
      out["pole"] = nullptr;
    }
    emit(cfg, out.dump(2) + "\n");
  } else {
    std::string text = csv_preamble(cfg) + "value,exact_zero,pole_j,pole_argument\n";
    text += fmt17(ev.value);
    text += ev.exact_zero ? ",true," + std::to_string(ev.pole_j) + "," +
                                fmt17(ev.pole_argument)
                          : ",false,,";
    text += "\n";
    emit(cfg, text);
  }
  return 0;
}

int run_moments(const RunConfig& cfg) {
  const unicirc::EnsembleSpec spec{cfg.beta, cfg.N, cfg.unimodular};
  spec.validate();
  const double analytic =
      spec.unimodular
          ? unicirc::trace_power_expectation(spec.beta, spec.N, cfg.k)
          : (cfg.k == 0 ? static_cast<double>(spec.N) : 0.0);

  std::optional<unicirc::MomentCheck> empirical;
  if (cfg.has_count) {
    if (!spec.samplable()) {
      throw unicirc::UnsupportedBeta(
          "moments: empirical estimates need beta in {1, 2, 4}");
    }
    const auto batch =
        sample_sharded(spec, cfg.count, cfg.seed, cfg.stream_id);
    empirical = unicirc::moment_check(batch, cfg.k, analytic);
  }

  if (cfg.format == "json") {
    json out;
    out["version"] = unicirc::kVersion;
    out["config"] = config_json(cfg);
    out["analytic"] = analytic;
    if (empirical) {
      out["empirical"] = empirical->empirical_mean;
      out["standard_error"] = empirical->standard_error;
      out["z_score"] = empirical->z_score;
    }
    emit(cfg, out.dump(2) + "\n");
  } else {
    std::string text = csv_preamble(cfg);
    if (empirical) {
      text += "analytic,empirical,standard_error,z_score\n";
      text += fmt17(analytic) + "," + fmt17(empirical->empirical_mean) + "," +
              fmt17(empirical->standard_error) + "," +
              fmt17(empirical->z_score) + "\n";
    } else {
      text += "analytic\n" + fmt17(analytic) + "\n";
    }
    emit(cfg, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"unicirc: eigenphase densities and samplers of unimodular "
               "circular ensembles"};
  app.require_subcommand(1);

  auto add_ensemble_flags = [&](CLI::App* sub) {
    sub->add_option("--beta", cfg.beta, "Dyson index");
    sub->add_option("--N", cfg.N, "number of eigenphases");
    sub->add_flag("--unimodular,!--no-unimodular", cfg.unimodular,
                  "impose det U = 1 (default on)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", cfg.output_path, "output path (default stdout)");
  };
  auto add_rng_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--stream-id", cfg.stream_id, "RNG stream id");
  };

  CLI::App* density = app.add_subcommand("density", "exact density grid");
  add_ensemble_flags(density);
  density->add_option("--grid-points", cfg.grid_points, "grid size")
      ->check(CLI::PositiveNumber);
  density->add_option("--normalization", cfg.normalization,
                      "total (mass N) or per_eigenvalue (mass 1)")
      ->check(CLI::IsMember({"total", "per_eigenvalue"}));

  CLI::App* sample = app.add_subcommand("sample", "draw eigenphase batches");
  add_ensemble_flags(sample);
  add_rng_flags(sample);
  sample->add_option("--count", cfg.count, "number of matrix draws")
      ->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "sample and test against the exact density");
  add_ensemble_flags(verify);
  add_rng_flags(verify);
  verify->add_option("--count", cfg.count, "number of matrix draws");
  verify->add_option("--bins", cfg.bins, "histogram bins")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--expect-uniform", cfg.expect_uniform,
                   "test against the flat density instead (power diagnostic)");

  CLI::App* morris = app.add_subcommand("morris", "Morris integral value");
  morris->add_option("--n-vars", cfg.n_vars, "integration variables")
      ->required();
  morris->add_option("--a", cfg.a)->required();
  morris->add_option("--b", cfg.b)->required();
  morris->add_option("--lam", cfg.lam)->required();
  morris->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  morris->add_option("--output", cfg.output_path, "output path");

  CLI::App* moments = app.add_subcommand(
      "moments", "analytic (and optionally empirical) trace moments");
  add_ensemble_flags(moments);
  add_rng_flags(moments);
  moments->add_option("--k", cfg.k, "harmonic index of E[sum e^{ik theta}]")
      ->required();
  auto* count_opt = moments->add_option("--count", cfg.count,
                                        "draws for the empirical estimate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  cfg.has_count = count_opt->count() > 0;

  try {
    if (density->parsed()) {
      cfg.command = "density";
      return run_density(cfg);
    }
    if (sample->parsed()) {
      cfg.command = "sample";
      return run_sample(cfg);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      return run_verify(cfg);
    }
    if (morris->parsed()) {
      cfg.command = "morris";
      return run_morris(cfg);
    }
    if (moments->parsed()) {
      cfg.command = "moments";
      return run_moments(cfg);
    }
  } catch (const unicirc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

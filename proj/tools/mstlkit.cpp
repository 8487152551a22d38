// mstlkit command-line interface.
//
// Subcommands:
//   decompose  - decompose a series file into trend/seasonal/remainder CSV
//   simulate   - generate synthetic ground-truth corpora
//   bootstrap  - moving-block-bootstrap replicates of a real series
//   bench      - decompose + score a corpus, print and save an RMSE report
//   aggregate  - resample a series to a coarser step (sum or mean)
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <mstlkit/mstlkit.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Maps --swin tokens: "periodic" or a positive odd integer.
std::vector<int> parse_swin(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) {
    if (t == "periodic") {
      out.push_back(mstlkit::kPeriodicWindow);
      continue;
    }
    try {
      std::size_t pos = 0;
      const int w = std::stoi(t, &pos);
      if (pos != t.size() || w < 1 || w % 2 == 0) throw std::invalid_argument(t);
      out.push_back(w);
    } catch (const std::exception&) {
      throw std::invalid_argument("--swin: '" + t + "' is not 'periodic' or a positive odd integer");
    }
  }
  return out;
}

void warn_dropped_periods(const std::vector<int>& declared, const std::vector<int>& retained,
                          std::size_t n) {
  std::vector<int> seen;
  for (int p : declared) {
    if (std::find(retained.begin(), retained.end(), p) != retained.end() &&
        std::find(seen.begin(), seen.end(), p) == seen.end()) {
      seen.push_back(p);
      continue;
    }
    if (p <= 1)
      std::cerr << "warning: dropping period " << p << " (not seasonal)\n";
    else if (std::find(seen.begin(), seen.end(), p) != seen.end())
      std::cerr << "warning: dropping duplicate period " << p << "\n";
    else
      std::cerr << "warning: dropping period " << p << " (series of length " << n
                << " spans fewer than two cycles)\n";
  }
}

// Seasonal windows actually used, mirroring the decomposition's fill rule.
std::vector<int> resolved_windows(const std::vector<int>& s_windows, std::size_t retained_count) {
  std::vector<int> out;
  for (std::size_t i = 0; i < retained_count; ++i) {
    if (i < s_windows.size())
      out.push_back(s_windows[i]);
    else
      out.push_back(mstlkit::default_s_windows(static_cast<int>(retained_count))[i]);
  }
  return out;
}

std::string window_list(const std::vector<int>& windows) {
  std::string s;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (i) s += ",";
    s += windows[i] == mstlkit::kPeriodicWindow ? "periodic" : std::to_string(windows[i]);
  }
  return s;
}

std::string int_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

struct DecomposeFlags {
  int iterate = 2;
  double lambda = 0.0;
  bool lambda_set = false;
  std::vector<std::string> swin_tokens;
  bool robust = false;
};

void add_decompose_flags(CLI::App* cmd, DecomposeFlags& f) {
  cmd->add_option("--iterate", f.iterate, "Seasonal refinement passes")->check(CLI::PositiveNumber);
  cmd->add_option("--lambda", f.lambda, "Box-Cox exponent in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->each([&f](const std::string&) { f.lambda_set = true; });
  cmd->add_option("--swin", f.swin_tokens,
                  "Seasonal windows per retained period: odd integers or 'periodic'")
      ->delimiter(',');
  cmd->add_flag("--robust", f.robust, "Robust inner fits (bisquare outer loop)");
}

mstlkit::MstlParams to_params(const DecomposeFlags& f) {
  mstlkit::MstlParams p;
  p.iterate = f.iterate;
  if (f.lambda_set) p.lambda = f.lambda;
  p.s_windows = parse_swin(f.swin_tokens);
  p.stl_overrides.robust = f.robust;
  return p;
}

std::vector<std::string> corpus_seasonal_names(const std::vector<int>& periods) {
  if (periods.size() == 2) return {"seasonal_short", "seasonal_long"};
  std::vector<std::string> names;
  names.reserve(periods.size());
  for (int p : periods) names.push_back("seasonal_" + std::to_string(p));
  return names;
}

unsigned default_threads() {
  if (const char* env = std::getenv("MSTLKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    std::cerr << "warning: ignoring invalid MSTLKIT_THREADS value '" << env << "'\n";
  }
  return 1;
}

int run_decompose(const std::string& input, const std::string& column,
                  const std::vector<int>& periods, const DecomposeFlags& flags,
                  const std::string& out_path) {
  const mstlkit::io::InputSeries in = mstlkit::io::read_series_csv(input, column);
  const std::vector<int> retained = mstlkit::retain_periods(periods, in.values.size());
  warn_dropped_periods(periods, retained, in.values.size());

  mstlkit::MultiSeasonalSeries series;
  series.values = in.values;
  series.periods = periods;
  const mstlkit::MstlParams params = to_params(flags);
  const mstlkit::Decomposition d = mstlkit::mstl_decompose(series, params);

  std::vector<std::string> comments;
  comments.push_back("periods: " + (retained.empty() ? std::string("none") : int_list(retained)));
  if (!retained.empty())
    comments.push_back("s_windows: " + window_list(resolved_windows(params.s_windows,
                                                                    retained.size())));
  comments.push_back("iterate: " + std::to_string(retained.size() == 1 ? 1 : params.iterate));
  if (params.lambda) comments.push_back("lambda: " + std::to_string(*params.lambda));
  if (flags.robust) comments.push_back("robust: true");
  mstlkit::io::write_decomposition_csv(out_path, d, in.timestamps, comments);
  std::cout << "wrote " << out_path << " (" << d.data.size() << " rows, "
            << d.seasonals.size() << " seasonal components)\n";
  return 0;
}

int run_simulate(const std::string& dgp, double alpha, double beta, double gamma, double sigma2,
                 const std::string& freq, std::size_t length, const std::string& noise,
                 int count, std::uint64_t seed, const std::string& outdir) {
  mstlkit::SimulationConfig cfg;
  cfg.dgp = dgp == "stochastic" ? mstlkit::Dgp::Stochastic : mstlkit::Dgp::Deterministic;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.gamma = gamma;
  cfg.sigma2 = sigma2;
  cfg.frequency = freq == "hourly" ? mstlkit::Frequency::Hourly : mstlkit::Frequency::Daily;
  cfg.length = length;
  cfg.seasonal_noise =
      noise == "iid" ? mstlkit::SeasonalNoise::Iid : mstlkit::SeasonalNoise::RandomWalk;

  fs::create_directories(outdir);
  std::vector<json> manifest;
  for (int i = 0; i < count; ++i) {
    cfg.seed = seed + static_cast<std::uint64_t>(i);
    const mstlkit::GroundTruth g = mstlkit::simulate_series(cfg);
    char name[32];
    std::snprintf(name, sizeof(name), "series_%04d.csv", i);
    mstlkit::io::CorpusSeries cs;
    cs.composite = g.composite;
    cs.trend = g.trend;
    cs.seasonal_names = {"seasonal_short", "seasonal_long"};
    cs.seasonals = {g.seasonal_short, g.seasonal_long};
    cs.remainder = g.remainder;
    mstlkit::io::write_corpus_csv(fs::path(outdir) / name, cs);
    manifest.push_back(json{{"path", name},
                            {"kind", "simulated"},
                            {"dgp", dgp},
                            {"frequency", freq},
                            {"alpha", alpha},
                            {"beta", beta},
                            {"gamma", gamma},
                            {"sigma2", sigma2},
                            {"length", g.composite.size()},
                            {"seed", cfg.seed},
                            {"periods", g.periods},
                            {"seasonal_noise", noise}});
  }
  mstlkit::io::write_manifest(fs::path(outdir) / "manifest.jsonl", manifest);
  std::cout << "wrote " << count << " series and manifest.jsonl to " << outdir << "\n";
  return 0;
}

int run_bootstrap(const std::string& input, const std::string& column,
                  const std::vector<int>& periods, const DecomposeFlags& flags, int replicates,
                  int block_length, std::uint64_t seed, bool identity,
                  const std::string& outdir) {
  const mstlkit::io::InputSeries in = mstlkit::io::read_series_csv(input, column);
  const std::size_t n = in.values.size();
  const std::vector<int> retained = mstlkit::retain_periods(periods, n);
  warn_dropped_periods(periods, retained, n);

  mstlkit::MultiSeasonalSeries series;
  series.values = in.values;
  series.periods = periods;
  const mstlkit::Decomposition d = mstlkit::mstl_decompose(series, to_params(flags));

  mstlkit::MbbConfig cfg;
  cfg.block_length = block_length;
  cfg.replicates = replicates;
  cfg.seed = seed;
  if (cfg.block_length == 0)
    cfg.block_length = static_cast<int>(mstlkit::default_block_length(n, d.periods));

  std::vector<std::vector<double>> reps;
  if (identity) {
    std::vector<double> base = d.trend;
    for (const auto& s : d.seasonals)
      for (std::size_t t = 0; t < n; ++t) base[t] += s[t];
    for (std::size_t t = 0; t < n; ++t) base[t] += d.remainder[t];
    reps.assign(static_cast<std::size_t>(replicates), base);
  } else {
    reps = mstlkit::perturb_series(in.values, d, cfg);
  }

  fs::create_directories(outdir);
  const std::vector<std::string> names = corpus_seasonal_names(d.periods);
  std::vector<json> manifest;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    char name[40];
    std::snprintf(name, sizeof(name), "replicate_%04d.csv", static_cast<int>(r));
    mstlkit::io::CorpusSeries cs;
    cs.composite = reps[r];
    cs.trend = d.trend;
    cs.seasonal_names = names;
    cs.seasonals = d.seasonals;
    cs.remainder = d.remainder;
    mstlkit::io::write_corpus_csv(fs::path(outdir) / name, cs);
    manifest.push_back(json{{"path", name},
                            {"kind", "bootstrap"},
                            {"periods", d.periods},
                            {"block_length", cfg.block_length},
                            {"seed", seed},
                            {"replicate", r},
                            {"source", input}});
  }
  mstlkit::io::write_manifest(fs::path(outdir) / "manifest.jsonl", manifest);
  std::cout << "wrote " << reps.size() << " replicates (block length " << cfg.block_length
            << ") to " << outdir << "\n";
  return 0;
}

int run_bench(const std::string& corpus, const DecomposeFlags& flags, unsigned threads,
              const std::string& report_path) {
  const mstlkit::EvaluationReport report =
      mstlkit::run_benchmark(corpus, to_params(flags), threads);

  for (const mstlkit::SeriesError& e : report.errors)
    std::cerr << "error: " << e.series_id << ": " << e.message << "\n";

  if (report.aggregate_defined) {
    const mstlkit::AggregateScores& a = report.aggregate;
    std::printf("%-16s %14s %14s\n", "component", "pooled RMSE", "mean RMSE");
    std::printf("%-16s %14.6f %14.6f\n", "trend", a.trend_pooled, a.trend_mean);
    for (std::size_t k = 0; k < a.seasonal_pooled.size(); ++k) {
      const std::string label = a.periods[k] > 0
                                    ? "seasonal_" + std::to_string(a.periods[k])
                                    : "seasonal_" + std::to_string(k + 1);
      std::printf("%-16s %14.6f %14.6f\n", label.c_str(), a.seasonal_pooled[k],
                  a.seasonal_mean[k]);
    }
    std::printf("%-16s %14.6f %14.6f\n", "remainder", a.remainder_pooled, a.remainder_mean);
  }
  std::printf("series: %zu ok, %zu failed; total %.3f s\n", report.series.size(),
              report.errors.size(), report.total_wall_seconds);

  if (!report_path.empty()) {
    const json j = report;
    mstlkit::io::atomic_write(report_path, j.dump(2) + "\n");
    std::cout << "wrote " << report_path << "\n";
  }
  return report.series.empty() ? 1 : 0;
}

int run_aggregate(const std::string& input, const std::string& column, double from_step,
                  double to_step, const std::string& mode, const std::string& out_path) {
  const double ratio_real = to_step / from_step;
  const long long ratio = std::llround(ratio_real);
  if (ratio < 1 || std::abs(ratio_real - static_cast<double>(ratio)) > 1e-9)
    throw std::invalid_argument("--to-step must be an integer multiple of --from-step");

  const mstlkit::io::InputSeries in = mstlkit::io::read_series_csv(input, column);
  const std::size_t k = static_cast<std::size_t>(ratio);
  const std::size_t groups = in.values.size() / k;
  const std::size_t leftover = in.values.size() - groups * k;
  if (leftover != 0)
    std::cerr << "warning: alignment: dropping " << leftover
              << " trailing rows that do not fill a full group\n";

  std::string out = "t," + in.value_column + "\n";
  for (std::size_t g = 0; g < groups; ++g) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += in.values[g * k + j];
    if (mode == "mean") acc /= static_cast<double>(k);
    out += in.timestamps.empty() ? std::to_string(g + 1) : in.timestamps[g * k];
    out += ',';
    if (std::isnan(acc))
      out += "";  // keep the missing-value convention: empty cell
    else
      out += mstlkit::io::detail::format_double(acc);
    out += '\n';
  }
  mstlkit::io::atomic_write(out_path, out);
  std::cout << "wrote " << out_path << " (" << groups << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mstlkit: multiple seasonal-trend decomposition toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  // decompose
  auto* dec = app.add_subcommand("decompose", "Decompose a series file");
  std::string dec_input, dec_column, dec_out;
  std::vector<int> dec_periods;
  DecomposeFlags dec_flags;
  dec->add_option("input", dec_input, "Series file (CSV; header row)")->required();
  dec->add_option("--periods", dec_periods, "Candidate seasonal periods")
      ->required()
      ->delimiter(',');
  dec->add_option("--column", dec_column, "Value column name");
  add_decompose_flags(dec, dec_flags);
  dec->add_option("--out", dec_out, "Output CSV path")->required();
  dec->callback([&] { rc = run_decompose(dec_input, dec_column, dec_periods, dec_flags, dec_out); });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic ground-truth corpus");
  std::string sim_dgp = "deterministic", sim_freq = "daily", sim_noise = "walk", sim_outdir;
  double sim_alpha = 1.0, sim_beta = 1.0, sim_gamma = 1.0, sim_sigma2 = 0.0;
  std::size_t sim_length = 0;
  int sim_count = 1;
  std::uint64_t sim_seed = 0;
  sim->add_option("--dgp", sim_dgp, "deterministic|stochastic")
      ->check(CLI::IsMember({"deterministic", "stochastic"}));
  sim->add_option("--alpha", sim_alpha, "Short-seasonal weight");
  sim->add_option("--beta", sim_beta, "Long-seasonal weight");
  sim->add_option("--gamma", sim_gamma, "Remainder weight");
  sim->add_option("--sigma2", sim_sigma2, "Per-cycle seasonal coefficient noise variance");
  sim->add_option("--freq", sim_freq, "daily|hourly")
      ->check(CLI::IsMember({"daily", "hourly"}));
  sim->add_option("--length", sim_length, "Series length (0 = frequency default)");
  sim->add_option("--seasonal-noise", sim_noise, "walk|iid seasonal coefficient noise")
      ->check(CLI::IsMember({"walk", "iid"}));
  sim->add_option("--count", sim_count, "Number of series")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "Base seed (series i uses seed+i)");
  sim->add_option("--outdir", sim_outdir, "Output directory")->required();
  sim->callback([&] {
    rc = run_simulate(sim_dgp, sim_alpha, sim_beta, sim_gamma, sim_sigma2, sim_freq, sim_length,
                      sim_noise, sim_count, sim_seed, sim_outdir);
  });

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "Moving-block-bootstrap replicates of a series");
  std::string boot_input, boot_column, boot_outdir;
  std::vector<int> boot_periods;
  DecomposeFlags boot_flags;
  int boot_replicates = 100, boot_block = 0;
  std::uint64_t boot_seed = 0;
  bool boot_identity = false;
  boot->add_option("input", boot_input, "Series file")->required();
  boot->add_option("--periods", boot_periods, "Candidate seasonal periods")
      ->required()
      ->delimiter(',');
  boot->add_option("--column", boot_column, "Value column name");
  add_decompose_flags(boot, boot_flags);
  boot->add_option("--replicates", boot_replicates, "Number of replicates")
      ->check(CLI::PositiveNumber);
  boot->add_option("--block-length", boot_block, "MBB block length (0 = 2*max period)")
      ->check(CLI::NonNegativeNumber);
  boot->add_option("--seed", boot_seed, "RNG seed (replicate r uses substream r)");
  boot->add_flag("--identity-resample", boot_identity)->group("");  // test hook, hidden
  boot->add_option("--outdir", boot_outdir, "Output directory")->required();
  boot->callback([&] {
    rc = run_bootstrap(boot_input, boot_column, boot_periods, boot_flags, boot_replicates,
                       boot_block, boot_seed, boot_identity, boot_outdir);
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Decompose and score a corpus");
  std::string bench_corpus, bench_report;
  DecomposeFlags bench_flags;
  unsigned bench_threads = default_threads();
  bench->add_option("--corpus", bench_corpus, "Manifest path (JSON lines)")->required();
  add_decompose_flags(bench, bench_flags);
  bench->add_option("--threads", bench_threads, "Worker threads (default MSTLKIT_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--report", bench_report, "JSON report output path");
  bench->callback([&] { rc = run_bench(bench_corpus, bench_flags, bench_threads, bench_report); });

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "Resample a series to a coarser step");
  std::string agg_input, agg_column, agg_out, agg_mode = "sum";
  double agg_from = 1.0, agg_to = 1.0;
  agg->add_option("input", agg_input, "Series file")->required();
  agg->add_option("--column", agg_column, "Value column name");
  agg->add_option("--from-step", agg_from, "Input step size")->required()
      ->check(CLI::PositiveNumber);
  agg->add_option("--to-step", agg_to, "Output step size")->required()
      ->check(CLI::PositiveNumber);
  agg->add_option("--mode", agg_mode, "sum|mean")->check(CLI::IsMember({"sum", "mean"}));
  agg->add_option("--out", agg_out, "Output CSV path")->required();
  agg->callback(
      [&] { rc = run_aggregate(agg_input, agg_column, agg_from, agg_to, agg_mode, agg_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // flag problems are validation failures
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

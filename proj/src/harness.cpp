#include "tssort/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tssort/baseline.hpp"
#include "tssort/noise.hpp"
#include "tssort/random.hpp"

namespace tssort {

namespace {

constexpr int kManifestSchema = 1;

std::string format_real(double value, int precision = 17) {
  char buf[64];
  auto res = precision > 0
                 ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision)
                 : std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::uint64_t noise_milli(double noise_level) {
  return static_cast<std::uint64_t>(std::llround(noise_level * 1000.0));
}

// Sum of squared displacements. The lists reaching here are permutations by
// construction, so the checked position_mse is not needed per step.
double fast_mse(std::span<const std::size_t> values) {
  std::int64_t total = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto d = static_cast<std::int64_t>(values[k]) - static_cast<std::int64_t>(k);
    total += d * d;
  }
  return static_cast<double>(total) / static_cast<double>(values.size());
}

std::optional<Baseline> as_baseline(SimAlgorithm algorithm) {
  switch (algorithm) {
    case SimAlgorithm::bubble:
      return Baseline::bubble;
    case SimAlgorithm::merge:
      return Baseline::merge;
    case SimAlgorithm::quick:
      return Baseline::quick;
    default:
      return std::nullopt;
  }
}

Algorithm as_session_algorithm(SimAlgorithm algorithm) {
  switch (algorithm) {
    case SimAlgorithm::elosort_partner:
      return Algorithm::elosort_partner;
    case SimAlgorithm::tssort_draw:
      return Algorithm::tssort_draw;
    case SimAlgorithm::tssort_wover:
      return Algorithm::tssort_wover;
    case SimAlgorithm::tssort_partner_wover:
      return Algorithm::tssort_partner_wover;
    default:
      throw std::invalid_argument(to_string(algorithm) + " is not a probabilistic sort");
  }
}

std::vector<double> run_probabilistic(const ExperimentConfig& config,
                                      std::span<const std::size_t> list, double noise_level,
                                      SimAlgorithm algorithm, std::uint64_t noise_seed) {
  const std::size_t n = list.size();
  SessionParams params = config.params;
  params.budget_multiplier = config.budget_multiplier;
  SortSession session(n, as_session_algorithm(algorithm), params);
  NoisyComparator oracle = identity_comparator(n, noise_level, noise_seed);

  std::vector<double> series;
  series.reserve(session.budget());
  std::vector<std::size_t> ascending(n);
  while (!session.is_finished()) {
    const PairChoice pair = session.next_pair();
    session.apply_outcome(pair, oracle.compare(list[pair.first], list[pair.second]));
    const auto order = session.order();
    for (std::size_t k = 0; k < n; ++k) ascending[k] = list[order[n - 1 - k]];
    series.push_back(fast_mse(ascending));
  }
  return series;
}

std::vector<double> run_classical(std::span<const std::size_t> list, double noise_level,
                                  Baseline baseline, std::uint64_t noise_seed) {
  NoisyComparator oracle = identity_comparator(list.size(), noise_level, noise_seed);
  std::vector<double> series;
  run_baseline(
      baseline, std::vector<std::size_t>(list.begin(), list.end()),
      [&](std::size_t lhs, std::size_t rhs) { return oracle.less(lhs, rhs); },
      [&](const StepView& view) { series.push_back(fast_mse(view.order)); });
  return series;
}

std::uint64_t digest_list(std::span<const std::size_t> list, std::uint64_t hash) {
  for (std::size_t value : list) {
    const auto v = static_cast<std::uint64_t>(value);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xff);
    hash = fnv1a64(std::string_view(bytes, 8), hash);
  }
  return hash;
}

std::string join_lengths(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + temp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("failed writing " + temp.string());
  }
  std::filesystem::rename(temp, path);
}

std::string render_manifest(const ExperimentConfig& config, const MatrixReport& report,
                            double total_seconds) {
  std::ostringstream m;
  m << "schema_version=" << kManifestSchema << '\n';
  m << "generator=" << kGeneratorName << '\n';
  m << "deviates=" << kDeviateScheme << '\n';
  m << "shuffle=fisher-yates over 0..n-1\n";
  m << "seed_derivation=splitmix64 chain over (base_seed,n,round(1000*noise),run,role); "
       "role shuffle=0 noise=1\n";
  m << "mse_normalization=mean over n\n";
  m << "std=population\n";
  m << "base_seed=" << config.base_seed << '\n';
  m << "lengths=" << join_lengths(config.lengths) << '\n';
  m << "noise_levels=";
  for (std::size_t i = 0; i < config.noise_levels.size(); ++i) {
    m << (i ? "," : "") << format_real(config.noise_levels[i], 0);
  }
  m << '\n';
  m << "runs=" << (config.runs ? std::to_string(*config.runs) : "128 if n<=64 else 64") << '\n';
  m << "algorithms=";
  for (std::size_t i = 0; i < config.algorithms.size(); ++i) {
    m << (i ? "," : "") << to_string(config.algorithms[i]);
  }
  m << '\n';
  m << "budget_multiplier=" << format_real(config.budget_multiplier, 0) << '\n';
  m << "trueskill.mu0=" << format_real(config.params.trueskill.mu0) << '\n';
  m << "trueskill.sigma0=" << format_real(config.params.trueskill.sigma0) << '\n';
  m << "trueskill.beta=" << format_real(config.params.trueskill.beta) << '\n';
  m << "trueskill.epsilon=" << format_real(config.params.trueskill.epsilon) << '\n';
  m << "elo.initial_score=" << format_real(config.params.elo.initial_score) << '\n';
  m << "elo.k_factor=" << format_real(config.params.elo.k_factor) << '\n';
  m << "elo.beta=" << format_real(config.params.elo.beta) << '\n';
  m << "wall_clock_seconds=" << format_real(total_seconds, 6) << '\n';
  m << "complete=" << (report.complete() ? "true" : "false") << '\n';
  m << "cells=" << report.cells.size() << '\n';
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    const CellStatus& cell = report.cells[i];
    const std::string key = "cell." + std::to_string(i) + ".";
    m << key << "algorithm=" << to_string(cell.algorithm) << '\n';
    m << key << "n=" << cell.n << '\n';
    m << key << "noise=" << format_real(cell.noise_level, 0) << '\n';
    m << key << "runs=" << cell.runs << '\n';
    m << key << "status=" << cell.status << '\n';
    if (cell.status == "done") {
      m << key << "file=" << cell.file << '\n';
      m << key << "fnv1a64=" << hex64(cell.checksum) << '\n';
      m << key << "shuffle_digest=" << hex64(cell.shuffle_digest) << '\n';
      m << key << "seconds=" << format_real(cell.seconds, 6) << '\n';
    }
    if (!cell.error.empty()) m << key << "error=" << cell.error << '\n';
  }
  return m.str();
}

}  // namespace

std::string to_string(SimAlgorithm algorithm) {
  switch (algorithm) {
    case SimAlgorithm::bubble:
      return "bubble";
    case SimAlgorithm::merge:
      return "merge";
    case SimAlgorithm::quick:
      return "quick";
    case SimAlgorithm::elosort_partner:
      return "elosort_partner";
    case SimAlgorithm::tssort_draw:
      return "tssort_draw";
    case SimAlgorithm::tssort_wover:
      return "tssort_wover";
    case SimAlgorithm::tssort_partner_wover:
      return "tssort_partner_wover";
  }
  return "?";
}

SimAlgorithm parse_sim_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (SimAlgorithm a : all_sim_algorithms()) {
    if (lower == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

const std::vector<SimAlgorithm>& all_sim_algorithms() {
  static const std::vector<SimAlgorithm> all{
      SimAlgorithm::bubble,          SimAlgorithm::merge,        SimAlgorithm::quick,
      SimAlgorithm::elosort_partner, SimAlgorithm::tssort_draw,  SimAlgorithm::tssort_wover,
      SimAlgorithm::tssort_partner_wover};
  return all;
}

bool is_probabilistic(SimAlgorithm algorithm) { return !as_baseline(algorithm).has_value(); }

void ExperimentConfig::validate() const {
  if (lengths.empty()) throw std::invalid_argument("lengths: at least one list length needed");
  for (std::size_t n : lengths) {
    if (n < 2) throw std::invalid_argument("lengths: every list length must be >= 2");
  }
  if (noise_levels.empty()) throw std::invalid_argument("noise: at least one level needed");
  for (double p : noise_levels) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise: levels must lie in [0, 1]");
  }
  if (runs && *runs < 1) throw std::invalid_argument("runs: must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("algorithms: at least one needed");
  if (!(budget_multiplier > 0.0) || !std::isfinite(budget_multiplier)) {
    throw std::invalid_argument("budget-multiplier: must be positive");
  }
}

std::size_t runs_for_length(const ExperimentConfig& config, std::size_t n) {
  if (config.runs) return *config.runs;
  return n <= 64 ? 128 : 64;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t n, double noise_level,
                       std::size_t run, SeedRole role) {
  return derive_seed({base_seed, static_cast<std::uint64_t>(n), noise_milli(noise_level),
                      static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(role)});
}

std::vector<std::size_t> initial_list(std::uint64_t base_seed, std::size_t n, double noise_level,
                                      std::size_t run) {
  Rng rng(run_seed(base_seed, n, noise_level, run, SeedRole::shuffle));
  return shuffled_identity(n, rng);
}

std::vector<double> simulate_run(const ExperimentConfig& config, std::size_t n, double noise_level,
                                 SimAlgorithm algorithm, std::size_t run) {
  const auto list = initial_list(config.base_seed, n, noise_level, run);
  const std::uint64_t noise_seed = run_seed(config.base_seed, n, noise_level, run, SeedRole::noise);
  if (auto baseline = as_baseline(algorithm)) {
    return run_classical(list, noise_level, *baseline, noise_seed);
  }
  return run_probabilistic(config, list, noise_level, algorithm, noise_seed);
}

CellResult run_cell_detailed(const ExperimentConfig& config, std::size_t n, double noise_level,
                             SimAlgorithm algorithm) {
  config.validate();
  const std::size_t runs = runs_for_length(config, n);
  std::vector<std::vector<double>> series(runs);
  std::vector<std::exception_ptr> errors(runs);

  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(runs));
  std::atomic<std::size_t> next_run{0};
  auto worker = [&] {
    for (std::size_t r = next_run++; r < runs; r = next_run++) {
      try {
        series[r] = simulate_run(config, n, noise_level, algorithm, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t r = 0; r < runs; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw std::runtime_error(to_string(algorithm) + " n=" + std::to_string(n) +
                               " noise=" + format_real(noise_level, 0) + " run " +
                               std::to_string(r) + ": " + e.what());
    }
  }

  CellResult result;
  result.shuffle_digest = 0xcbf29ce484222325ULL;
  for (std::size_t r = 0; r < runs; ++r) {
    result.shuffle_digest =
        digest_list(initial_list(config.base_seed, n, noise_level, r), result.shuffle_digest);
    const auto& s = series[r];
    if (std::find(s.begin(), s.end(), 0.0) != s.end()) ++result.runs_reaching_identity;
    if (!s.empty() && s.back() == 0.0) ++result.runs_ending_sorted;
  }
  result.curve = pad_and_aggregate(series, to_string(algorithm), n, noise_level);
  return result;
}

void write_curve_csv(const ConvergenceCurve& curve, std::ostream& out) {
  out << "algorithm,n,noise,step,mean_mse,std_mse,runs\n";
  const std::string prefix = curve.algorithm_label + ',' + std::to_string(curve.list_length) +
                             ',' + format_real(curve.noise_level, 0) + ',';
  for (const CurvePoint& point : curve.per_step) {
    out << prefix << point.step << ',' << format_real(point.mean_mse) << ','
        << format_real(point.std_mse) << ',' << point.run_count << '\n';
  }
}

std::string curve_file_name(SimAlgorithm algorithm, std::size_t n, double noise_level) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_n%04zu_p%03llu.csv", to_string(algorithm).c_str(), n,
                static_cast<unsigned long long>(noise_milli(noise_level)));
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool MatrixReport::complete() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const CellStatus& c) { return c.status == "done"; });
}

MatrixReport run_matrix(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                        std::ostream* progress) {
  config.validate();
  std::filesystem::create_directories(out_dir);

  MatrixReport report;
  for (std::size_t n : config.lengths) {
    for (double p : config.noise_levels) {
      for (SimAlgorithm a : config.algorithms) {
        CellStatus cell;
        cell.algorithm = a;
        cell.n = n;
        cell.noise_level = p;
        cell.runs = runs_for_length(config, n);
        report.cells.push_back(cell);
      }
    }
  }

  const auto manifest_path = out_dir / "manifest.txt";
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  write_atomically(manifest_path, render_manifest(config, report, 0.0));

  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    CellStatus& cell = report.cells[i];
    const auto cell_start = std::chrono::steady_clock::now();
    try {
      const CellResult result = run_cell_detailed(config, cell.n, cell.noise_level, cell.algorithm);
      std::ostringstream csv;
      write_curve_csv(result.curve, csv);
      cell.file = curve_file_name(cell.algorithm, cell.n, cell.noise_level);
      write_atomically(out_dir / cell.file, csv.str());
      cell.checksum = fnv1a64(csv.str());
      cell.shuffle_digest = result.shuffle_digest;
      cell.status = "done";
    } catch (const std::exception& e) {
      cell.status = "failed";
      cell.error = e.what();
    }
    cell.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - cell_start).count();
    if (progress) {
      *progress << '[' << (i + 1) << '/' << report.cells.size() << "] "
                << to_string(cell.algorithm) << " n=" << cell.n
                << " noise=" << format_real(cell.noise_level, 0) << ' ' << cell.status;
      if (!cell.error.empty()) *progress << ": " << cell.error;
      *progress << '\n';
    }
    write_atomically(manifest_path, render_manifest(config, report, elapsed()));
  }
  return report;
}

}  // namespace tssort

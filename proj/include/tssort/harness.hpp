#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tssort/metrics.hpp"
#include "tssort/session.hpp"

namespace tssort {

/// Every sorter the experiment matrix can run.
enum class SimAlgorithm {
  bubble,
  merge,
  quick,
  elosort_partner,
  tssort_draw,
  tssort_wover,
  tssort_partner_wover,
};

std::string to_string(SimAlgorithm algorithm);
SimAlgorithm parse_sim_algorithm(std::string_view name);
const std::vector<SimAlgorithm>& all_sim_algorithms();
bool is_probabilistic(SimAlgorithm algorithm);

struct ExperimentConfig {
  std::vector<std::size_t> lengths{8, 16, 32, 64, 128, 256, 512};
  std::vector<double> noise_levels{0.0, 0.1};
  /// Runs per cell; unset means 128 for n <= 64 and 64 above.
  std::optional<std::size_t> runs;
  std::vector<SimAlgorithm> algorithms = all_sim_algorithms();
  std::uint64_t base_seed = 0;
  double budget_multiplier = 1.0;
  /// Worker threads per cell; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Rating-model parameters; the budget multiplier above takes precedence.
  SessionParams params;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

std::size_t runs_for_length(const ExperimentConfig& config, std::size_t n);

enum class SeedRole : std::uint64_t { shuffle = 0, noise = 1 };

/// Hash of (base_seed, n, round(1000 p), run, role).
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t n, double noise_level,
                       std::size_t run, SeedRole role);

/// The shuffled list every algorithm of run `run` starts from.
std::vector<std::size_t> initial_list(std::uint64_t base_seed, std::size_t n, double noise_level,
                                      std::size_t run);

/// Position MSE after every comparison of one run.
std::vector<double> simulate_run(const ExperimentConfig& config, std::size_t n, double noise_level,
                                 SimAlgorithm algorithm, std::size_t run);

struct CellResult {
  ConvergenceCurve curve;
  /// FNV-1a over the initial lists of all runs, in run order.
  std::uint64_t shuffle_digest = 0;
  /// Runs whose list was exactly sorted at some comparison.
  std::size_t runs_reaching_identity = 0;
  /// Runs whose list was exactly sorted after the last comparison.
  std::size_t runs_ending_sorted = 0;
};

CellResult run_cell_detailed(const ExperimentConfig& config, std::size_t n, double noise_level,
                             SimAlgorithm algorithm);

inline ConvergenceCurve run_cell(const ExperimentConfig& config, std::size_t n,
                                 double noise_level, SimAlgorithm algorithm) {
  return run_cell_detailed(config, n, noise_level, algorithm).curve;
}

/// Curve CSV: header `algorithm,n,noise,step,mean_mse,std_mse,runs`, LF
/// line endings, reals printed with 17 significant digits.
void write_curve_csv(const ConvergenceCurve& curve, std::ostream& out);
std::string curve_file_name(SimAlgorithm algorithm, std::size_t n, double noise_level);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);

struct CellStatus {
  SimAlgorithm algorithm;
  std::size_t n = 0;
  double noise_level = 0.0;
  std::size_t runs = 0;
  std::string status = "pending";  // pending | done | failed
  std::string file;
  std::uint64_t checksum = 0;
  std::uint64_t shuffle_digest = 0;
  double seconds = 0.0;
  std::string error;
};

struct MatrixReport {
  std::vector<CellStatus> cells;
  bool complete() const;
};

/// Runs every (n, p, algorithm) cell, writing one curve CSV per cell and a
/// `manifest.txt` into `out_dir`. The manifest is rewritten after every cell
/// so an interrupted run leaves a record of what finished. A failing cell is
/// reported and the remaining cells still run.
MatrixReport run_matrix(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                        std::ostream* progress = nullptr);

}  // namespace tssort

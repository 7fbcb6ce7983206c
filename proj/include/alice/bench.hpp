#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alice/config.hpp"
#include "alice/metrics.hpp"
#include "alice/oracles.hpp"

namespace alice {

struct Rollout {
  std::string controller;
  std::uint64_t seed = 0;
  std::vector<RolloutRecord> records;
  /// Step at which the divergence guard fired, if it did.
  std::optional<std::int64_t> diverged_at;
  /// Digest of the process-noise sequence this rollout consumed.
  std::uint64_t noise_digest = 0;

  std::vector<double> losses() const;
};

struct RunResult {
  ExperimentConfig config;
  /// K* of the initial A; absent when that pair is not stabilizable.
  std::optional<LqrSolution> lqr;
  /// Ordered by seed, then by the configured controller order.
  std::vector<Rollout> rollouts;

  bool all_diverged() const;
  const Rollout* find(std::string_view controller, std::uint64_t seed) const;
  std::vector<const Rollout*> by_controller(std::string_view controller) const;
};

/// One rollout of length config.horizon (or until divergence). Regret is left
/// empty; run_experiment fills it from the lqr_oracle rollout on the same seed.
Rollout simulate(const ExperimentConfig& config, std::string_view controller, std::uint64_t seed,
                 const std::optional<LqrSolution>& lqr);

/// Worker count from ALICE_WORKERS, else the hardware concurrency.
unsigned default_workers();

/// All (controller, seed) rollouts with common process noise per seed.
RunResult run_experiment(const ExperimentConfig& config, unsigned workers = 0);

enum class Metric { x_norm2, x_norm_inf, loss, cum_loss, regret, gain_drift, zeta };
inline constexpr std::array<Metric, 7> kMetrics = {Metric::x_norm2, Metric::x_norm_inf, Metric::loss,
                                                   Metric::cum_loss, Metric::regret, Metric::gain_drift,
                                                   Metric::zeta};
std::string_view to_string(Metric metric);

struct Quartiles {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct AggregateRow {
  std::int64_t t = 0;
  std::size_t seeds = 0;
  std::array<std::optional<Quartiles>, kMetrics.size()> stats;

  const std::optional<Quartiles>& operator[](Metric m) const { return stats[static_cast<std::size_t>(m)]; }
};

/// Per-step median and quartiles across seeds for one controller.
std::vector<AggregateRow> aggregate(const RunResult& run, std::string_view controller);

/// Median curve of one metric; NaN where no seed reported a value.
std::vector<double> median_curve(const std::vector<AggregateRow>& rows, Metric metric);

inline constexpr std::string_view kRolloutCsvHeader =
    "t,seed,controller,x_norm2,x_norm_inf,loss,cum_loss,regret,gain_drift,zeta,constraint_active,mode,converged";

void write_rollouts_csv(const RunResult& run, std::ostream& out);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);

/// rollouts.csv, aggregate_<controller>.csv, manifest.json and, when
/// emit_svg is set, regret.svg and state_norm.svg. Returns the files written.
std::vector<std::filesystem::path> write_outputs(const RunResult& run, const std::filesystem::path& out_dir);

/// Reads manifest.json and rollouts.csv back from a run directory.
RunResult load_run(const std::filesystem::path& run_dir);

struct CompareRow {
  std::string controller;
  std::optional<double> terminal_median_regret;
  double steady_state_norm = 0.0;
  std::optional<double> contraction_frequency;
  std::optional<double> convergence_rate;
  std::size_t diverged = 0;
  std::size_t rollouts = 0;
  /// The median state norm keeps growing over the run.
  bool growing = false;
};

std::vector<CompareRow> compare(const RunResult& run);
std::string format_compare(const std::vector<CompareRow>& rows);

}  // namespace alice

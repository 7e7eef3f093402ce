#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrtsim/stats.hpp"

namespace rrtsim {

enum class PlanKind { hit_time, cover_time, post_cover, nnt_stats, coupon };

std::string to_string(PlanKind k);
std::optional<PlanKind> plan_kind_from_string(const std::string& s);

/// Declarative description of a replicated experiment.  Replica r of a
/// configuration runs on RngStream(seed, stream_base(config) ^ r), so results
/// are independent of scheduling and parallelism degree.
struct ExperimentPlan {
  PlanKind kind = PlanKind::hit_time;
  int d = 2;
  std::vector<double> epsilons;  // hit_time / cover_time panel
  double epsilon = 0.0;          // post_cover step; nnt_stats RRT arm (0 = NNT only)
  std::int64_t n = 0;            // growth target (post_cover, nnt_stats) / coupon classes
  std::int64_t max_steps = 0;    // censoring cap (hit_time, cover_time)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double threshold = 0.5;        // hit_time: hit means newest vertex has x0 >= threshold
  std::vector<std::int64_t> checkpoints;  // post_cover row schedule (default: {n})
  int parallelism = 1;
};

/// One aggregate output row.  `kind` is the plan kind, optionally suffixed
/// with "/statistic" for runners that emit several statistics or reference
/// curves.  Censored trials are counted here and never enter the mean.
struct AggregateRow {
  std::string kind;
  int d = 2;
  double epsilon = 0.0;
  std::int64_t n_or_step = 0;
  std::int64_t trials = 0;
  double mean = 0.0;
  double ci95 = 0.0;
  std::int64_t censored = 0;
};

struct RunResult {
  std::vector<AggregateRow> rows;
  std::optional<LinFit> fit;     // hit_time exponent / cover_time scaling fit
  std::vector<std::string> raw;  // per-trial lines "stat,epsilon,n_or_step,trial,value"
  std::int64_t trials = 0;       // total trials across the panel
  std::int64_t censored = 0;

  [[nodiscard]] double censored_fraction() const {
    return trials == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(trials);
  }
};

/// Steps until the newest RRT vertex enters the half-space x0 >= threshold;
/// panel over plan.epsilons; trees rooted at the origin.  Adds a
/// "hit_time/fit_exponent" row from the log-log fit of mean vs 1/epsilon.
RunResult run_hit_time(const ExperimentPlan& plan, bool keep_raw = false);

/// Steps until the occupancy grid is full; panel over plan.epsilons.  Emits
/// reference rows alongside each measurement: "/ref_lower" (ball-packing
/// lower bound (beta/2^d) H_floor(beta)), "/ref_upper" (ideal-cell coupon
/// bound alpha H_ceil(alpha)) and "/ref_upper_grid" (the same coupon bound
/// evaluated at the measured grid's actual cell count m^d, which is the sharp
/// one for the integer-resolution certificate grid), plus a "/fit_slope" row
/// for
/// mean * epsilon^d against ln(1/epsilon).
RunResult run_cover_time(const ExperimentPlan& plan, bool keep_raw = false);

/// Grows RRTs (step plan.epsilon) to plan.n; at every checkpoint c emits
/// per-trial statistics aggregated across trials:
///   delta_scaled  running mean of edge_length(j) * sqrt(pi j) over j in (c/2, c]
///   cum_over_sqrt total edge length through c divided by sqrt(c)
///   root_path     root-path length of vertex c
///   depth         depth of vertex c
///   height        tree height at size c+1
RunResult run_post_cover(const ExperimentPlan& plan, bool keep_raw = false);

/// Grows NNTs (root drawn uniformly) to plan.n and reports depth/height at n,
/// their ratios to ln n, and the tail-window delta_scaled mean; runs the
/// index-walk depth oracle side by side ("/oracle_depth" row) and reports the
/// two-sample KS statistic between measured and oracle depths ("/depth_ks").
/// With plan.epsilon > 0 an RRT arm (root also drawn uniformly, so the arms
/// differ only in growth mechanism) emits the same statistics under "/rrt_*".
RunResult run_nnt_stats(const ExperimentPlan& plan, bool keep_raw = false);

/// Classic coupon collector over plan.n classes; emits the simulated mean and
/// the closed-form "/expected" row (n * H_n).
RunResult run_coupon(const ExperimentPlan& plan, bool keep_raw = false);

/// Dispatch on plan.kind.
RunResult run_plan(const ExperimentPlan& plan, bool keep_raw = false);

/// Height sqrt(delta^2 + z^2) - z of the spherical cap cut from a ball of
/// radius delta around a point at distance z behind a hyperplane; the
/// per-draw progress geometry of the half-space hitting experiment.
/// Requires delta >= 0 and z > 0; decreasing in z, zero at delta = 0.
double cap_height(double delta, double z);

/// Per-configuration stream base (FNV-1a over the canonical configuration
/// string; excludes seed, trials and parallelism so adding replicas or
/// threads never changes existing trajectories).
std::uint64_t stream_base(const ExperimentPlan& plan, double epsilon_or_zero);

/// CSV with the pinned schema kind,d,epsilon,n_or_step,trials,mean,ci95,censored.
std::string rows_to_csv(const std::vector<AggregateRow>& rows);

/// The same rows as JSON: {"meta": {...generator/seed/plan...}, "rows": [...]}.
std::string rows_to_json(const std::vector<AggregateRow>& rows, const ExperimentPlan& plan);

/// Raw per-trial lines as CSV (header stat,epsilon,n_or_step,trial,value).
std::string raw_to_csv(const std::vector<std::string>& raw_lines);

/// Writes content to path via a temp file and an atomic rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// Runs body(trial) for trial in [0, trials) across `parallelism` threads.
/// Bodies must write only to trial-indexed slots; aggregation stays
/// order-independent.  Exceptions are rethrown on the caller thread.
void parallel_for_trials(std::int64_t trials, int parallelism,
                         const std::function<void(std::int64_t)>& body);

}  // namespace rrtsim

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cocarry/sim.hpp"

namespace cocarry {

struct CompletionResult {
  double t_c = 0.0;
  bool completed = false;
};

/// Elapsed time to the completion of the last scripted sub-movement; on a
/// timeout the maximum duration is returned with completed = false.
CompletionResult completion_time(const SimLog& log);

/// Time-averaged deviation of the human-robot relative displacement from its
/// value in the first record.
double alignment_metric(const SimLog& log);

struct IntervalStats {
  double mean_alpha = 0.0;
  double std_alpha = 0.0;
  double mean_force = 0.0;  ///< mean ||F_H|| [N]
  std::size_t samples = 0;
};

struct IntervalReport {
  std::string controller;
  std::map<IntervalLabel, IntervalStats> intervals;
  CompletionResult completion;
  double alignment = 0.0;       ///< [m]
  double pause_time = 0.0;      ///< [s]
  double corrective_effort = 0.0;  ///< integral of ||F_H|| dt [N s], effort proxy
  std::size_t unlabeled_records = 0;
};

/// Groups the log by interval label and computes per-interval statistics
/// plus the run-level metrics.
IntervalReport interval_stats(const SimLog& log);

struct IntervalDelta {
  double d_mean_alpha = 0.0;
  double d_mean_force = 0.0;
};

struct ComparisonSummary {
  std::string controller_a;
  std::string controller_b;
  double d_completion_time = 0.0;  ///< a - b [s]
  double d_alignment = 0.0;        ///< a - b [m]
  std::map<IntervalLabel, IntervalDelta> intervals;
};

/// Paired differences (a - b) of two runs of the same scenario geometry.
/// Throws ConfigError when the interval sets differ.
ComparisonSummary compare_controllers(const IntervalReport& a, const IntervalReport& b);

/// Human-readable summary, key: value lines grouped by interval.
std::string report_to_text(const IntervalReport& report);

/// Comma-separated per-interval table for plotting.
std::string report_to_csv(const IntervalReport& report);

std::string comparison_to_text(const ComparisonSummary& cmp);

}  // namespace cocarry

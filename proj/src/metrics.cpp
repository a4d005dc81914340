#include "cocarry/metrics.hpp"

#include <cmath>
#include <sstream>

namespace cocarry {

CompletionResult completion_time(const SimLog& log) {
  if (log.records.empty()) {
    throw ConfigError("completion time of an empty log");
  }
  return {log.completion_time, log.completed};
}

double alignment_metric(const SimLog& log) {
  if (log.records.empty()) {
    throw ConfigError("alignment metric of an empty log");
  }
  const Vec3 start_offset = log.records.front().robot_pos - log.records.front().human_pos;
  double sum = 0.0;
  for (const SimRecord& rec : log.records) {
    sum += ((rec.robot_pos - rec.human_pos) - start_offset).norm();
  }
  return sum / static_cast<double>(log.records.size());
}

IntervalReport interval_stats(const SimLog& log) {
  if (log.records.empty()) {
    throw ConfigError("interval statistics of an empty log");
  }
  IntervalReport report;
  report.controller = log.controller;
  report.completion = completion_time(log);
  report.alignment = alignment_metric(log);
  report.pause_time = log.pause_time;

  struct Accumulator {
    double alpha_sum = 0.0;
    double alpha_sq_sum = 0.0;
    double force_sum = 0.0;
    std::size_t n = 0;
  };
  std::map<IntervalLabel, Accumulator> acc;
  for (const SimRecord& rec : log.records) {
    report.corrective_effort += rec.f_h.norm() * log.dt;
    if (rec.label == IntervalLabel::none) {
      ++report.unlabeled_records;
      continue;
    }
    Accumulator& a = acc[rec.label];
    a.alpha_sum += rec.alpha;
    a.alpha_sq_sum += rec.alpha * rec.alpha;
    a.force_sum += rec.f_h.norm();
    ++a.n;
  }
  for (const auto& [label, a] : acc) {
    IntervalStats stats;
    stats.samples = a.n;
    const double n = static_cast<double>(a.n);
    stats.mean_alpha = a.alpha_sum / n;
    const double var = std::max(0.0, a.alpha_sq_sum / n - stats.mean_alpha * stats.mean_alpha);
    stats.std_alpha = std::sqrt(var);
    stats.mean_force = a.force_sum / n;
    report.intervals[label] = stats;
  }
  return report;
}

ComparisonSummary compare_controllers(const IntervalReport& a, const IntervalReport& b) {
  if (a.intervals.size() != b.intervals.size()) {
    throw ConfigError("interval sets of the two reports differ");
  }
  ComparisonSummary cmp;
  cmp.controller_a = a.controller;
  cmp.controller_b = b.controller;
  cmp.d_completion_time = a.completion.t_c - b.completion.t_c;
  cmp.d_alignment = a.alignment - b.alignment;
  for (const auto& [label, stats_a] : a.intervals) {
    const auto it = b.intervals.find(label);
    if (it == b.intervals.end()) {
      throw ConfigError(std::string("interval missing from second report: ") + to_string(label));
    }
    IntervalDelta delta;
    delta.d_mean_alpha = stats_a.mean_alpha - it->second.mean_alpha;
    delta.d_mean_force = stats_a.mean_force - it->second.mean_force;
    cmp.intervals[label] = delta;
  }
  return cmp;
}

std::string report_to_text(const IntervalReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << "controller: " << report.controller << "\n";
  out << "completed: " << (report.completion.completed ? "yes" : "no") << "\n";
  out << "completion_time_s: " << report.completion.t_c << "\n";
  out << "alignment_m: " << report.alignment << "\n";
  out << "pause_time_s: " << report.pause_time << "\n";
  out << "corrective_effort_Ns: " << report.corrective_effort
      << "  # force-integral proxy, not a physiological measure\n";
  out << "unlabeled_records: " << report.unlabeled_records << "\n";
  for (const auto& [label, stats] : report.intervals) {
    out << "\n[" << to_string(label) << "]\n";
    out << "mean_alpha: " << stats.mean_alpha << "\n";
    out << "std_alpha: " << stats.std_alpha << "\n";
    out << "mean_force_N: " << stats.mean_force << "\n";
    out << "samples: " << stats.samples << "\n";
  }
  return out.str();
}

std::string report_to_csv(const IntervalReport& report) {
  std::ostringstream out;
  out.precision(9);
  out << "interval,mean_alpha,std_alpha,mean_force,samples\n";
  for (const auto& [label, stats] : report.intervals) {
    out << to_string(label) << ',' << stats.mean_alpha << ',' << stats.std_alpha << ','
        << stats.mean_force << ',' << stats.samples << "\n";
  }
  return out.str();
}

std::string comparison_to_text(const ComparisonSummary& cmp) {
  std::ostringstream out;
  out.precision(6);
  out << "controller_a: " << cmp.controller_a << "\n";
  out << "controller_b: " << cmp.controller_b << "\n";
  out << "d_completion_time_s: " << cmp.d_completion_time << "\n";
  out << "d_alignment_m: " << cmp.d_alignment << "\n";
  for (const auto& [label, delta] : cmp.intervals) {
    out << "\n[" << to_string(label) << "]\n";
    out << "d_mean_alpha: " << delta.d_mean_alpha << "\n";
    out << "d_mean_force_N: " << delta.d_mean_force << "\n";
  }
  return out.str();
}

}  // namespace cocarry

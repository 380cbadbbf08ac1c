#pragma once

#include <map>
#include <string>
#include <vector>

#include "regimes/core.hpp"

namespace regimes {

/// Regime labels in time order; `h` records the lag count that produced a
/// smoothed series (0 for raw assignments).
struct LabelSeries {
  std::vector<std::string> labels;
  int h = 0;

  std::size_t size() const { return labels.size(); }
};

/// Simple-majority moving-window smoothing.
///
/// Position t keeps its original label while t <= h (1-based). Afterwards the
/// trailing window [t-h, t] of h+1 ORIGINAL labels votes; a label wins only
/// with a strict majority (count > (h+1)/2), otherwise the original label
/// stays. Votes never read previously smoothed values.
inline LabelSeries majority_smooth(const LabelSeries& in, int h) {
  if (h < 0) throw config_error("lag count must be nonnegative");
  const std::size_t T = in.size();
  LabelSeries out;
  out.h = h;
  out.labels = in.labels;
  const std::size_t window = static_cast<std::size_t>(h) + 1;
  const double majority = static_cast<double>(window) / 2.0;
  for (std::size_t i = static_cast<std::size_t>(h); i < T; ++i) {
    std::map<std::string, int> counts;
    for (std::size_t j = i + 1 - window; j <= i; ++j) ++counts[in.labels[j]];
    for (const auto& [label, count] : counts) {
      if (static_cast<double>(count) > majority) {
        out.labels[i] = label;
        break;  // a strict majority is unique
      }
    }
  }
  return out;
}

/// Number of positions t >= 2 with labels[t] != labels[t-1].
inline int count_regime_changes(const LabelSeries& s) {
  int changes = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s.labels[i] != s.labels[i - 1]) ++changes;
  return changes;
}

/// Number of positions where the two series disagree.
inline int diff_vs_reference(const LabelSeries& a, const LabelSeries& b) {
  if (a.size() != b.size()) throw data_error("label series length mismatch");
  int diffs = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.labels[i] != b.labels[i]) ++diffs;
  return diffs;
}

}  // namespace regimes

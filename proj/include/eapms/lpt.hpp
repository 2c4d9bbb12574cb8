#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "eapms/core.hpp"

namespace eapms {

namespace detail {

// Final per-machine task counts after placing `n` tasks of duration `d` one at
// a time on the least-loaded machine (ties to the lowest index), computed in
// time independent of n. Machine k would receive its (t+1)-th task at level
// loads[k] + t*d, and the per-task rule as a whole takes the n smallest levels
// (ties by machine index), so a binary search for the cutoff level recovers
// every count without walking tasks.
inline std::vector<long long> bulk_least_loaded_fill(
    const std::vector<double>& loads, double d, long long n) {
  const int m = static_cast<int>(loads.size());
  std::vector<long long> fill(m, 0);
  if (n <= 0) return fill;
  // Levels of machine k at or below w: t in [0, floor((w - loads[k]) / d)],
  // capped at n since no machine ever needs more.
  auto levels_at_or_below = [&](double w) -> long long {
    long long total = 0;
    for (int k = 0; k < m; ++k) {
      if (!(loads[k] <= w)) continue;
      double q = std::floor((w - loads[k]) / d);
      total += q >= static_cast<double>(n) ? n : static_cast<long long>(q) + 1;
    }
    return total;
  };
  double lo = *std::min_element(loads.begin(), loads.end());
  double hi = *std::max_element(loads.begin(), loads.end()) +
              d * static_cast<double>(n);
  if (levels_at_or_below(lo) >= n) {
    hi = lo;  // the n-th smallest level is the smallest starting load
  } else {
    while (true) {  // invariant: count(lo) < n <= count(hi)
      double mid = lo + (hi - lo) / 2.0;
      if (mid <= lo || mid >= hi) break;
      (levels_at_or_below(mid) >= n ? hi : lo) = mid;
    }
  }
  const double cutoff = hi;
  const double below = std::nextafter(cutoff, -std::numeric_limits<double>::infinity());
  long long assigned = 0;
  for (int k = 0; k < m; ++k) {  // levels strictly under the cutoff
    if (!(loads[k] <= below)) continue;
    double q = std::floor((below - loads[k]) / d);
    fill[k] = q >= static_cast<double>(n) ? n : static_cast<long long>(q) + 1;
    assigned += fill[k];
  }
  for (int k = 0; k < m && assigned < n; ++k) {
    // Levels exactly at the cutoff go to the lowest machine indices first,
    // matching the per-task tie rule.
    if (!(loads[k] <= cutoff)) continue;
    double q = std::floor((cutoff - loads[k]) / d);
    long long at_cutoff =
        (q >= static_cast<double>(n) ? n : static_cast<long long>(q) + 1) - fill[k];
    if (at_cutoff <= 0) continue;
    long long take = std::min(at_cutoff, n - assigned);
    fill[k] += take;
    assigned += take;
  }
  require(assigned == n, ErrorCode::Internal, "bulk fill lost tasks");
  return fill;
}

}  // namespace detail

// Whole tasks of duration `exec_time` that fit on a machine at `load` without
// pushing it past `avg_load`.
inline long long batch_fill_count(double avg_load, double load, double exec_time) {
  require(exec_time > 0.0, ErrorCode::Contract, "execution time must be positive");
  double q = std::floor((avg_load - load) / exec_time);
  return q > 0.0 ? static_cast<long long>(q) : 0;
}

// One machine-fill computation observed during batch scheduling; recorded so
// callers can audit the fill arithmetic: whenever fill_count > 0, the filled
// load load_before + fill_count * exec_time lies in (avg_load - exec_time,
// avg_load].
struct BatchEvent {
  double avg_load;
  double load_before;
  double exec_time;
  long long fill_count;
};

struct BatchTrace {
  long long machine_visits = 0;        // (task type, machine) pairs examined
  long long leftover_placements = 0;   // tasks placed one-at-a-time after filling
  std::vector<BatchEvent>* events = nullptr;  // optional sink for fill audits
};

struct BatchAssignment {
  std::vector<std::vector<long long>> counts;  // [machine][task type]
  std::vector<double> loads;
};

// Schedules counts[i] tasks of each type onto the machines of machine type j
// in batches: types in non-increasing execution time; for each type the
// one-shot fill each machine could absorb while staying at or under the
// average load is computed (and recorded as an audit event when positive),
// then the whole type is distributed in one bulk step that reproduces the
// per-task least-loaded rule exactly, so the sorted loads equal a classic
// longest-processing-time pass while the work stays independent of task
// counts. Tasks a machine receives beyond its one-shot fill (at most one per
// machine per type) are counted as leftover placements.
inline BatchAssignment batch_lpt(const Instance& inst, int machine_type,
                                 const std::vector<long long>& counts,
                                 BatchTrace* trace = nullptr) {
  const int T = inst.task_types();
  require(machine_type >= 0 && machine_type < inst.machine_types(),
          ErrorCode::Contract, "machine type index out of range");
  require(static_cast<int>(counts.size()) == T, ErrorCode::Contract,
          "count vector length must equal task-type count");
  const int m = inst.machines_per_type[machine_type];

  std::vector<int> order(T);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.etc(a, machine_type) > inst.etc(b, machine_type);
  });

  BatchAssignment out;
  out.counts.assign(m, std::vector<long long>(T, 0));
  out.loads.assign(m, 0.0);

  for (int i : order) {
    require(counts[i] >= 0, ErrorCode::Contract, "task count below zero");
    if (trace) trace->machine_visits += m;
    if (counts[i] == 0) continue;
    const double d = inst.etc(i, machine_type);

    double total = 0.0;
    for (double l : out.loads) total += l;
    const double avg_load = (total + d * static_cast<double>(counts[i])) / m;

    std::vector<long long> quota(m);
    for (int k = 0; k < m; ++k) {
      quota[k] = batch_fill_count(avg_load, out.loads[k], d);
      if (quota[k] > 0 && trace && trace->events)
        trace->events->push_back({avg_load, out.loads[k], d, quota[k]});
    }

    std::vector<long long> fill =
        detail::bulk_least_loaded_fill(out.loads, d, counts[i]);
    long long beyond_fill = 0;
    for (int k = 0; k < m; ++k) {
      out.counts[k][i] += fill[k];
      out.loads[k] += static_cast<double>(fill[k]) * d;
      if (fill[k] > quota[k]) beyond_fill += fill[k] - quota[k];
    }
    require(beyond_fill <= m, ErrorCode::Internal,
            "batch fill left more tasks than machines");
    if (trace) trace->leftover_placements += beyond_fill;
  }
  return out;
}

// Reference scheduler: sort descending, place each task on the machine with
// the least load, ties to the lowest machine index. Callers expand equal
// durations in ascending task-type order so tie handling matches batch_lpt.
inline std::vector<double> classic_lpt(std::vector<double> durations,
                                       int machine_count) {
  require(machine_count >= 1, ErrorCode::Contract,
          "need at least one machine");
  for (double d : durations)
    require(d > 0.0, ErrorCode::Contract, "durations must be positive");
  std::stable_sort(durations.begin(), durations.end(),
                   [](double a, double b) { return a > b; });
  std::vector<double> loads(machine_count, 0.0);
  for (double d : durations) {
    int best = 0;
    for (int k = 1; k < machine_count; ++k)
      if (loads[k] < loads[best]) best = k;
    loads[best] += d;
  }
  return loads;
}

}  // namespace eapms

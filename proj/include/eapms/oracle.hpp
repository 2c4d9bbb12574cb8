#pragma once

#include <algorithm>
#include <bit>
#include <limits>
#include <string>
#include <vector>

#include "eapms/core.hpp"
#include "eapms/rounding.hpp"

namespace eapms {

struct OracleBudget {
  long long max_states = 10'000'000;
};

namespace detail {

// Enumerates every way to write `total` as an ordered sum of `slots`
// non-negative parts.
template <typename Fn>
void for_each_composition(long long total, int slots, std::vector<long long>& parts,
                          int at, Fn&& fn) {
  if (at == slots - 1) {
    parts[at] = total;
    fn();
    return;
  }
  for (long long v = 0; v <= total; ++v) {
    parts[at] = v;
    for_each_composition(total - v, slots, parts, at + 1, fn);
  }
}

class ExactEnumerator {
 public:
  ExactEnumerator(const Instance& inst, const OracleBudget& budget)
      : inst_(inst), budget_(budget) {
    T_ = inst.task_types();
    M_ = inst.machine_types();
    type_level_ = CountMatrix(T_, M_);
    work_.counts.resize(M_);
    for (int j = 0; j < M_; ++j)
      work_.counts[j].assign(inst.machines_per_type[j],
                             std::vector<long long>(T_, 0));
    best_profit_ = -std::numeric_limits<double>::infinity();
  }

  SolutionReport run() {
    require(budget_.max_states >= 1, ErrorCode::Contract,
            "enumeration budget must be positive");
    enumerate_type_row(0);
    require(std::isfinite(best_profit_), ErrorCode::Internal,
            "enumeration found no complete schedule");
    SolutionReport report;
    report.schedule = best_;
    report.energy = energy(inst_, best_.type_level(T_));
    report.makespan = makespan(inst_, best_);
    report.profit_rate = profit_rate(inst_, report.energy, report.makespan);
    report.method = Method::Oracle;
    return report;
  }

 private:
  void spend(long long amount = 1) {
    states_ += amount;
    if (states_ > budget_.max_states)
      fail(ErrorCode::Budget,
           "enumeration budget of " + std::to_string(budget_.max_states) +
               " states exhausted");
  }

  // Stage 1: choose how many tasks of each type go to each machine type.
  void enumerate_type_row(int i) {
    if (i == T_) {
      workload_energy_ = 0.0;
      for (int t = 0; t < T_; ++t)
        for (int j = 0; j < M_; ++j)
          workload_energy_ +=
              static_cast<double>(type_level_(t, j)) * inst_.energy_per_task(t, j);
      enumerate_machine_type(0, 0.0);
      return;
    }
    std::vector<long long> parts(M_, 0);
    for_each_composition(inst_.tasks_per_type[i], M_, parts, 0, [&] {
      for (int j = 0; j < M_; ++j) type_level_(i, j) = parts[j];
      enumerate_type_row(i + 1);
    });
  }

  // Stage 2: within machine type j, split the chosen column over identical
  // machines. Only splits whose per-machine count vectors are
  // lexicographically non-decreasing are visited; any other split is a
  // machine relabeling of one of these.
  void enumerate_machine_type(int j, double max_load) {
    if (j == M_) {
      spend();
      if (max_load <= 0.0) return;  // no tasks at all; cannot happen for valid input
      double profit = (inst_.price - inst_.energy_cost * workload_energy_) / max_load;
      if (profit > best_profit_ + 1e-12) {
        best_profit_ = profit;
        best_ = work_;
      }
      return;
    }
    std::vector<long long> remaining(T_);
    for (int i = 0; i < T_; ++i) remaining[i] = type_level_(i, j);
    enumerate_machine(j, 0, remaining, nullptr, max_load);
  }

  void enumerate_machine(int j, int k, std::vector<long long>& remaining,
                         const std::vector<long long>* prev, double max_load) {
    const int m = inst_.machines_per_type[j];
    if (k == m - 1) {
      if (prev && lex_less(remaining, *prev)) return;
      spend();
      work_.counts[j][k] = remaining;
      double load = machine_load(j, remaining);
      enumerate_machine_type(j + 1, std::max(max_load, load));
      return;
    }
    std::vector<long long> v(T_, 0);
    build_vector(j, k, 0, true, remaining, prev, v, max_load);
  }

  // Fills v componentwise, keeping v >= prev lexicographically. `tied` is true
  // while v matches prev on every earlier component.
  void build_vector(int j, int k, int i, bool tied,
                    std::vector<long long>& remaining,
                    const std::vector<long long>* prev, std::vector<long long>& v,
                    double max_load) {
    if (i == static_cast<int>(v.size())) {
      // The digit loop below has already subtracted every component of v from
      // `remaining`, so it holds exactly the tasks left for machines k+1..m-1.
      spend();
      work_.counts[j][k] = v;
      double load = machine_load(j, v);
      enumerate_machine(j, k + 1, remaining, &v, std::max(max_load, load));
      return;
    }
    long long low = 0;
    if (tied && prev) low = (*prev)[i];
    for (long long c = remaining[i]; c >= low; --c) {
      // Descending keeps the first complete machine the lexicographically
      // largest, so later machines can still reach v >= prev.
      v[i] = c;
      bool still_tied = tied && prev && c == (*prev)[i];
      if (tied && prev && c > (*prev)[i]) {
        // v is now strictly above prev; the rest of the vector is free.
        remaining[i] -= c;
        build_vector(j, k, i + 1, false, remaining, nullptr, v, max_load);
        remaining[i] += c;
      } else {
        remaining[i] -= c;
        build_vector(j, k, i + 1, still_tied, remaining,
                     still_tied ? prev : nullptr, v, max_load);
        remaining[i] += c;
      }
      v[i] = 0;
    }
  }

  double machine_load(int j, const std::vector<long long>& v) const {
    double load = 0.0;
    for (int i = 0; i < T_; ++i)
      load += static_cast<double>(v[i]) * inst_.etc(i, j);
    return load;
  }

  static bool lex_less(const std::vector<long long>& a,
                       const std::vector<long long>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

  const Instance& inst_;
  const OracleBudget& budget_;
  int T_ = 0, M_ = 0;
  long long states_ = 0;
  CountMatrix type_level_;
  double workload_energy_ = 0.0;
  MachineLevelSchedule work_;
  MachineLevelSchedule best_;
  double best_profit_ = 0.0;
};

}  // namespace detail

// Exhaustive search over machine-level schedules, with machine relabelings
// inside each machine type collapsed by enumerating per-machine task-count
// vectors in lexicographically non-decreasing order. Intended for tiny
// instances; spends one budget unit per enumeration step and throws
// ErrorCode::Budget when max_states is exhausted.
inline SolutionReport exact_opt(const Instance& inst,
                                const OracleBudget& budget = {}) {
  inst.validate();
  detail::ExactEnumerator e(inst, budget);
  return e.run();
}

// Cheap lower estimate of the states exact_opt would visit: the number of
// type-level assignments alone, before machines are split. Useful as a gate
// before attempting enumeration.
inline long long estimate_enumeration_states(const Instance& inst,
                                             long long cap = 1LL << 62) {
  long long product = 1;
  const int M = inst.machine_types();
  for (long long t : inst.tasks_per_type) {
    // compositions of t over M slots: C(t + M - 1, M - 1)
    long long ways = 1;
    for (int r = 1; r <= M - 1; ++r) {
      if (ways > cap / (t + r)) return cap;
      ways = ways * (t + r) / r;  // stays exact in this order
    }
    if (ways > cap / std::max(product, 1LL)) return cap;
    product *= ways;
  }
  return product;
}

// Reference matcher for small slot graphs: tries every subset of edges.
// Agrees exactly with min_weight_b_matching and raises the same infeasibility
// signal when no saturating matching exists.
inline BMatching brute_b_matching(const SlotGraph& g) {
  const int E = static_cast<int>(g.edges.size());
  require(E <= 25, ErrorCode::Contract,
          "brute-force matcher handles at most 25 edges");
  const long long demand = g.demand();
  const int T = static_cast<int>(g.task_capacity.size());
  const int S = static_cast<int>(g.slots.size());

  BMatching best;
  bool found = false;
  std::vector<long long> task_hits(T);
  std::vector<char> slot_used(S);
  for (unsigned mask = 0; mask < (1u << E); ++mask) {
    if (std::popcount(mask) != demand) continue;
    std::fill(task_hits.begin(), task_hits.end(), 0);
    std::fill(slot_used.begin(), slot_used.end(), 0);
    double weight = 0.0;
    bool ok = true;
    for (int e = 0; e < E && ok; ++e) {
      if (!(mask & (1u << e))) continue;
      const auto& edge = g.edges[e];
      if (slot_used[edge.slot]) { ok = false; break; }
      slot_used[edge.slot] = 1;
      ++task_hits[edge.task];
      weight += edge.weight;
    }
    if (!ok) continue;
    for (int i = 0; i < T && ok; ++i) ok = task_hits[i] == g.task_capacity[i];
    if (!ok) continue;
    if (!found || weight < best.total_weight) {
      found = true;
      best.total_weight = weight;
      best.edges.clear();
      for (int e = 0; e < E; ++e)
        if (mask & (1u << e)) best.edges.push_back(e);
    }
  }
  require(found, ErrorCode::Infeasible, "slot graph admits no saturating matching");
  return best;
}

}  // namespace eapms

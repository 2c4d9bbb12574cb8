#pragma once

// Shared test fixtures and generators. Everything here is deterministic given
// the caller's RNG state and has no test-framework dependencies, so both the
// unit suite and the acceptance runner can use it.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "eapms/eapms.hpp"

namespace testutil {

// Two task types, two single-machine types, with cross-shaped costs: the
// fast machine for each type is the power-hungry one for the other. Small
// enough to reason through by hand; rich enough to exercise every stage.
inline eapms::Instance instance_a() {
  eapms::Instance inst;
  inst.tasks_per_type = {2, 1};
  inst.machines_per_type = {1, 1};
  inst.etc = eapms::Matrix::from_rows({{1, 2}, {3, 1}});
  inst.apc = eapms::Matrix::from_rows({{2, 1}, {1, 2}});
  inst.price = 10;
  inst.energy_cost = 1;
  return inst;
}

// One task, one machine: every pipeline stage is forced.
inline eapms::Instance single_cell() {
  eapms::Instance inst;
  inst.tasks_per_type = {1};
  inst.machines_per_type = {1};
  inst.etc = eapms::Matrix::from_rows({{2}});
  inst.apc = eapms::Matrix::from_rows({{1}});
  inst.price = 10;
  inst.energy_cost = 1;
  return inst;
}

// Tiny oracle-checkable instance: up to 3 task types x 2 machine types, at
// most 4 tasks per type and 2 machines per type, costs uniform in (0, 1],
// price = gamma * e_min with gamma uniform in [1, 1.5], unit energy cost.
inline eapms::Instance random_tiny(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (;;) {
    const int T = pick(1, 3);
    const int M = pick(1, 2);
    eapms::Instance inst;
    inst.tasks_per_type.resize(T);
    long long total = 0;
    for (int i = 0; i < T; ++i) {
      inst.tasks_per_type[i] = pick(0, 4);
      total += inst.tasks_per_type[i];
    }
    if (total == 0) continue;
    inst.machines_per_type.resize(M);
    for (int j = 0; j < M; ++j) inst.machines_per_type[j] = pick(1, 2);
    inst.etc = eapms::Matrix(T, M);
    inst.apc = eapms::Matrix(T, M);
    for (int i = 0; i < T; ++i)
      for (int j = 0; j < M; ++j) {
        inst.etc(i, j) = eapms::unit_interval(rng);
        inst.apc(i, j) = eapms::unit_interval(rng);
      }
    inst.energy_cost = 1.0;
    const double gamma = 1.0 + 0.5 * eapms::unit_interval(rng);
    inst.price = gamma * eapms::min_total_energy(inst);
    inst.validate();
    return inst;
  }
}

// Mid-sized random instance with an exact price multiplier (gamma = 1 gives
// a break-even instance where the best possible profit rate is zero).
inline eapms::Instance random_small(std::mt19937_64& rng, double gamma) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const int T = pick(2, 5);
  const int M = pick(2, 3);
  eapms::Instance inst;
  inst.tasks_per_type.resize(T);
  bool any = false;
  for (int i = 0; i < T; ++i) {
    inst.tasks_per_type[i] = pick(0, 6);
    any = any || inst.tasks_per_type[i] > 0;
  }
  if (!any) inst.tasks_per_type[0] = 1;
  inst.machines_per_type.resize(M);
  for (int j = 0; j < M; ++j) inst.machines_per_type[j] = pick(1, 3);
  inst.etc = eapms::Matrix(T, M);
  inst.apc = eapms::Matrix(T, M);
  for (int i = 0; i < T; ++i)
    for (int j = 0; j < M; ++j) {
      inst.etc(i, j) = eapms::unit_interval(rng);
      inst.apc(i, j) = eapms::unit_interval(rng);
    }
  inst.energy_cost = 1.0;
  inst.price = gamma * eapms::min_total_energy(inst);
  inst.validate();
  return inst;
}

// Dumb-as-possible exact optimum: expand every task, try every physical
// machine for each, no symmetry reduction, no pruning. Exponential, so keep
// total task count small (~6). Used as an independent check of the oracle.
inline double naive_opt(const eapms::Instance& inst) {
  struct Machine {
    int type;
  };
  std::vector<Machine> machines;
  for (int j = 0; j < inst.machine_types(); ++j)
    for (int k = 0; k < inst.machines_per_type[j]; ++k) machines.push_back({j});
  std::vector<int> task_type;
  for (int i = 0; i < inst.task_types(); ++i)
    for (long long t = 0; t < inst.tasks_per_type[i]; ++t) task_type.push_back(i);

  std::vector<double> load(machines.size(), 0.0);
  double energy = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t at) -> void {
    if (at == task_type.size()) {
      double ms = 0.0;
      for (double l : load) ms = std::max(ms, l);
      best = std::max(best, (inst.price - inst.energy_cost * energy) / ms);
      return;
    }
    const int i = task_type[at];
    for (std::size_t k = 0; k < machines.size(); ++k) {
      const int j = machines[k].type;
      load[k] += inst.etc(i, j);
      energy += inst.energy_per_task(i, j);
      self(self, at + 1);
      load[k] -= inst.etc(i, j);
      energy -= inst.energy_per_task(i, j);
    }
  };
  recurse(recurse, 0);
  return best;
}

// Random slot graph with a planted saturating matching, so a minimum-weight
// matching always exists. Weights are small integers: sums of up to eight of
// them are exact in double arithmetic, making "exactly equal" comparisons
// between two matching algorithms meaningful.
inline eapms::SlotGraph random_slot_graph(std::mt19937_64& rng, int max_edges) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  eapms::SlotGraph g;
  const int tasks = pick(1, 3);
  int slot_count = 0;
  g.task_capacity.assign(tasks, 0);
  std::vector<std::pair<int, int>> planted;  // (task, slot)
  for (int i = 0; i < tasks; ++i) {
    const int b = pick(1, 2);
    g.task_capacity[i] = b;
    for (int r = 0; r < b; ++r) planted.push_back({i, slot_count++});
  }
  // A few spare slots beyond the planted ones.
  const int spare = pick(0, 2);
  for (int s = 0; s < slot_count + spare; ++s)
    g.slots.push_back({s % 2, s});  // machine-type tag is irrelevant to matching
  for (auto [i, s] : planted)
    g.edges.push_back({i, g.slots[s].first, s, double(pick(1, 16))});
  const int extras =
      std::min(max_edges - static_cast<int>(g.edges.size()), pick(0, 8));
  for (int e = 0; e < extras; ++e) {
    const int i = pick(0, tasks - 1);
    const int s = pick(0, slot_count + spare - 1);
    g.edges.push_back({i, g.slots[s].first, s, double(pick(1, 16))});
  }
  return g;
}

// Random inputs for one machine-type batch assignment.
struct BatchConfig {
  eapms::Instance inst;  // single machine type carrying the ETC column
  std::vector<long long> counts;
};

inline BatchConfig random_batch_config(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  BatchConfig cfg;
  const int T = pick(1, 5);
  cfg.inst.tasks_per_type.assign(T, 0);
  cfg.inst.machines_per_type = {pick(1, 6)};
  cfg.inst.etc = eapms::Matrix(T, 1);
  cfg.inst.apc = eapms::Matrix(T, 1, 1.0);
  cfg.counts.resize(T);
  bool any = false;
  for (int i = 0; i < T; ++i) {
    cfg.inst.etc(i, 0) = eapms::unit_interval(rng);
    cfg.counts[i] = pick(0, 8);
    cfg.inst.tasks_per_type[i] = cfg.counts[i];
    any = any || cfg.counts[i] > 0;
  }
  if (!any) {
    cfg.counts[0] = 1;
    cfg.inst.tasks_per_type[0] = 1;
  }
  cfg.inst.price = 1.0;
  cfg.inst.energy_cost = 0.0;
  cfg.inst.validate();
  return cfg;
}

}  // namespace testutil

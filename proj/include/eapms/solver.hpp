#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eapms/core.hpp"
#include "eapms/formulations.hpp"
#include "eapms/linprog.hpp"
#include "eapms/lpt.hpp"
#include "eapms/rounding.hpp"

namespace eapms {

// Rule for the greedy schedule behind the sweep's upper bound and the
// baseline's fallback. MinEnergyPerTask sends each type where one of its
// tasks draws the least energy; MinAveragePower uses raw power draw instead,
// which can prefer a slow machine.
enum class UbRule { MinEnergyPerTask, MinAveragePower };

struct SweepConfig {
  double epsilon = 0.1;       // geometric step between makespan candidates
  int max_candidates = 10000; // safety cap on the candidate list
  UbRule ub_rule = UbRule::MinEnergyPerTask;
};

struct CandidateRecord {
  double ms_candidate = 0.0;
  bool evaluated = false;  // false: no feasible assignment within this candidate
  double lp_energy = 0.0;
  double rounded_energy = 0.0;
  double realized_makespan = 0.0;
  double profit_rate = 0.0;
  int lp_positive_count = 0;
  int slot_edge_count = 0;
};

// Work and outcome counters for one solver run; wall-clock-free, so two runs
// on the same input produce identical traces.
struct SolveTrace {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::vector<CandidateRecord> candidates;
  long long lp_solves = 0;
  long long matchings = 0;
  long long batch_machine_visits = 0;
  long long leftover_placements = 0;
  std::vector<BatchEvent>* batch_events = nullptr;
};

// Every task of each type on its greedy machine type, ties to the lowest
// machine-type index.
inline TypeLevelSchedule min_energy_schedule(const Instance& inst,
                                             UbRule rule = UbRule::MinEnergyPerTask) {
  TypeLevelSchedule s;
  s.x = CountMatrix(inst.task_types(), inst.machine_types());
  for (int i = 0; i < inst.task_types(); ++i) {
    int best = 0;
    for (int j = 1; j < inst.machine_types(); ++j) {
      double key = rule == UbRule::MinEnergyPerTask ? inst.energy_per_task(i, j)
                                                    : inst.apc(i, j);
      double key_best = rule == UbRule::MinEnergyPerTask
                            ? inst.energy_per_task(i, best)
                            : inst.apc(i, best);
      if (key < key_best) best = j;
    }
    s.x(i, best) = inst.tasks_per_type[i];
  }
  return s;
}

namespace detail {

struct Assembled {
  MachineLevelSchedule schedule;
  double makespan = 0.0;
};

// Spreads a type-level schedule across the identical machines of every
// machine type with batch_lpt and reports the realized makespan.
inline Assembled assemble_schedule(const Instance& inst, const TypeLevelSchedule& x,
                                   SolveTrace* trace = nullptr) {
  Assembled out;
  out.schedule.counts.resize(inst.machine_types());
  std::vector<long long> column(inst.task_types());
  for (int j = 0; j < inst.machine_types(); ++j) {
    for (int i = 0; i < inst.task_types(); ++i) column[i] = x.x(i, j);
    BatchTrace bt;
    if (trace) bt.events = trace->batch_events;
    BatchAssignment batch = batch_lpt(inst, j, column, &bt);
    if (trace) {
      trace->batch_machine_visits += bt.machine_visits;
      trace->leftover_placements += bt.leftover_placements;
    }
    out.schedule.counts[j] = std::move(batch.counts);
    for (double l : batch.loads) out.makespan = std::max(out.makespan, l);
  }
  return out;
}

}  // namespace detail

// Makespan of the greedy min-energy schedule: a reachable makespan, and an
// upper bound on the makespan of the best schedule whenever positive profit
// is attainable.
inline double greedy_makespan_upper_bound(const Instance& inst,
                                          UbRule rule = UbRule::MinEnergyPerTask,
                                          SolveTrace* trace = nullptr) {
  return detail::assemble_schedule(inst, min_energy_schedule(inst, rule), trace)
      .makespan;
}

// Geometric candidate grid lb * (1 + eps)^t, t = 0, 1, ..., extended until it
// reaches ub.
inline std::vector<double> candidate_makespans(double lb, double ub,
                                               const SweepConfig& cfg) {
  require(cfg.epsilon > 0.0, ErrorCode::Contract, "epsilon must be positive");
  require(cfg.max_candidates >= 1, ErrorCode::Contract,
          "candidate cap must be positive");
  require(lb > 0.0 && ub >= lb, ErrorCode::Contract,
          "bounds must satisfy 0 < lb <= ub");
  std::vector<double> out{lb};
  while (out.back() < ub * (1.0 - 1e-12)) {
    if (static_cast<int>(out.size()) >= cfg.max_candidates) {
      double needed =
          std::pow(ub / lb, 1.0 / static_cast<double>(cfg.max_candidates)) - 1.0;
      fail(ErrorCode::Budget,
           "candidate cap " + std::to_string(cfg.max_candidates) +
               " exceeded; epsilon >= " + std::to_string(needed) +
               " fits this bound range");
    }
    out.push_back(out.back() * (1.0 + cfg.epsilon));
  }
  return out;
}

// Candidate-sweep solver: for each makespan candidate on the geometric grid,
// minimize energy by LP, round the fractional assignment through the slot
// graph matching, spread it with batch_lpt, and keep the best realized
// profit rate. Ties prefer smaller makespan, then smaller energy, then the
// earlier candidate.
inline SolutionReport ttb_solve(const Instance& inst, const SweepConfig& cfg,
                                SolveTrace& trace) {
  inst.validate();

  trace.lower_bound = fractional_makespan_lower_bound(inst);
  ++trace.lp_solves;
  trace.upper_bound =
      std::max(greedy_makespan_upper_bound(inst, cfg.ub_rule, &trace),
               trace.lower_bound);
  std::vector<double> candidates =
      candidate_makespans(trace.lower_bound, trace.upper_bound, cfg);

  bool have_best = false;
  SolutionReport best;
  for (double ms : candidates) {
    CandidateRecord rec;
    rec.ms_candidate = ms;
    auto elp = build_energy_lp(inst, ms);
    if (!elp) {
      trace.candidates.push_back(rec);
      continue;
    }
    LpSolution sol = solve_lp(elp->lp);
    ++trace.lp_solves;
    if (sol.status != LpStatus::Optimal) {
      trace.candidates.push_back(rec);
      continue;
    }
    rec.evaluated = true;
    rec.lp_energy = sol.objective_value;
    for (double v : sol.values)
      if (v > kFeasibilityTol) ++rec.lp_positive_count;

    Matrix x = expand_energy_solution(inst, *elp, sol.values);
    RoundedSolution rounded = round_schedule_traced(inst, x);
    ++trace.matchings;
    rec.slot_edge_count = static_cast<int>(rounded.graph.edges.size());
    rec.rounded_energy = energy(inst, rounded.schedule);

    detail::Assembled assembled =
        detail::assemble_schedule(inst, rounded.schedule, &trace);
    rec.realized_makespan = assembled.makespan;
    rec.profit_rate = profit_rate(inst, rec.rounded_energy, assembled.makespan);
    trace.candidates.push_back(rec);

    bool better = !have_best || rec.profit_rate > best.profit_rate ||
                  (rec.profit_rate == best.profit_rate &&
                   (rec.realized_makespan < best.makespan ||
                    (rec.realized_makespan == best.makespan &&
                     rec.rounded_energy < best.energy)));
    if (better) {
      have_best = true;
      best.schedule = std::move(assembled.schedule);
      best.makespan = rec.realized_makespan;
      best.energy = rec.rounded_energy;
      best.profit_rate = rec.profit_rate;
      best.ms_candidate = ms;
      best.method = Method::Ttb;
    }
  }
  require(have_best, ErrorCode::Internal,
          "no makespan candidate was feasible for a valid instance");
  return best;
}

inline SolutionReport ttb_solve(const Instance& inst, const SweepConfig& cfg = {}) {
  SolveTrace trace;
  return ttb_solve(inst, cfg, trace);
}

namespace detail {

// Rounds each row of a non-negative fractional matrix with integral row sums
// to integers: keep floors, then hand the leftover units to the largest
// remainders (ties to the lowest machine-type index).
inline CountMatrix round_rows_largest_remainder(const Instance& inst,
                                                const Matrix& x) {
  const int T = inst.task_types();
  const int M = inst.machine_types();
  CountMatrix out(T, M);
  for (int i = 0; i < T; ++i) {
    std::vector<double> frac(M);
    long long assigned = 0;
    for (int j = 0; j < M; ++j) {
      double v = snap_to_integer(std::max(0.0, x(i, j)));
      double fl = std::floor(v);
      out(i, j) = static_cast<long long>(fl);
      frac[j] = v - fl;
      assigned += out(i, j);
    }
    long long leftover = inst.tasks_per_type[i] - assigned;
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return frac[a] > frac[b]; });
    while (leftover < 0) {  // defensive: snapping pushed a row over its count
      for (int q = M - 1; q >= 0 && leftover < 0; --q)
        if (out(i, order[q]) > 0) {
          --out(i, order[q]);
          ++leftover;
        }
    }
    int q = 0;
    while (leftover > 0) {
      ++out(i, order[q]);
      --leftover;
      q = (q + 1) % M;
    }
  }
  return out;
}

}  // namespace detail

// Baseline solver: solve the rate linearization, recover the task mix from
// the rate, round with largest remainders, and spread with batch_lpt. A
// degenerate zero rate (nothing is worth running fractionally) falls back to
// the greedy min-energy schedule, reported as Method::MinEnergy.
inline SolutionReport tms_solve(const Instance& inst, SolveTrace& trace) {
  inst.validate();
  TmsLp tms = build_tms_lp(inst);
  LpSolution sol = solve_lp(tms.lp);
  ++trace.lp_solves;

  TypeLevelSchedule integral;
  Method method;
  if (sol.status == LpStatus::Optimal && sol.values[0] > kFeasibilityTol) {
    const double rate = sol.values[0];
    Matrix x(inst.task_types(), inst.machine_types());
    for (int i = 0; i < inst.task_types(); ++i)
      for (int j = 0; j < inst.machine_types(); ++j)
        x(i, j) = sol.values[1 + i * inst.machine_types() + j] / rate;
    integral.x = detail::round_rows_largest_remainder(inst, x);
    method = Method::Tms;
  } else {
    integral = min_energy_schedule(inst);
    method = Method::MinEnergy;
  }

  detail::Assembled assembled = detail::assemble_schedule(inst, integral, &trace);
  SolutionReport report;
  report.schedule = std::move(assembled.schedule);
  report.makespan = assembled.makespan;
  report.energy = energy(inst, integral);
  report.profit_rate = profit_rate(inst, report.energy, report.makespan);
  report.method = method;
  return report;
}

inline SolutionReport tms_solve(const Instance& inst) {
  SolveTrace trace;
  return tms_solve(inst, trace);
}

}  // namespace eapms

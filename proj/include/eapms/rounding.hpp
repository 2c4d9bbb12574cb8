#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "eapms/core.hpp"

namespace eapms {

// Bipartite graph between task types and unit "slots" of machine types. The
// fractional remainder of an assignment is packed into slots so that choosing
// one incident task type per slot, with task type i chosen task_capacity[i]
// times overall, yields an integral completion of the floored assignment.
struct SlotGraph {
  struct Edge {
    int task;          // task type
    int machine_type;  // machine type owning the slot
    int slot;          // index into `slots`
    double weight;     // energy of one task of `task` on `machine_type`
  };

  std::vector<long long> task_capacity;      // copies each task node must receive
  std::vector<std::pair<int, int>> slots;    // (machine type, ordinal within type)
  std::vector<Edge> edges;

  long long demand() const {
    long long d = 0;
    for (long long b : task_capacity) d += b;
    return d;
  }
};

struct BMatching {
  std::vector<int> edges;     // indices into SlotGraph::edges
  double total_weight = 0.0;
};

namespace detail {

struct FractionalSplit {
  CountMatrix floors;
  Matrix frac;                          // in [0, 1) after integer snapping
  std::vector<long long> residuals;     // tasks left unassigned per type
};

inline FractionalSplit split_fractional(const Instance& inst, const Matrix& x) {
  const int T = inst.task_types();
  const int M = inst.machine_types();
  require(x.rows() == T && x.cols() == M, ErrorCode::Contract,
          "fractional assignment has wrong shape");
  FractionalSplit out;
  out.floors = CountMatrix(T, M);
  out.frac = Matrix(T, M);
  out.residuals.assign(T, 0);
  // Solver output carries rounding noise proportional to the magnitude of the
  // task counts that set the LP right-hand side; forgive negatives inside that
  // band (even in zero-task rows), reject anything larger.
  double total_tasks = 0.0;
  for (int i = 0; i < T; ++i)
    total_tasks += static_cast<double>(inst.tasks_per_type[i]);
  const double noise = 1e-9 + 1e-10 * total_tasks;
  for (int i = 0; i < T; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < M; ++j) {
      double v = snap_to_integer(x(i, j));
      if (v < 0.0 && v >= -noise) v = 0.0;
      require(v >= 0.0, ErrorCode::Contract, "fractional assignment entry below zero");
      double fl = std::floor(v);
      out.floors(i, j) = static_cast<long long>(fl);
      out.frac(i, j) = v - fl;
      row_sum += v;
    }
    double target = static_cast<double>(inst.tasks_per_type[i]);
    require(std::abs(row_sum - target) <=
                1e-6 * std::max(1.0, std::abs(target)),
            ErrorCode::Contract,
            "assignment row " + std::to_string(i) + " does not sum to its task count");
    out.residuals[i] = inst.tasks_per_type[i] - out.floors.row_sum(i);
    require(out.residuals[i] >= 0, ErrorCode::Contract,
            "assignment row " + std::to_string(i) + " over-assigns its task count");
  }
  return out;
}

}  // namespace detail

// Builds the slot graph of a fractional assignment whose row sums are the
// task counts. Within each machine type, task types are walked in order of
// non-increasing execution time (ties by ascending type index) and their
// fractional remainders are cut into unit slots; a remainder straddling a cut
// is connected to both slots.
inline SlotGraph build_slot_graph(const Instance& inst, const Matrix& x) {
  const int T = inst.task_types();
  const int M = inst.machine_types();
  auto split = detail::split_fractional(inst, x);

  SlotGraph g;
  g.task_capacity = split.residuals;
  for (int j = 0; j < M; ++j) {
    std::vector<int> order(T);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return inst.etc(a, j) > inst.etc(b, j);
    });

    double mass = 0.0;
    for (int i : order) mass += split.frac(i, j);
    if (mass <= kFeasibilityTol) continue;
    const int k = static_cast<int>(std::ceil(mass - kFeasibilityTol));

    const int slot_base = static_cast<int>(g.slots.size());
    for (int s = 0; s < k; ++s) g.slots.emplace_back(j, s + 1);
    auto add_edge = [&](int task, int slot_ordinal) {
      g.edges.push_back({task, j, slot_base + slot_ordinal,
                         inst.energy_per_task(task, j)});
    };

    if (k == 1) {
      for (int i : order)
        if (split.frac(i, j) > 0.0) add_edge(i, 0);
      continue;
    }
    double running = 0.0;
    int pos = 0, prev_end = -1;
    for (int s = 1; s < k; ++s) {
      while (running < static_cast<double>(s) - kFeasibilityTol) {
        require(pos < T, ErrorCode::Internal, "slot cut walk ran past the last task type");
        running += split.frac(order[pos], j);
        ++pos;
      }
      const int cut = pos - 1;  // first position whose running mass reaches s
      for (int q = prev_end + 1; q <= cut; ++q)
        if (split.frac(order[q], j) > 0.0) add_edge(order[q], s - 1);
      if (running > static_cast<double>(s) + kFeasibilityTol)
        add_edge(order[cut], s);  // straddles the cut: also feeds the next slot
      prev_end = cut;
    }
    for (int q = prev_end + 1; q < T; ++q)
      if (split.frac(order[q], j) > 0.0) add_edge(order[q], k - 1);
  }

  long long slot_total = static_cast<long long>(g.slots.size());
  require(g.demand() <= slot_total, ErrorCode::Internal,
          "slot graph has fewer slots than residual tasks");
  return g;
}

namespace detail {

// Successive-shortest-path min-cost flow specialized to the slot graph:
// source -> task (capacity = task_capacity), task -> slot (capacity 1, cost =
// edge weight), slot -> sink (capacity 1). Costs are non-negative, so plain
// Dijkstra with potentials finds each augmenting path.
class SlotFlow {
 public:
  explicit SlotFlow(const SlotGraph& g) : g_(g) {
    tasks_ = static_cast<int>(g.task_capacity.size());
    slots_ = static_cast<int>(g.slots.size());
    nodes_ = tasks_ + slots_ + 2;
    source_ = nodes_ - 2;
    sink_ = nodes_ - 1;
    head_.assign(nodes_, {});
    for (int i = 0; i < tasks_; ++i) {
      require(g.task_capacity[i] >= 0, ErrorCode::Contract,
              "task capacity below zero");
      add_arc(source_, i, g.task_capacity[i], 0.0, -1);
    }
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      const auto& edge = g.edges[e];
      require(edge.task >= 0 && edge.task < tasks_ && edge.slot >= 0 &&
                  edge.slot < slots_,
              ErrorCode::Contract, "slot graph edge endpoint out of range");
      require(edge.weight >= 0.0, ErrorCode::Contract,
              "slot graph edge weight below zero");
      add_arc(edge.task, tasks_ + edge.slot, 1, edge.weight, e);
    }
    for (int s = 0; s < slots_; ++s) add_arc(tasks_ + s, sink_, 1, 0.0, -1);
  }

  BMatching solve() {
    const long long demand = g_.demand();
    std::vector<double> potential(nodes_, 0.0);
    long long flow = 0;
    while (flow < demand) {
      auto [dist, prev_arc] = dijkstra(potential);
      require(std::isfinite(dist[sink_]), ErrorCode::Infeasible,
              "slot graph admits no saturating matching");
      for (int v = 0; v < nodes_; ++v)
        if (std::isfinite(dist[v])) potential[v] += dist[v];
      long long push = std::numeric_limits<long long>::max();
      for (int v = sink_; v != source_;) {
        const Arc& a = arcs_[prev_arc[v]];
        push = std::min(push, a.cap);
        v = a.from;
      }
      for (int v = sink_; v != source_;) {
        Arc& a = arcs_[prev_arc[v]];
        a.cap -= push;
        arcs_[prev_arc[v] ^ 1].cap += push;
        v = a.from;
      }
      flow += push;
    }
    BMatching out;
    for (std::size_t a = 0; a < arcs_.size(); a += 2)
      if (arcs_[a].edge_id >= 0 && arcs_[a].cap == 0)
        out.edges.push_back(arcs_[a].edge_id);
    std::sort(out.edges.begin(), out.edges.end());
    for (int e : out.edges) out.total_weight += g_.edges[e].weight;
    return out;
  }

 private:
  struct Arc {
    int from, to;
    long long cap;
    double cost;
    int edge_id;
  };

  void add_arc(int from, int to, long long cap, double cost, int edge_id) {
    head_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, to, cap, cost, edge_id});
    head_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, from, 0, -cost, -1});
  }

  std::pair<std::vector<double>, std::vector<int>> dijkstra(
      const std::vector<double>& potential) const {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(nodes_, inf);
    std::vector<int> prev_arc(nodes_, -1);
    std::vector<char> done(nodes_, 0);
    dist[source_] = 0.0;
    for (int it = 0; it < nodes_; ++it) {
      int u = -1;
      for (int v = 0; v < nodes_; ++v)
        if (!done[v] && std::isfinite(dist[v]) && (u < 0 || dist[v] < dist[u]))
          u = v;
      if (u < 0) break;
      done[u] = 1;
      for (int a : head_[u]) {
        const Arc& arc = arcs_[a];
        if (arc.from != u || arc.cap <= 0) continue;
        double w = arc.cost + potential[u] - potential[arc.to];
        if (w < 0.0 && w > -1e-9) w = 0.0;  // float dust from potential updates
        if (dist[u] + w < dist[arc.to]) {
          dist[arc.to] = dist[u] + w;
          prev_arc[arc.to] = a;
        }
      }
    }
    return {std::move(dist), std::move(prev_arc)};
  }

  const SlotGraph& g_;
  int tasks_ = 0, slots_ = 0, nodes_ = 0, source_ = 0, sink_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
};

}  // namespace detail

// Minimum-weight matching that uses every slot at most once and matches task
// node i exactly task_capacity[i] times. Throws ErrorCode::Infeasible when no
// saturating matching exists.
inline BMatching min_weight_b_matching(const SlotGraph& g) {
  detail::SlotFlow flow(g);
  return flow.solve();
}

struct RoundedSolution {
  TypeLevelSchedule schedule;
  SlotGraph graph;
  BMatching matching;
};

// Rounds a fractional assignment with integral row sums to an integral one:
// keep the floors, then place each residual task along a minimum-weight
// matching edge of the slot graph. The rounded energy never exceeds the
// fractional energy, and each machine type gains at most one task per slot.
inline RoundedSolution round_schedule_traced(const Instance& inst, const Matrix& x) {
  auto split = detail::split_fractional(inst, x);
  RoundedSolution out;
  out.graph = build_slot_graph(inst, x);
  out.matching = min_weight_b_matching(out.graph);
  out.schedule.x = split.floors;
  for (int e : out.matching.edges) {
    const auto& edge = out.graph.edges[e];
    out.schedule.x(edge.task, edge.machine_type) += 1;
  }
  for (int i = 0; i < inst.task_types(); ++i)
    require(out.schedule.x.row_sum(i) == inst.tasks_per_type[i],
            ErrorCode::Internal, "rounded schedule lost tasks");
  return out;
}

inline TypeLevelSchedule round_schedule(const Instance& inst, const Matrix& x) {
  return round_schedule_traced(inst, x).schedule;
}

}  // namespace eapms

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eapms {

// Error taxonomy. Contract violations and malformed inputs throw; expected
// control-flow outcomes (an infeasible makespan candidate, an LP status) are
// represented as values by the functions that produce them.
enum class ErrorCode {
  Parse,        // malformed input file
  Validation,   // well-formed input that violates the data contract
  Contract,     // caller broke a precondition
  Infeasible,   // no solution exists for the request
  Budget,       // enumeration / candidate cap exhausted
  Degenerate,   // quantity undefined for this input (e.g. zero makespan)
  Internal,     // invariant the library itself must uphold failed
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Validation: return "VALIDATION";
    case ErrorCode::Contract: return "CONTRACT";
    case ErrorCode::Infeasible: return "INFEASIBLE";
    case ErrorCode::Budget: return "BUDGET";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

// Values this close to an integer are treated as integral when splitting a
// fractional assignment; the relative term keeps the snap meaningful for
// task counts far above 1.
inline double integer_snap_tolerance(double value) {
  return 1e-9 + 1e-12 * std::abs(value);
}

inline double snap_to_integer(double value) {
  double r = std::round(value);
  return std::abs(value - r) <= integer_snap_tolerance(value) ? r : value;
}

constexpr double kFeasibilityTol = 1e-9;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        v_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(static_cast<int>(rows.size()),
             rows.empty() ? 0 : static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i) {
      require(static_cast<int>(rows[i].size()) == m.cols(), ErrorCode::Contract,
              "ragged matrix literal");
      for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return v_[idx(i, j)]; }
  const double& operator()(int i, int j) const { return v_[idx(i, j)]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  int rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

// Dense row-major matrix of counts.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(int rows, int cols, long long fill = 0)
      : rows_(rows), cols_(cols),
        v_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}

  static CountMatrix from_rows(const std::vector<std::vector<long long>>& rows) {
    CountMatrix m(static_cast<int>(rows.size()),
                  rows.empty() ? 0 : static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i) {
      require(static_cast<int>(rows[i].size()) == m.cols(), ErrorCode::Contract,
              "ragged matrix literal");
      for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  long long& operator()(int i, int j) { return v_[idx(i, j)]; }
  const long long& operator()(int i, int j) const { return v_[idx(i, j)]; }

  long long row_sum(int i) const {
    long long s = 0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  bool operator==(const CountMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  int rows_ = 0, cols_ = 0;
  std::vector<long long> v_;
};

// A scheduling instance: task types with multiplicities, machine types with
// multiplicities, and per-(task type, machine type) execution time (etc) and
// average power (apc) tables. `price` is the revenue for completing the whole
// workload; `energy_cost` is the price of one unit of energy.
struct Instance {
  std::vector<long long> tasks_per_type;  // tasks of each type
  std::vector<int> machines_per_type;     // identical machines in each type
  Matrix etc;                             // execution time, task type x machine type
  Matrix apc;                             // average power draw, task type x machine type
  double price = 0.0;
  double energy_cost = 0.0;

  friend bool operator==(const Instance&, const Instance&) = default;

  int task_types() const { return static_cast<int>(tasks_per_type.size()); }
  int machine_types() const { return static_cast<int>(machines_per_type.size()); }

  long long total_tasks() const {
    long long s = 0;
    for (long long t : tasks_per_type) s += t;
    return s;
  }

  // Energy consumed by one task of type i on a machine of type j.
  double energy_per_task(int i, int j) const { return apc(i, j) * etc(i, j); }

  void validate() const {
    const int T = task_types();
    const int M = machine_types();
    require(T >= 1, ErrorCode::Validation, "instance needs at least one task type");
    require(M >= 1, ErrorCode::Validation, "instance needs at least one machine type");
    require(etc.rows() == T && etc.cols() == M, ErrorCode::Validation,
            "etc matrix must be task_types x machine_types");
    require(apc.rows() == T && apc.cols() == M, ErrorCode::Validation,
            "apc matrix must be task_types x machine_types");
    bool any_task = false;
    for (int i = 0; i < T; ++i) {
      require(tasks_per_type[i] >= 0, ErrorCode::Validation,
              "task_types[" + std::to_string(i) + "].count must be >= 0");
      any_task = any_task || tasks_per_type[i] >= 1;
    }
    require(any_task, ErrorCode::Validation, "instance needs at least one task");
    for (int j = 0; j < M; ++j)
      require(machines_per_type[j] >= 1, ErrorCode::Validation,
              "machine_types[" + std::to_string(j) + "].count must be >= 1");
    for (int i = 0; i < T; ++i)
      for (int j = 0; j < M; ++j) {
        const std::string at = "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        require(std::isfinite(etc(i, j)) && etc(i, j) > 0.0, ErrorCode::Validation,
                "etc" + at + " must be finite and > 0");
        require(std::isfinite(apc(i, j)) && apc(i, j) > 0.0, ErrorCode::Validation,
                "apc" + at + " must be finite and > 0");
      }
    require(std::isfinite(price), ErrorCode::Validation, "price must be finite");
    require(std::isfinite(energy_cost) && energy_cost >= 0.0, ErrorCode::Validation,
            "energy_cost must be finite and >= 0");
  }
};

// How many tasks of each type run on each machine type; x(i, j) counts tasks
// of type i placed on machines of type j.
struct TypeLevelSchedule {
  CountMatrix x;
};

// Full placement: counts[j][k][i] tasks of type i on the k-th machine of
// machine type j.
struct MachineLevelSchedule {
  std::vector<std::vector<std::vector<long long>>> counts;

  TypeLevelSchedule type_level(int task_types) const {
    TypeLevelSchedule s;
    s.x = CountMatrix(task_types, static_cast<int>(counts.size()));
    for (int j = 0; j < static_cast<int>(counts.size()); ++j)
      for (const auto& machine : counts[j])
        for (int i = 0; i < task_types; ++i) s.x(i, j) += machine[i];
    return s;
  }
};

inline void check_schedule_shape(const Instance& inst, const MachineLevelSchedule& s) {
  require(static_cast<int>(s.counts.size()) == inst.machine_types(), ErrorCode::Contract,
          "schedule has wrong machine-type count");
  for (int j = 0; j < inst.machine_types(); ++j) {
    require(static_cast<int>(s.counts[j].size()) == inst.machines_per_type[j],
            ErrorCode::Contract, "schedule has wrong machine count for a type");
    for (const auto& machine : s.counts[j])
      require(static_cast<int>(machine.size()) == inst.task_types(),
              ErrorCode::Contract, "schedule machine vector has wrong length");
  }
}

// Completion time of machine k of machine type j.
inline double finish_time(const Instance& inst, const MachineLevelSchedule& s,
                          int j, int k) {
  check_schedule_shape(inst, s);
  require(j >= 0 && j < inst.machine_types(), ErrorCode::Contract,
          "machine type index out of range");
  require(k >= 0 && k < inst.machines_per_type[j], ErrorCode::Contract,
          "machine index out of range");
  double t = 0.0;
  for (int i = 0; i < inst.task_types(); ++i)
    t += static_cast<double>(s.counts[j][k][i]) * inst.etc(i, j);
  return t;
}

// Latest completion time over all machines.
inline double makespan(const Instance& inst, const MachineLevelSchedule& s) {
  check_schedule_shape(inst, s);
  double ms = 0.0;
  for (int j = 0; j < inst.machine_types(); ++j)
    for (int k = 0; k < inst.machines_per_type[j]; ++k) {
      double t = 0.0;
      for (int i = 0; i < inst.task_types(); ++i)
        t += static_cast<double>(s.counts[j][k][i]) * inst.etc(i, j);
      ms = std::max(ms, t);
    }
  return ms;
}

// Total energy drawn by a type-level assignment. Energy does not depend on
// how tasks are spread within a machine type.
inline double energy(const Instance& inst, const TypeLevelSchedule& s) {
  require(s.x.rows() == inst.task_types() && s.x.cols() == inst.machine_types(),
          ErrorCode::Contract, "type-level schedule has wrong shape");
  double e = 0.0;
  for (int i = 0; i < inst.task_types(); ++i)
    for (int j = 0; j < inst.machine_types(); ++j)
      e += static_cast<double>(s.x(i, j)) * inst.energy_per_task(i, j);
  return e;
}

// Profit per unit time: (price - energy_cost * energy) / makespan.
inline double profit_rate(const Instance& inst, double total_energy, double ms) {
  require(ms > 0.0, ErrorCode::Degenerate,
          "profit rate undefined for non-positive makespan");
  return (inst.price - inst.energy_cost * total_energy) / ms;
}

// Least energy any complete assignment can draw: every task of each type on
// its cheapest-energy machine type, ignoring makespan.
inline double min_total_energy(const Instance& inst) {
  double e = 0.0;
  for (int i = 0; i < inst.task_types(); ++i) {
    double best = inst.energy_per_task(i, 0);
    for (int j = 1; j < inst.machine_types(); ++j)
      best = std::min(best, inst.energy_per_task(i, j));
    e += static_cast<double>(inst.tasks_per_type[i]) * best;
  }
  return e;
}

enum class Method { Ttb, Tms, Oracle, MinEnergy };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Ttb: return "TTB";
    case Method::Tms: return "TMS";
    case Method::Oracle: return "ORACLE";
    case Method::MinEnergy: return "MIN_ENERGY";
  }
  return "UNKNOWN";
}

struct SolutionReport {
  MachineLevelSchedule schedule;
  double makespan = 0.0;
  double energy = 0.0;
  double profit_rate = 0.0;
  std::optional<double> ms_candidate;  // set by the sweep solver only
  Method method = Method::Ttb;
};

}  // namespace eapms

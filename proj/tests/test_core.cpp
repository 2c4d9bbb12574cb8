#include <catch2/catch_amalgamated.hpp>

#include "catch_util.hpp"
#include "helpers.hpp"

using namespace eapms;
using Catch::Matchers::WithinAbs;
using testutil::expect_error;
using testutil::instance_a;
using testutil::single_cell;

TEST_CASE("integer snapping rounds only near-integers") {
  CHECK(snap_to_integer(2.0 - 1e-10) == 2.0);
  CHECK(snap_to_integer(2.0 + 1e-10) == 2.0);
  CHECK(snap_to_integer(2.5) == 2.5);
  CHECK(snap_to_integer(0.0) == 0.0);
  CHECK(snap_to_integer(-1e-10) == 0.0);
  // The tolerance grows with magnitude so big counts still snap.
  CHECK(snap_to_integer(1e6 + 5e-7) == 1e6);
}

TEST_CASE("matrix literals reject ragged rows") {
  expect_error(ErrorCode::Contract, "ragged",
               [] { Matrix::from_rows({{1, 2}, {3}}); });
  expect_error(ErrorCode::Contract, "ragged",
               [] { CountMatrix::from_rows({{1}, {2, 3}}); });
}

TEST_CASE("count matrix row sums") {
  CountMatrix m = CountMatrix::from_rows({{1, 2}, {0, 7}});
  CHECK(m.row_sum(0) == 3);
  CHECK(m.row_sum(1) == 7);
}

TEST_CASE("instance counts and totals") {
  Instance a = instance_a();
  a.validate();
  CHECK(a.task_types() == 2);
  CHECK(a.machine_types() == 2);
  CHECK(a.total_tasks() == 3);
  CHECK(a.energy_per_task(0, 0) == 2.0);
  CHECK(a.energy_per_task(0, 1) == 2.0);
  CHECK(a.energy_per_task(1, 0) == 3.0);
  CHECK(a.energy_per_task(1, 1) == 2.0);
}

TEST_CASE("instance validation names the offending field") {
  Instance a = instance_a();
  a.apc(1, 0) = -1;
  expect_error(ErrorCode::Validation, "apc[1][0]", [&] { a.validate(); });

  Instance b = instance_a();
  b.etc(0, 1) = 0.0;
  expect_error(ErrorCode::Validation, "etc[0][1]", [&] { b.validate(); });

  Instance c = instance_a();
  c.tasks_per_type[1] = -2;
  expect_error(ErrorCode::Validation, "task_types[1].count", [&] { c.validate(); });

  Instance d = instance_a();
  d.machines_per_type[0] = 0;
  expect_error(ErrorCode::Validation, "machine_types[0].count",
               [&] { d.validate(); });

  Instance e = instance_a();
  e.tasks_per_type = {0, 0};
  expect_error(ErrorCode::Validation, "at least one task", [&] { e.validate(); });

  Instance f = instance_a();
  f.energy_cost = -0.5;
  expect_error(ErrorCode::Validation, "energy_cost", [&] { f.validate(); });

  Instance g = instance_a();
  g.etc = Matrix(3, 2, 1.0);
  expect_error(ErrorCode::Validation, "etc matrix", [&] { g.validate(); });
}

TEST_CASE("machine-level metrics on a hand schedule") {
  Instance a = instance_a();
  MachineLevelSchedule s;
  // Machine type 0 (one machine): both type-0 tasks. Machine type 1: the
  // type-1 task.
  s.counts = {{{2, 0}}, {{0, 1}}};
  check_schedule_shape(a, s);
  CHECK_THAT(finish_time(a, s, 0, 0), WithinAbs(2.0, 1e-12));
  CHECK_THAT(finish_time(a, s, 1, 0), WithinAbs(1.0, 1e-12));
  CHECK_THAT(makespan(a, s), WithinAbs(2.0, 1e-12));

  TypeLevelSchedule t = s.type_level(a.task_types());
  CHECK(t.x == CountMatrix::from_rows({{2, 0}, {0, 1}}));
  CHECK_THAT(energy(a, t), WithinAbs(6.0, 1e-12));
  CHECK_THAT(profit_rate(a, energy(a, t), makespan(a, s)), WithinAbs(2.0, 1e-12));
}

TEST_CASE("energy is linear in the assignment counts") {
  Instance a = instance_a();
  TypeLevelSchedule one;
  one.x = CountMatrix::from_rows({{1, 1}, {1, 0}});
  TypeLevelSchedule doubled;
  doubled.x = CountMatrix::from_rows({{2, 2}, {2, 0}});
  CHECK_THAT(energy(a, doubled), WithinAbs(2.0 * energy(a, one), 1e-12));
}

TEST_CASE("profit rate rejects non-positive makespan") {
  Instance a = instance_a();
  expect_error(ErrorCode::Degenerate, "makespan",
               [&] { profit_rate(a, 1.0, 0.0); });
  expect_error(ErrorCode::Degenerate, "makespan",
               [&] { profit_rate(a, 1.0, -2.0); });
}

TEST_CASE("minimum achievable energy picks the cheapest machine type per task") {
  CHECK_THAT(min_total_energy(instance_a()), WithinAbs(6.0, 1e-12));
  CHECK_THAT(min_total_energy(single_cell()), WithinAbs(2.0, 1e-12));
}

TEST_CASE("schedule shape checks catch malformed placements") {
  Instance a = instance_a();
  MachineLevelSchedule wrong_types;
  wrong_types.counts = {{{2, 0}}};  // only one machine type
  expect_error(ErrorCode::Contract, "machine-type count",
               [&] { check_schedule_shape(a, wrong_types); });

  MachineLevelSchedule wrong_machines;
  wrong_machines.counts = {{{2, 0}, {0, 0}}, {{0, 1}}};  // two machines in type 0
  expect_error(ErrorCode::Contract, "machine count",
               [&] { check_schedule_shape(a, wrong_machines); });

  MachineLevelSchedule wrong_len;
  wrong_len.counts = {{{2}}, {{0, 1}}};  // machine vector too short
  expect_error(ErrorCode::Contract, "wrong length",
               [&] { check_schedule_shape(a, wrong_len); });
}

TEST_CASE("method names are stable report tags") {
  CHECK(std::string(to_string(Method::Ttb)) == "TTB");
  CHECK(std::string(to_string(Method::Tms)) == "TMS");
  CHECK(std::string(to_string(Method::Oracle)) == "ORACLE");
  CHECK(std::string(to_string(Method::MinEnergy)) == "MIN_ENERGY");
}

TEST_CASE("error codes render as stable tags") {
  CHECK(std::string(to_string(ErrorCode::Parse)) == "PARSE");
  CHECK(std::string(to_string(ErrorCode::Validation)) == "VALIDATION");
  CHECK(std::string(to_string(ErrorCode::Budget)) == "BUDGET");
  CHECK(std::string(to_string(ErrorCode::Infeasible)) == "INFEASIBLE");
  Error err(ErrorCode::Contract, "boom");
  CHECK(err.code() == ErrorCode::Contract);
  CHECK(std::string(err.what()) == "boom");
}

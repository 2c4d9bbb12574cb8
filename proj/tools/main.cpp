// Command-line front end: solve one instance, generate random instances, or
// run an experiment sweep to CSV.
//
// Exit codes: 0 success; 2 input problem (parse or validation); 3 resource
// problem (enumeration budget or infeasibility); 1 anything else.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eapms/eapms.hpp"

namespace {

nlohmann::ordered_json schedule_to_json(const eapms::MachineLevelSchedule& s) {
  nlohmann::ordered_json machine_types = nlohmann::ordered_json::array();
  for (const auto& machines : s.counts) {
    nlohmann::ordered_json per_machine = nlohmann::ordered_json::array();
    for (const auto& counts : machines) per_machine.push_back(counts);
    machine_types.push_back(std::move(per_machine));
  }
  return machine_types;
}

int run_solve(const std::string& input, const std::string& method, double epsilon,
              const std::optional<double>& gamma, long long budget,
              const std::string& ub_rule, bool show_schedule) {
  eapms::Instance inst = eapms::load_instance(input);
  if (gamma) inst = eapms::reprice(inst, *gamma);

  eapms::SolutionReport report;
  if (method == "ttb") {
    eapms::SweepConfig cfg;
    cfg.epsilon = epsilon;
    cfg.ub_rule = ub_rule == "power" ? eapms::UbRule::MinAveragePower
                                     : eapms::UbRule::MinEnergyPerTask;
    report = eapms::ttb_solve(inst, cfg);
  } else if (method == "tms") {
    report = eapms::tms_solve(inst);
  } else {
    report = eapms::exact_opt(inst, eapms::OracleBudget{budget});
  }

  nlohmann::ordered_json out;
  out["method"] = eapms::to_string(report.method);
  out["tasks"] = inst.total_tasks();
  out["makespan"] = report.makespan;
  out["energy"] = report.energy;
  out["profit_rate"] = report.profit_rate;
  if (report.ms_candidate) out["ms_candidate"] = *report.ms_candidate;
  if (show_schedule) out["schedule"] = schedule_to_json(report.schedule);
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware profit-per-time scheduler for heterogeneous machine types"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance file");
  std::string input;
  solve->add_option("--input", input, "Instance JSON file")->required();
  std::string method = "ttb";
  solve->add_option("--method", method, "Solver: ttb, tms, or oracle")
      ->check(CLI::IsMember({"ttb", "tms", "oracle"}));
  double epsilon = 0.1;
  solve->add_option("--epsilon", epsilon, "Candidate-sweep step (ttb)");
  std::optional<double> gamma;
  solve->add_option("--gamma", gamma,
                    "Override price to gamma * minimum achievable energy");
  long long budget = 10'000'000;
  solve->add_option("--budget", budget, "Enumeration state budget (oracle)");
  std::string ub_rule = "energy";
  solve->add_option("--ub-rule", ub_rule,
                    "Greedy upper-bound rule: energy (per-task energy) or power")
      ->check(CLI::IsMember({"energy", "power"}));
  bool show_schedule = false;
  solve->add_flag("--schedule", show_schedule,
                  "Include per-machine task counts in the output");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance file");
  std::uint64_t seed = 1;
  gen->add_option("--seed", seed, "Master seed");
  int q = 1;
  gen->add_option("--q", q, "Experiment index (scales the task count)");
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output instance file")->required();
  double gen_gamma = 1.2;
  gen->add_option("--gamma", gen_gamma, "Price multiplier");
  int types = 30;
  gen->add_option("--types", types, "Task type count");
  int machine_types = 9;
  gen->add_option("--machine-types", machine_types, "Machine type count");
  int machines_per_type = 40;
  gen->add_option("--machines-per-type", machines_per_type, "Machines per type");
  long long tasks_per_q = 150;
  gen->add_option("--tasks-per-q", tasks_per_q, "Tasks per experiment index");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a sweep to CSV");
  std::string spec_path;
  experiment->add_option("--spec", spec_path, "Experiment spec JSON file")
      ->required();
  std::string csv_path;
  experiment->add_option("--out", csv_path, "Output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (solve->parsed())
      return run_solve(input, method, epsilon, gamma, budget, ub_rule,
                       show_schedule);
    if (gen->parsed()) {
      eapms::ExperimentSpec spec;
      spec.gammas = {gen_gamma};
      spec.seed = seed;
      spec.task_type_count = types;
      spec.machine_type_count = machine_types;
      spec.machines_per_type = machines_per_type;
      spec.tasks_per_q = tasks_per_q;
      eapms::Instance inst = eapms::gen_random(spec, q);
      eapms::save_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << " (" << inst.total_tasks() << " tasks, "
                << inst.task_types() << " task types, " << inst.machine_types()
                << " machine types)\n";
      return 0;
    }
    eapms::ExperimentSpec spec = eapms::load_experiment_spec(spec_path);
    std::vector<eapms::ExperimentRow> rows = eapms::run_experiment(spec);
    eapms::save_csv(rows, csv_path);
    std::cout << "wrote " << rows.size() << " rows to " << csv_path << "\n";
    return 0;
  } catch (const eapms::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", eapms::to_string(e.code()), e.what());
    switch (e.code()) {
      case eapms::ErrorCode::Parse:
      case eapms::ErrorCode::Validation:
        return 2;
      case eapms::ErrorCode::Budget:
      case eapms::ErrorCode::Infeasible:
        return 3;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

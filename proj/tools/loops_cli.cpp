#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "loops/error.hpp"
#include "loops/experiments.hpp"

namespace {

int run_experiment(const std::string& name, const std::string& config, std::optional<std::uint64_t> seed,
                   const std::string& out, int jobs) {
  loops::ExperimentConfig cfg = loops::load_config(name, config);
  cfg.out_dir = out;
  loops::RunOptions o;
  o.seed = seed;
  o.jobs = jobs;
  const auto rec = loops::run(cfg, o);
  loops::write_csv(std::cout, loops::record_table(rec));
  for (const auto& n : rec.notes) std::cout << "# " << n << '\n';
  if (!rec.error.empty()) std::cerr << "error: " << rec.error << '\n';
  std::cout << rec.experiment << ": " << (rec.passed() ? "PASS" : "FAIL") << '\n';
  return rec.passed() ? 0 : 1;
}

int run_report(const std::vector<std::string>& files, const std::string& out) {
  std::vector<loops::RunRecord> all;
  for (const auto& f : files) {
    auto r = loops::read_records(f);
    all.insert(all.end(), r.begin(), r.end());
  }
  const auto t = loops::report(all);
  loops::write_csv(std::cout, t);
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream csv(std::filesystem::path(out) / "summary.csv");
    loops::write_csv(csv, t);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar loop measure experiments"};
  app.require_subcommand(1);

  std::string config, out;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string chosen;
  for (const auto& info : loops::experiment_registry()) {
    auto* sub = app.add_subcommand(info.name, info.summary);
    sub->add_option("--config", config, "flat key = value file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--out", out, "output directory for records, tables and plots");
    sub->add_option("--jobs", jobs, "worker threads (LOOPS_JOBS if unset)")->check(CLI::NonNegativeNumber);
    std::string help = "parameters:\n";
    for (const auto& p : info.params) help += "  " + p.name + " = " + p.default_value + "    " + p.help + "\n";
    sub->footer(help);
    sub->callback([&chosen, name = info.name] { chosen = name; });
  }
  std::vector<std::string> record_files;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "summary table of stored run records");
  rep->add_option("records", record_files, "records.jsonl files")->check(CLI::ExistingFile);
  rep->add_option("--out", report_out, "directory for summary.csv");
  auto* list = app.add_subcommand("list", "registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (list->parsed()) {
      for (const auto& info : loops::experiment_registry()) std::cout << info.name << "  " << info.summary << '\n';
      return 0;
    }
    if (rep->parsed()) return run_report(record_files, report_out);
    return run_experiment(chosen, config, seed, out, jobs);
  } catch (const loops::Error& e) {
    std::cerr << e.what() << '\n';
    return (e.code() == loops::ErrorCode::InvalidConfig || e.code() == loops::ErrorCode::UnknownExperiment) ? 2 : 1;
  }
}

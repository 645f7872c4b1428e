// Command-line front end: run experiments from YAML configs, compare
// control laws, render trace plots, and execute the runtime invariant
// suite.
//
// Exit codes: 0 clean run, 1 configuration/usage error, 2 joint-limit
// violation, 3 numerical divergence, 4 failed selftest.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jla/analysis.hpp"
#include "jla/config.hpp"
#include "jla/plot.hpp"
#include "jla/selftest.hpp"
#include "jla/simulation.hpp"
#include "jla/trace.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string law_override;
  double dt_override = 0;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  std::string out_dir;
};

std::string out_path(const CommonOpts& opts, const std::string& name) {
  if (opts.out_dir.empty()) return name;
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / fs::path(name).filename()).string();
}

jla::ExperimentConfig load_with_overrides(const CommonOpts& opts) {
  jla::ExperimentConfig cfg = jla::load_experiment_config(opts.config_path);
  if (!opts.law_override.empty()) {
    cfg.sim.controller.law = jla::parse_law(opts.law_override);
    cfg.sim.validate();
  }
  if (opts.dt_override > 0) cfg.sim.dt = opts.dt_override;
  if (opts.seed_set) {
    cfg.seed = opts.seed_override;
    if (cfg.fuzz) cfg.fuzz->seed = opts.seed_override;
  }
  return cfg;
}

int exit_code_for(const jla::RunReport& rep) {
  if (rep.status == jla::RunStatus::diverged) return 3;
  if (rep.violation) return 2;
  return 0;
}

int cmd_run(const CommonOpts& opts) {
  const jla::ExperimentConfig cfg = load_with_overrides(opts);

  if (cfg.fuzz) {
    const auto configs = jla::make_fuzz_configs(cfg.sim, *cfg.fuzz);
    std::ofstream csv(out_path(opts, cfg.report_path));
    csv << jla::RunReport::csv_header() << '\n';
    int violations = 0, diverged = 0, completed = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const jla::SimTrace trace = jla::run(configs[i]);
      const jla::RunReport rep = jla::report(trace, configs[i].limits);
      csv << rep.to_csv_row("run" + std::to_string(i)) << '\n';
      if (rep.violation) ++violations;
      if (rep.status == jla::RunStatus::diverged) ++diverged;
      if (rep.status == jla::RunStatus::completed) ++completed;
      min_margin = std::min(min_margin, rep.min_margin_overall);
    }
    std::cout << "randomized batch '" << cfg.name << "': " << configs.size()
              << " runs, " << completed << " completed, " << violations
              << " with limit violations, " << diverged << " diverged\n"
              << "worst margin over all runs: " << min_margin << " rad\n"
              << "per-run summary: " << out_path(opts, cfg.report_path)
              << '\n';
    if (diverged > 0) return 3;
    return violations > 0 ? 2 : 0;
  }

  const jla::SimTrace trace = jla::run(cfg.sim);
  const jla::RunReport rep = jla::report(trace, cfg.sim.limits);

  const std::string trace_file = out_path(opts, cfg.trace_path);
  jla::write_trace_csv(trace, trace_file);
  const std::string report_file = out_path(opts, cfg.report_path);
  {
    std::ofstream out(report_file);
    out << "experiment: " << cfg.name << '\n'
        << "law: " << jla::to_string(cfg.sim.controller.law) << '\n'
        << rep.to_text();
  }
  std::cout << "experiment: " << cfg.name << '\n'
            << "law: " << jla::to_string(cfg.sim.controller.law) << '\n'
            << rep.to_text() << "trace:  " << trace_file << '\n'
            << "report: " << report_file << '\n';
  if (cfg.plots) {
    const std::string stem =
        (fs::path(trace_file).parent_path() / fs::path(trace_file).stem())
            .string();
    for (const auto& f : jla::render_trace_plots(trace, stem)) {
      std::cout << "plot:   " << f << '\n';
    }
  }
  return exit_code_for(rep);
}

int count_violation_instants(const jla::SimTrace& trace) {
  int count = 0;
  for (const auto& r : trace.records) {
    if (r.margin.minCoeff() <= 0) ++count;
  }
  if (trace.status == jla::RunStatus::hit_boundary) ++count;
  return count;
}

int cmd_compare(const CommonOpts& opts) {
  jla::ExperimentConfig cfg = load_with_overrides(opts);
  if (cfg.compare_laws.size() < 2) {
    std::cerr << "error: config must list at least two laws under "
                 "'compare_laws'\n";
    return 1;
  }

  const bool force_mode =
      cfg.sim.force.kind == jla::ExternalForceProfile::Kind::ramp;
  std::cout << "experiment: " << cfg.name << '\n';

  std::vector<std::pair<std::string, double>> breaking;
  std::ofstream csv(out_path(opts, cfg.report_path));
  csv << jla::RunReport::csv_header();
  csv << (force_mode ? ",breaking_force_N,broke\n" : "\n");

  for (const jla::ControlLaw law : cfg.compare_laws) {
    jla::SimConfig sim = cfg.sim;
    sim.controller.law = law;
    const std::string name = jla::to_string(law);

    if (force_mode) {
      const jla::BreakingForceResult bf = jla::force_ramp_experiment(sim);
      // Margins/errors reported from a run at the breaking cap.
      jla::SimConfig probe = sim;
      probe.force.cap = bf.force;
      const jla::SimTrace trace = jla::run(probe);
      const jla::RunReport rep = jla::report(trace, sim.limits);
      breaking.emplace_back(name, bf.force);
      std::cout << std::left << std::setw(10) << name << " breaking force "
                << (bf.broke ? "= " : ">= ") << bf.force << " N  ("
                << bf.runs << " probe runs)\n";
      csv << rep.to_csv_row(name) << ',' << bf.force << ','
          << (bf.broke ? 1 : 0) << '\n';
    } else {
      const jla::SimTrace trace = jla::run(sim);
      const jla::RunReport rep = jla::report(trace, sim.limits);
      const int instants = count_violation_instants(trace);
      std::cout << std::left << std::setw(10) << name << " violations: "
                << std::setw(6) << instants
                << " min margin: " << std::setw(12) << rep.min_margin_overall
                << " final |q err|: " << std::setw(12) << rep.final_q_err
                << " max |tau|: " << rep.max_abs_tau << '\n';
      csv << rep.to_csv_row(name) << '\n';
      const std::string trace_file = out_path(
          opts, fs::path(cfg.trace_path).stem().string() + "_" + name + ".csv");
      jla::write_trace_csv(trace, trace_file);
    }
  }

  auto find_force = [&](const std::string& name) -> std::optional<double> {
    for (const auto& [n, f] : breaking) {
      if (n == name) return f;
    }
    return std::nullopt;
  };
  if (force_mode) {
    const auto fp = find_force("proposed");
    const auto fc = find_force("classical");
    if (fp && fc && *fc > 0) {
      std::cout << "breaking-force ratio proposed/classical: " << *fp / *fc
                << '\n';
    } else if (breaking.size() >= 2 && breaking[0].second > 0) {
      std::cout << "breaking-force ratio " << breaking[1].first << "/"
                << breaking[0].first << ": "
                << breaking[1].second / breaking[0].second << '\n';
    }
  }
  std::cout << "summary: " << out_path(opts, cfg.report_path) << '\n';
  return 0;
}

int cmd_selftest() {
  const auto results = jla::run_selftests();
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << std::left
              << std::setw(static_cast<int>(width) + 2) << r.name << r.detail
              << '\n';
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "all invariants hold\n" : "invariant FAILURES\n");
  return all_pass ? 0 : 4;
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir) {
  const jla::SimTrace trace = jla::read_trace_csv(trace_path);
  fs::path stem = fs::path(trace_path).parent_path() / fs::path(trace_path).stem();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    stem = fs::path(out_dir) / fs::path(trace_path).stem();
  }
  for (const auto& f : jla::render_trace_plots(trace, stem.string())) {
    std::cout << "plot: " << f << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Torque-controlled manipulator simulator with joint-limit-avoiding "
      "control laws"};
  app.require_subcommand(1);

  CommonOpts run_opts, cmp_opts;
  std::string plot_trace, plot_out;

  auto add_common = [](CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("config", o.config_path, "experiment config (YAML)")
        ->required();
    cmd->add_option("--law", o.law_override,
                    "override the control law (classical|proposed|setpoint)");
    cmd->add_option("--dt", o.dt_override, "override the integration step [s]");
    auto* seed =
        cmd->add_option("--seed", o.seed_override, "override the batch seed");
    cmd->callback([&o, seed] { o.seed_set = seed->count() > 0; });
    cmd->add_option("--out-dir", o.out_dir, "directory for output artifacts");
  };

  CLI::App* run = app.add_subcommand(
      "run", "run one experiment (or a randomized batch) from a config");
  add_common(run, run_opts);

  CLI::App* cmp = app.add_subcommand(
      "compare", "run the config once per law in compare_laws and tabulate");
  add_common(cmp, cmp_opts);

  app.add_subcommand("selftest",
                     "run the runtime invariant suite and print a "
                     "pass/fail matrix");

  CLI::App* plot =
      app.add_subcommand("plot", "render SVG figures from a trace CSV");
  plot->add_option("trace", plot_trace, "trace CSV file")->required();
  plot->add_option("--out-dir", plot_out, "directory for the SVG files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (cmp->parsed()) return cmd_compare(cmp_opts);
    if (app.get_subcommand("selftest")->parsed()) return cmd_selftest();
    if (plot->parsed()) return cmd_plot(plot_trace, plot_out);
  } catch (const jla::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const jla::OutOfFeasibleSpace& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

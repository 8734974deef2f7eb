// Benchmark harness CLI: run solver/problem combinations, execute grids of
// runs, and fit empirical convergence slopes from trace CSVs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "firstorder/bench.hpp"

namespace fs = std::filesystem;
using namespace firstorder;

namespace {

int cmd_run(const RunSpec& spec_in, const std::string& out_dir) {
  RunSpec spec = spec_in;
  if (spec.id.empty()) spec.id = spec.problem + "_" + spec.solver;
  auto outcomes = run_grid({spec}, out_dir);
  const auto& out = outcomes.front();
  if (!out.ok) {
    std::cerr << "run failed: " << out.error << "\n";
    return 1;
  }
  std::cout << "trace: " << out.trace_path << "\n"
            << "final energy: " << out.final_energy << "\n"
            << "best energy:  " << out.best_energy << "\n"
            << "sec/iter:     " << out.sec_per_iter << "\n";
  if (out.fit)
    std::cout << "slope:        " << out.fit->slope << " (r2 " << out.fit->r2
              << ")\n";
  return 0;
}

int cmd_grid(const std::string& spec_path, const std::string& out_dir) {
  std::ifstream in(spec_path);
  if (!in) {
    std::cerr << "cannot open grid spec: " << spec_path << "\n";
    return 1;
  }
  std::vector<RunSpec> specs;
  try {
    specs = parse_grid_file(in);
  } catch (const std::exception& e) {
    std::cerr << "grid spec error: " << e.what() << "\n";
    return 1;
  }
  auto outcomes = run_grid(specs, out_dir);
  int failed = 0;
  for (const auto& out : outcomes) {
    std::cout << out.spec.id << ": " << (out.ok ? "ok" : "FAILED " + out.error)
              << "\n";
    if (!out.ok) ++failed;
  }
  std::cout << "summary: " << (fs::path(out_dir) / "summary.csv").string()
            << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_slopes(const std::vector<std::string>& traces, double e_hat,
               long window_begin, long window_end) {
  int rc = 0;
  for (const auto& path : traces) {
    std::ifstream in(path);
    if (!in) {
      std::cerr << path << ": cannot open\n";
      rc = 1;
      continue;
    }
    try {
      Trace trace = read_trace_csv(in);
      long wb = window_begin, we = window_end;
      if (we <= 0) {
        auto [b, e] = default_slope_window(trace.records.back().iter);
        if (wb <= 0) wb = b;
        we = e;
      }
      SlopeFit fit = fit_loglog_slope(trace, e_hat, wb, we);
      std::cout << path << ": slope " << fit.slope << " intercept "
                << fit.intercept << " r2 " << fit.r2 << " window [" << wb
                << ", " << we << "]\n";
    } catch (const std::exception& e) {
      std::cerr << path << ": " << e.what() << "\n";
      rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order solver benchmark harness"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string out_dir = "out";

  auto* run = app.add_subcommand("run", "execute a single solver run");
  run->add_option("--problem", spec.problem, "problem name")
      ->required()
      ->check(CLI::IsMember(registered_problems()));
  run->add_option("--solver", spec.solver, "pdcp|pdcp_online|fobos|fista")
      ->required();
  run->add_option("--lambda", spec.lambda, "regularization weight (problem default when omitted)");
  run->add_option("--max-iters", spec.max_iters, "iteration budget");
  run->add_option("--a", spec.a_ratio, "PD CP step ratio a = sqrt(tau/sigma)");
  run->add_option("--fobos-c", spec.fobos_C, "Fobos step constant C");
  run->add_option("--eps", spec.smooth_eps, "FISTA smoothing parameter");
  run->add_option("--eps-width", spec.eps_width, "eps-insensitive loss width");
  run->add_option("--theta", spec.theta, "PD CP relaxation");
  run->add_option("--kappa", spec.kappa, "online step smoothing");
  run->add_option("--seed", spec.seed, "synthetic data seed");
  run->add_option("--record-every", spec.record_every, "trace cadence");
  run->add_option("--data", spec.data_path, "dataset file (synthetic when omitted)");
  run->add_option("--out", out_dir, "output directory");

  std::string grid_spec;
  auto* grid = app.add_subcommand("grid", "execute a grid of runs from a spec file");
  grid->add_option("spec", grid_spec, "grid spec file (key=value blocks)")
      ->required();
  grid->add_option("--out", out_dir, "output directory");

  std::vector<std::string> slope_traces;
  double e_hat = 0.0;
  long wb = 0, we = 0;
  auto* slopes = app.add_subcommand("slopes", "fit log-log slopes on trace CSVs");
  slopes->add_option("traces", slope_traces, "trace CSV files")->required();
  slopes->add_option("--ehat", e_hat, "reference optimal energy")->required();
  slopes->add_option("--window-begin", wb, "first iteration of the fit window");
  slopes->add_option("--window-end", we, "last iteration of the fit window");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(spec, out_dir);
    if (grid->parsed()) return cmd_grid(grid_spec, out_dir);
    if (slopes->parsed()) return cmd_slopes(slope_traces, e_hat, wb, we);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

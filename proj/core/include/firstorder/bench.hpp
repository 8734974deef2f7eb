#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "firstorder/problems.hpp"
#include "firstorder/solvers.hpp"

namespace firstorder {

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One benchmark run: a problem, a solver and their parameters.
struct RunSpec {
  std::string id;          // derived from problem/solver when empty
  std::string problem;     // registered problem name
  std::string solver;      // pdcp | pdcp_online | fobos | fista
  double lambda = -1.0;    // negative -> the problem's default
  long max_iters = 10000;
  double a_ratio = 1.0;
  double fobos_C = 1.0;
  double smooth_eps = 1e-2;
  double kappa = 0.618;
  double theta = 1.0;
  double eps_width = 0.1;  // eps-insensitive width (multitask)
  long record_every = 1;
  unsigned seed = 0;
  std::string data_path;   // dataset file; empty -> seeded synthetic data
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  long window_begin = 0;
  long window_end = 0;
};

struct RunOutcome {
  RunSpec spec;
  bool ok = false;
  std::string error;
  double final_energy = 0.0;
  double best_energy = 0.0;
  double sec_per_iter = 0.0;
  std::optional<SlopeFit> fit;
  std::string trace_path;
};

/// Long reference run: PD CP at the given budget for a in {0.1, 1, 10};
/// returns the minimum energy observed across the runs.
double estimate_optimum(const ProblemSpec& problem, long budget);

/// Least-squares line on (log10 n, log10(E^n - e_hat)) over records with
/// window_begin <= n <= window_end and E^n > e_hat. Throws
/// InsufficientDataError below 10 usable points.
SlopeFit fit_loglog_slope(const Trace& trace, double e_hat, long window_begin,
                          long window_end);

/// Default fit window: the last two decades of the iteration budget.
std::pair<long, long> default_slope_window(long budget);

/// Mean seconds per iteration between the first and last record.
double report_per_iteration_time(const Trace& trace);

/// Problem registry used by the CLI: dim_reduction, linear_svm,
/// kernel_svm_primal, kernel_svm_dual, feature_selection, multitask,
/// matrix_factorization. Synthetic data unless spec.data_path is set.
ProblemSpec instantiate_problem(const RunSpec& spec);
std::vector<std::string> registered_problems();

/// Runs one spec on an instantiated problem.
SolveResult dispatch_solver(const ProblemSpec& problem, const RunSpec& spec);

/// Executes all specs, writing one trace CSV per run plus summary.csv and
/// plot.gp under out_dir. Individual failures are recorded, not fatal.
std::vector<RunOutcome> run_grid(const std::vector<RunSpec>& specs,
                                 const std::string& out_dir);

/// Grid spec file: one key=value block per run, blocks separated by blank
/// lines, '#' starts a comment.
std::vector<RunSpec> parse_grid_file(std::istream& in);

void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

}  // namespace firstorder

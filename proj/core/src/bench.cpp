#include "firstorder/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "firstorder/dataio.hpp"

namespace firstorder {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double default_lambda(const std::string& problem) {
  if (problem == "dim_reduction") return 1.0;
  if (problem == "linear_svm") return 10.0;
  if (problem == "kernel_svm_primal") return 1.0;
  if (problem == "kernel_svm_dual") return 1.0;
  if (problem == "feature_selection") return 1e-3;
  if (problem == "multitask") return 1e-3;
  if (problem == "matrix_factorization") return 1e-5;
  throw std::invalid_argument("unknown problem: " + problem);
}

void load_svm_data(const RunSpec& spec, Mat& features, Vec& labels,
                   int n_samples) {
  if (!spec.data_path.empty()) {
    std::ifstream in(spec.data_path);
    if (!in) throw std::runtime_error("cannot open " + spec.data_path);
    auto examples = parse_libsvm(in);
    if (examples.size() > static_cast<size_t>(n_samples))
      examples.resize(static_cast<size_t>(n_samples));  // desk scale
    features = densify(examples, &labels);
  } else {
    SyntheticDataConfig cfg;
    cfg.n_samples = n_samples;
    cfg.n_features = 10;
    cfg.seed = spec.seed;
    make_blobs(cfg, features, labels);
  }
}

}  // namespace

std::vector<std::string> registered_problems() {
  return {"dim_reduction",     "linear_svm", "kernel_svm_primal",
          "kernel_svm_dual",   "feature_selection",
          "multitask",         "matrix_factorization"};
}

ProblemSpec instantiate_problem(const RunSpec& spec) {
  double lambda = spec.lambda >= 0.0 ? spec.lambda : default_lambda(spec.problem);
  if (spec.problem == "dim_reduction") {
    SyntheticDataConfig cfg{20, 50, 5, 0.2, 0.1, spec.seed};
    return build_dim_reduction(cfg, lambda, 5);
  }
  if (spec.problem == "linear_svm") {
    Mat features; Vec labels;
    load_svm_data(spec, features, labels, 100);
    return build_linear_svm(features, labels, lambda);
  }
  if (spec.problem == "kernel_svm_primal") {
    Mat features; Vec labels;
    load_svm_data(spec, features, labels, 40);
    return build_kernel_svm_primal(features, labels, lambda);
  }
  if (spec.problem == "kernel_svm_dual") {
    Mat features; Vec labels;
    load_svm_data(spec, features, labels, 50);
    return build_kernel_svm_dual(features, labels, lambda);
  }
  if (spec.problem == "feature_selection") {
    SyntheticDataConfig cfg{50, 40, 8, 0.3, 0.2, spec.seed};
    return build_feature_selection(cfg, lambda);
  }
  if (spec.problem == "multitask") {
    SyntheticDataConfig cfg{30, 20, 3, 0.3, 0.2, spec.seed};
    return build_multitask(cfg, lambda, spec.eps_width);
  }
  if (spec.problem == "matrix_factorization") {
    if (!spec.data_path.empty()) {
      std::ifstream in(spec.data_path);
      if (!in) throw std::runtime_error("cannot open " + spec.data_path);
      auto triples = parse_movielens(in);
      // Desk-scale cut of the ratings matrix; ratings >= 4 map to +1.
      const int max_users = 50, max_items = 80;
      std::vector<std::tuple<int, int, double>> obs;
      std::vector<char> seen(static_cast<size_t>(max_users) * max_items, 0);
      for (const auto& t : triples) {
        if (t.user > max_users || t.item > max_items) continue;
        size_t cell = static_cast<size_t>(t.user - 1) +
                      static_cast<size_t>(t.item - 1) * max_users;
        if (seen[cell]) continue;
        seen[cell] = 1;
        obs.emplace_back(t.user - 1, t.item - 1, t.rating >= 4 ? 1.0 : -1.0);
      }
      return build_matrix_factorization(obs, max_users, max_items, lambda);
    }
    auto obs = make_synthetic_ratings(15, 20, 0.4, spec.seed);
    return build_matrix_factorization(obs, 15, 20, lambda);
  }
  throw std::invalid_argument("unknown problem: " + spec.problem);
}

SolveResult dispatch_solver(const ProblemSpec& problem, const RunSpec& spec) {
  SolverConfig cfg;
  cfg.max_iters = spec.max_iters;
  cfg.theta = spec.theta;
  cfg.a_ratio = spec.a_ratio;
  cfg.fobos_C = spec.fobos_C;
  cfg.smooth_eps = spec.smooth_eps;
  cfg.kappa = spec.kappa;
  cfg.record_every = spec.record_every;
  cfg.seed = spec.seed;

  if (spec.solver == "pdcp") return pdcp_solve(problem.saddle, cfg);
  if (spec.solver == "pdcp_online") return pdcp_online_solve(problem.saddle, cfg);
  if (spec.solver == "fobos") {
    if (!problem.composite)
      throw std::invalid_argument(problem.name + ": no composite form for fobos");
    return fobos_solve(*problem.composite, cfg);
  }
  if (spec.solver == "fista") {
    if (problem.composite && problem.composite->loss_lipschitz)
      return fista_solve(*problem.composite, cfg);
    if (problem.composite_smoothed)
      return fista_solve(problem.composite_smoothed(spec.smooth_eps), cfg);
    throw std::invalid_argument(problem.name + ": no smooth form for fista");
  }
  throw std::invalid_argument("unknown solver: " + spec.solver);
}

double estimate_optimum(const ProblemSpec& problem, long budget) {
  double best = kInf;
  int failures = 0;
  for (double a : {0.1, 1.0, 10.0}) {
    SolverConfig cfg;
    cfg.max_iters = budget;
    cfg.a_ratio = a;
    cfg.record_every = std::max<long>(budget / 200, 1);
    try {
      SolveResult r = pdcp_solve(problem.saddle, cfg);
      for (const auto& rec : r.trace.records) best = std::min(best, rec.energy);
    } catch (const DivergenceError&) {
      ++failures;
    }
  }
  if (failures == 3)
    throw std::runtime_error("estimate_optimum: all reference runs diverged");
  return best;
}

std::pair<long, long> default_slope_window(long budget) {
  return {std::max<long>(budget / 100, 1), budget};
}

SlopeFit fit_loglog_slope(const Trace& trace, double e_hat, long window_begin,
                          long window_end) {
  std::vector<double> xs, ys;
  for (const auto& rec : trace.records) {
    if (rec.iter < window_begin || rec.iter > window_end) continue;
    if (!(rec.energy > e_hat)) continue;
    xs.push_back(std::log10(static_cast<double>(rec.iter)));
    ys.push_back(std::log10(rec.energy - e_hat));
  }
  if (xs.size() < 10)
    throw InsufficientDataError("fit_loglog_slope: fewer than 10 usable points");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i]; sy += ys[i];
    sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i]; syy += ys[i] * ys[i];
  }
  double vxx = sxx - sx * sx / n;
  double vxy = sxy - sx * sy / n;
  double vyy = syy - sy * sy / n;
  SlopeFit fit;
  fit.slope = vxx > 0.0 ? vxy / vxx : 0.0;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = (vxx > 0.0 && vyy > 0.0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  fit.window_begin = window_begin;
  fit.window_end = window_end;
  return fit;
}

double report_per_iteration_time(const Trace& trace) {
  if (trace.records.size() < 2)
    throw InsufficientDataError("report_per_iteration_time: need >= 2 records");
  const auto& first = trace.records.front();
  const auto& last = trace.records.back();
  if (last.iter == first.iter)
    throw InsufficientDataError("report_per_iteration_time: degenerate trace");
  return (last.elapsed_seconds - first.elapsed_seconds) /
         static_cast<double>(last.iter - first.iter);
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "iter,energy,gap,elapsed_seconds\n";
  for (const auto& rec : trace.records) {
    out << rec.iter << ',' << fmt_double(rec.energy) << ',';
    if (rec.gap) out << fmt_double(*rec.gap);
    out << ',' << fmt_double(rec.elapsed_seconds) << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  Trace trace;
  std::string line;
  if (!std::getline(in, line) || line.rfind("iter,energy", 0) != 0)
    throw std::runtime_error("trace csv: missing header");
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f0, f1, f2, f3;
    if (!std::getline(ls, f0, ',') || !std::getline(ls, f1, ',') ||
        !std::getline(ls, f2, ',') || !std::getline(ls, f3))
      throw std::runtime_error("trace csv: malformed line " + std::to_string(lineno));
    TraceRecord rec;
    rec.iter = std::stol(f0);
    rec.energy = std::stod(f1);
    if (!f2.empty()) rec.gap = std::stod(f2);
    rec.elapsed_seconds = std::stod(f3);
    trace.records.push_back(rec);
  }
  return trace;
}

std::vector<RunSpec> parse_grid_file(std::istream& in) {
  std::vector<RunSpec> specs;
  RunSpec cur;
  bool has_any = false;
  std::string line;
  long lineno = 0;

  auto flush = [&]() {
    if (!has_any) return;
    if (cur.problem.empty() || cur.solver.empty())
      throw std::invalid_argument("grid file: block missing problem or solver");
    specs.push_back(cur);
    cur = RunSpec{};
    has_any = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("grid file: expected key=value at line " +
                                  std::to_string(lineno));
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    key = strip(key);
    val = strip(val);

    has_any = true;
    if (key == "id") cur.id = val;
    else if (key == "problem") cur.problem = val;
    else if (key == "solver") cur.solver = val;
    else if (key == "lambda") cur.lambda = std::stod(val);
    else if (key == "max_iters") cur.max_iters = std::stol(val);
    else if (key == "a") cur.a_ratio = std::stod(val);
    else if (key == "fobos_c") cur.fobos_C = std::stod(val);
    else if (key == "eps") cur.smooth_eps = std::stod(val);
    else if (key == "eps_width") cur.eps_width = std::stod(val);
    else if (key == "kappa") cur.kappa = std::stod(val);
    else if (key == "theta") cur.theta = std::stod(val);
    else if (key == "seed") cur.seed = static_cast<unsigned>(std::stoul(val));
    else if (key == "record_every") cur.record_every = std::stol(val);
    else if (key == "data") cur.data_path = val;
    else
      throw std::invalid_argument("grid file: unknown key '" + key +
                                  "' at line " + std::to_string(lineno));
  }
  flush();
  return specs;
}

std::vector<RunOutcome> run_grid(const std::vector<RunSpec>& specs,
                                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<RunOutcome> outcomes;
  std::vector<Trace> traces(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    RunSpec spec = specs[i];
    if (spec.id.empty())
      spec.id = spec.problem + "_" + spec.solver + "_" + std::to_string(i);
    RunOutcome out;
    out.spec = spec;
    try {
      ProblemSpec problem = instantiate_problem(spec);
      SolveResult res = dispatch_solver(problem, spec);
      traces[i] = res.trace;
      out.ok = true;
      out.final_energy = res.trace.records.empty() ? 0.0
                                                   : res.trace.records.back().energy;
      out.best_energy = kInf;
      for (const auto& rec : res.trace.records)
        out.best_energy = std::min(out.best_energy, rec.energy);
      try {
        out.sec_per_iter = report_per_iteration_time(res.trace);
      } catch (const InsufficientDataError&) {
        out.sec_per_iter = 0.0;
      }
      out.trace_path = (fs::path(out_dir) / (spec.id + ".csv")).string();
      std::ofstream tf(out.trace_path);
      write_trace_csv(tf, res.trace);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    outcomes.push_back(std::move(out));
  }

  // Slope fits against the best energy seen for each problem in this grid.
  std::map<std::string, double> problem_best;
  for (const auto& out : outcomes)
    if (out.ok) {
      auto it = problem_best.find(out.spec.problem);
      if (it == problem_best.end() || out.best_energy < it->second)
        problem_best[out.spec.problem] = out.best_energy;
    }
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].ok) continue;
    auto [wb, we] = default_slope_window(outcomes[i].spec.max_iters);
    try {
      outcomes[i].fit = fit_loglog_slope(traces[i],
                                         problem_best[outcomes[i].spec.problem],
                                         wb, we);
    } catch (const InsufficientDataError&) {
    }
  }

  std::ofstream summary(fs::path(out_dir) / "summary.csv");
  summary << "id,problem,solver,status,final_energy,best_energy,sec_per_iter,"
             "slope,r2,error\n";
  for (const auto& out : outcomes) {
    summary << out.spec.id << ',' << out.spec.problem << ',' << out.spec.solver
            << ',' << (out.ok ? "ok" : "failed") << ','
            << (out.ok ? fmt_double(out.final_energy) : "") << ','
            << (out.ok ? fmt_double(out.best_energy) : "") << ','
            << (out.ok ? fmt_double(out.sec_per_iter) : "") << ','
            << (out.fit ? fmt_double(out.fit->slope) : "") << ','
            << (out.fit ? fmt_double(out.fit->r2) : "") << ',' << out.error
            << '\n';
  }

  std::ofstream plot(fs::path(out_dir) / "plot.gp");
  plot << "# gnuplot script: log-log energy-gap curves per problem\n"
          "set logscale xy\nset xlabel 'iteration'\nset ylabel 'E^n - E_hat'\n";
  for (const auto& [problem, ehat] : problem_best) {
    plot << "\n# problem: " << problem << "\nehat_" << problem << " = "
         << fmt_double(ehat) << "\nplot ";
    bool first = true;
    for (const auto& out : outcomes) {
      if (!out.ok || out.spec.problem != problem) continue;
      if (!first) plot << ", \\\n     ";
      plot << "'" << fs::path(out.trace_path).filename().string()
           << "' using 1:($2-ehat_" << problem << ") with lines title '"
           << out.spec.solver << "'";
      first = false;
    }
    plot << "\npause -1\n";
  }
  return outcomes;
}

}  // namespace firstorder

#include "cncfl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "cncfl/errors.hpp"
#include "cncfl/io.hpp"

namespace cncfl {

std::string_view to_string(Method m) {
  switch (m) {
  case Method::L1:
    return "l1";
  case Method::MDFL:
    return "mdfl";
  case Method::CNC:
    return "cnc";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "l1")
    return Method::L1;
  if (name == "mdfl")
    return Method::MDFL;
  if (name == "cnc")
    return Method::CNC;
  throw ParameterError("unknown method '" + std::string(name) + "'");
}

CncConfig make_method_config(Method method, double lambda0, double lambda1,
                             PenaltyKind penalty, double a0) {
  CncConfig cfg;
  cfg.lambda0 = lambda0;
  cfg.lambda1 = lambda1;
  switch (method) {
  case Method::L1:
    cfg.penalty0 = {PenaltyKind::L1, 0.0};
    cfg.penalty1 = {PenaltyKind::L1, 0.0};
    break;
  case Method::MDFL:
    cfg.penalty0 = {penalty, a0};
    cfg.penalty1 = {penalty, 0.0};
    break;
  case Method::CNC:
    cfg.penalty0 = {penalty, a0};
    cfg.penalty1 = {penalty, select_a1(lambda0, lambda1, a0)};
    break;
  }
  return cfg;
}

std::vector<double> lambda0_grid(Eigen::Index n, double sigma) {
  const double unit = sigma * std::sqrt(static_cast<double>(n)) / 4.0;
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k)
    grid.push_back(0.05 * k * unit);
  return grid;
}

namespace {

struct Cell {
  double lambda0 = 0.0;
  double a0 = 0.0;
  CncConfig cfg;
  std::vector<RunRecord> runs;
  double mean = 0.0;
};

double mean_of(const std::vector<RunRecord> &runs) {
  double acc = 0.0;
  for (const auto &r : runs)
    acc += r.rmse;
  return acc / static_cast<double>(runs.size());
}

double std_of(const std::vector<RunRecord> &runs, double mean) {
  if (runs.size() < 2)
    return 0.0;
  double acc = 0.0;
  for (const auto &r : runs)
    acc += (r.rmse - mean) * (r.rmse - mean);
  return std::sqrt(acc / static_cast<double>(runs.size() - 1));
}

} // namespace

SweepResult run_sweep(const SweepOptions &options) {
  if (options.values.empty())
    throw ParameterError("sweep axis has no values");
  if (options.trials < 1)
    throw ParameterError("trials must be positive");
  if (options.methods.empty())
    throw ParameterError("no methods selected");
  if (!(options.beta > 0.0))
    throw ParameterError("beta must be positive");
  if (options.axis == SweepAxis::A0 && !(options.sigma > 0.0))
    throw ParameterError("sigma must be positive");
  for (double v : options.values)
    if (!std::isfinite(v) || (options.axis == SweepAxis::Sigma ? v <= 0.0 : v < 0.0))
      throw ParameterError("invalid sweep value " + format_double(v));

  std::vector<Method> methods = options.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

  const Signal clean = generate_pulses(options.fixture);
  const Eigen::Index n = clean.size();

  SweepResult result;
  for (Method method : methods) {
    for (double value : options.values) {
      const double sigma = options.axis == SweepAxis::Sigma ? value : options.sigma;
      const double lambda1 = lambda1_heuristic(n, sigma, options.beta);

      std::vector<Signal> noisy;
      for (int t = 0; t < options.trials; ++t)
        noisy.push_back(add_awgn(clean, {sigma, options.base_seed + static_cast<std::uint64_t>(t)}));

      Cell best;
      best.mean = std::numeric_limits<double>::infinity();
      for (double lambda0 : lambda0_grid(n, sigma)) {
        double a0 = 0.0;
        if (method != Method::L1) {
          if (options.axis == SweepAxis::A0)
            a0 = value;
          else
            a0 = (method == Method::MDFL ? 1.0 : options.cnc_a0_scale) / lambda0;
        }
        if (a0 * lambda0 > 1.0 + convexity_slack<double>())
          continue;

        Cell cell;
        cell.lambda0 = lambda0;
        cell.a0 = a0;
        cell.cfg = make_method_config(method, lambda0, lambda1, options.penalty, a0);
        cell.cfg.max_iter = options.max_iter;
        cell.cfg.tol = options.tol;
        for (int t = 0; t < options.trials; ++t) {
          const auto start = std::chrono::steady_clock::now();
          const SolveResult sol = solve(noisy[static_cast<std::size_t>(t)], cell.cfg);
          const auto stop = std::chrono::steady_clock::now();
          RunRecord rec;
          rec.method = method;
          rec.penalty = method == Method::L1 ? PenaltyKind::L1 : options.penalty;
          rec.lambda0 = lambda0;
          rec.lambda1 = lambda1;
          rec.a0 = cell.cfg.penalty0.a;
          rec.a1 = cell.cfg.penalty1.a;
          rec.sigma = sigma;
          rec.seed = options.base_seed + static_cast<std::uint64_t>(t);
          rec.rmse = rmse(sol.x, clean);
          rec.iterations = sol.iterations;
          rec.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
          cell.runs.push_back(rec);
        }
        cell.mean = mean_of(cell.runs);
        if (cell.mean < best.mean)
          best = std::move(cell);
      }
      if (best.runs.empty())
        throw ParameterError("no lambda0 in the grid satisfies a0*lambda0 <= 1 for a0 = " +
                             format_double(value));

      SweepRow row;
      row.method = method;
      row.value = value;
      row.lambda0 = best.lambda0;
      row.lambda1 = lambda1;
      row.a0 = best.cfg.penalty0.a;
      row.a1 = best.cfg.penalty1.a;
      row.mean_rmse = best.mean;
      row.std_rmse = std_of(best.runs, best.mean);
      row.trials = options.trials;
      result.rows.push_back(row);
      result.records.insert(result.records.end(), best.runs.begin(), best.runs.end());
    }
  }
  return result;
}

std::string sweep_csv(const SweepOptions &options, const SweepResult &result) {
  std::ostringstream out;
  const char *axis = options.axis == SweepAxis::Sigma ? "sigma" : "a0";
  out << "method,axis,value,lambda0,lambda1,a0,a1,mean_rmse,std_rmse,trials\n";
  for (const auto &r : result.rows)
    out << to_string(r.method) << ',' << axis << ',' << format_double(r.value) << ','
        << format_double(r.lambda0) << ',' << format_double(r.lambda1) << ','
        << format_double(r.a0) << ',' << format_double(r.a1) << ','
        << format_double(r.mean_rmse) << ',' << format_double(r.std_rmse) << ','
        << r.trials << '\n';
  return out.str();
}

} // namespace cncfl

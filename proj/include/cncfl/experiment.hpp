#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cncfl/cnc.hpp"
#include "cncfl/signalgen.hpp"

namespace cncfl {

/// Estimators compared by the sweep harness.
///   L1   - l1 fused lasso (a0 = a1 = 0).
///   MDFL - non-convex amplitude penalty only (a1 = 0).
///   CNC  - both penalties non-convex, a1 on the convexity boundary.
enum class Method { L1, MDFL, CNC };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

/// Problem configuration for one estimator. `a0` is the absolute amplitude
/// non-convexity (ignored by L1); CNC derives a1 from it, MDFL uses a1 = 0.
CncConfig make_method_config(Method method, double lambda0, double lambda1,
                             PenaltyKind penalty, double a0);

/// lambda0 candidates {0.05, 0.10, ..., 1.00} * sigma sqrt(N) / 4.
std::vector<double> lambda0_grid(Eigen::Index n, double sigma);

struct RunRecord {
  Method method = Method::L1;
  PenaltyKind penalty = PenaltyKind::L1;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  int iterations = 0;
  double runtime_ms = 0.0;
};

enum class SweepAxis { Sigma, A0 };

struct SweepOptions {
  SweepAxis axis = SweepAxis::Sigma;
  std::vector<double> values;
  std::vector<Method> methods{Method::L1, Method::MDFL, Method::CNC};
  int trials = 15;
  PenaltyKind penalty = PenaltyKind::Atan;
  double beta = 0.25;
  /// Noise level on the a0 axis.
  double sigma = 0.5;
  /// On the sigma axis CNC uses a0 = cnc_a0_scale / lambda0.
  double cnc_a0_scale = 0.5;
  std::uint64_t base_seed = 0;
  PulseSpec fixture = default_pulse_spec();
  int max_iter = 50;
  double tol = 1e-9;
};

/// One (method, axis value) cell, at the lambda0 with the lowest mean RMSE.
struct SweepRow {
  Method method = Method::L1;
  double value = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
  double mean_rmse = 0.0;
  double std_rmse = 0.0;
  int trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Per-trial records for the selected lambda0 of every row.
  std::vector<RunRecord> records;
};

/// Runs the RMSE sweep. Trial t uses noise seed base_seed + t, shared by
/// every method and axis value. Rows come out ordered by (method, value).
SweepResult run_sweep(const SweepOptions &options);

std::string sweep_csv(const SweepOptions &options, const SweepResult &result);

} // namespace cncfl

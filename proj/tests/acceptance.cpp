// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Independent of the unit tests; seeds are fixed here.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

#include "cncfl/cli.hpp"
#include "cncfl/cnc.hpp"
#include "cncfl/experiment.hpp"
#include "cncfl/signalgen.hpp"
#include "cnc_checks.hpp"
#include "oracles.hpp"
#include "penalty_properties.hpp"

using namespace cncfl;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Convexity boundary on the N = 2 example.
Verdict fig1_convexity() {
  const double inside = checks::midpoint_violation(checks::fig1_config(0.5, 0.125), 10000, 1);
  const double outside = checks::midpoint_violation(checks::fig1_config(0.5, 1.0 / 3.0), 10000, 1);
  return {inside <= 1e-12 && outside > 1e-6,
          fmt("max violation (0.5,0.125)=%.3g, (0.5,1/3)=%.3g", inside, outside)};
}

// 2. tvd and flsa_l1 against the optimality oracle and a slow reference solver.
Verdict oracle_exactness() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(1, 64), small(1, 16);
  const double lambdas[] = {0.01, 0.1, 1.0, 10.0};
  double resid = 0.0, rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Signal y = i % 2 ? oracle::random_signal(rng, len(rng)) : oracle::random_blocky(rng, len(rng));
    const double l0 = lambdas[i % 4], l1 = lambdas[(i / 4) % 4];
    resid = std::max(resid, tvd_optimality_residual(y, tvd(y, l1), l1));
    resid = std::max(resid, oracle::flsa_optimality_residual(y, flsa_l1(y, l0, l1), l0, l1));

    const Signal ys = oracle::random_blocky(rng, small(rng));
    const auto ref_tvd = oracle::reference_flsa(ys, 0.0, l1);
    const auto ref_flsa = oracle::reference_flsa(ys, l0, l1);
    const double f_tvd = oracle::flsa_objective(ys, tvd(ys, l1), 0.0, l1);
    const double f_flsa = oracle::flsa_objective(ys, flsa_l1(ys, l0, l1), l0, l1);
    rel = std::max(rel, std::abs(f_tvd - ref_tvd.objective) / std::abs(ref_tvd.objective));
    rel = std::max(rel, std::abs(f_flsa - ref_flsa.objective) / std::abs(ref_flsa.objective));
  }
  return {resid <= 1e-8 && rel <= 1e-10,
          fmt("max residual %.3g, max relative objective gap %.3g", resid, rel)};
}

// 3. F never increases along the MM iteration.
Verdict mm_descent() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(2, 200);
  double worst = -1.0;
  for (int i = 0; i < 100; ++i) {
    auto cfg = checks::random_convex_config(rng);
    cfg.tol = 1e-14;
    cfg.max_iter = 100;
    const Signal y = oracle::random_blocky(rng, len(rng), 0.5);
    const auto h = solve(y, cfg).objective_history;
    for (std::size_t k = 1; k < h.size(); ++k)
      worst = std::max(worst, h[k] - h[k - 1]);
  }
  return {worst <= 1e-12, fmt("largest step increase %.3g", worst)};
}

// 4. Convergence speed on the pulse fixture. Noise seed 0; atan penalty;
// lambda0 picked from the tuning grid by RMSE on this realization.
Verdict convergence_speed() {
  const Signal clean = generate_pulses(default_pulse_spec());
  const double sigma = 0.5;
  const Signal y = add_awgn(clean, {sigma, 0});
  const double l1 = lambda1_heuristic(clean.size(), sigma);
  double best_rmse = std::numeric_limits<double>::infinity();
  SolveResult best;
  double best_l0 = 0.0;
  for (double l0 : lambda0_grid(clean.size(), sigma)) {
    auto cfg = make_method_config(Method::CNC, l0, l1, PenaltyKind::Atan, 0.5 / l0);
    cfg.tol = 1e-8;
    auto res = solve(y, cfg);
    const double e = rmse(res.x, clean);
    if (e < best_rmse) {
      best_rmse = e;
      best = std::move(res);
      best_l0 = l0;
    }
  }
  return {best.converged && best.iterations <= 10,
          fmt("lambda0=%.4g lambda1=%.4g rmse=%.4g: %d updates to reach 1e-8 (converged=%d)",
              best_l0, l1, best_rmse, best.iterations, int(best.converged))};
}

// 5. a0 = a1 = 0 reproduces the l1 FLSA solution after one update.
Verdict l1_reduction() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(1, 300);
  std::uniform_real_distribution<double> lam(0.01, 3.0);
  double dev = 0.0;
  int bad_iters = 0;
  for (int i = 0; i < 50; ++i) {
    const Signal y = oracle::random_blocky(rng, len(rng), 0.4);
    CncConfig cfg;
    cfg.lambda0 = lam(rng);
    cfg.lambda1 = lam(rng);
    cfg.penalty0 = {PenaltyKind::Log, 0.0};
    cfg.penalty1 = {PenaltyKind::Atan, 0.0};
    const auto res = solve(y, cfg);
    dev = std::max(dev, (res.x - flsa_l1(y, cfg.lambda0, cfg.lambda1)).cwiseAbs().maxCoeff());
    bad_iters += res.iterations != 1 || !res.converged;
  }
  return {dev <= 1e-12 && bad_iters == 0,
          fmt("sup-norm deviation %.3g, runs not stopping after 1 update: %d", dev, bad_iters)};
}

// 6. Under convexity the solver output is the global minimizer.
Verdict global_optimality() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> len(2, 60);
  std::uniform_real_distribution<double> pert(-0.1, 0.1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10; ++i) {
    auto cfg = checks::random_convex_config(rng);
    cfg.tol = 1e-15;
    cfg.max_iter = 5000;
    const Eigen::Index n = len(rng);
    const Signal y = oracle::random_blocky(rng, n, 0.4);
    const auto res = solve(y, cfg);
    const double f = objective_F(res.x, y, cfg);
    for (int p = 0; p < 1000; ++p) {
      const Signal d = Signal::NullaryExpr(n, [&] { return pert(rng); });
      worst = std::max(worst, f - objective_F((res.x + d).eval(), y, cfg));
    }
  }
  return {worst <= 1e-9, fmt("max F(x*) - F(x*+d) = %.3g", worst)};
}

// 7. Mean RMSE ordering CNC <= MDFL <= L1 with positive gaps.
Verdict rmse_ordering() {
  SweepOptions opt;
  opt.values = {0.25, 0.5, 1.0};
  const auto res = run_sweep(opt);
  bool ok = res.rows.size() == 9;
  std::string detail;
  for (double s : opt.values) {
    double m[3] = {0, 0, 0};
    for (const auto &r : res.rows)
      if (r.value == s)
        m[static_cast<int>(r.method)] = r.mean_rmse;
    ok = ok && m[2] < m[1] && m[1] < m[0];
    detail += fmt("sigma=%g L1=%.4f MDFL=%.4f CNC=%.4f; ", s, m[0], m[1], m[2]);
  }
  return {ok, detail};
}

// 8. Penalty assumptions by finite differences.
Verdict penalty_properties() {
  int failures = 0;
  for (auto kind : props::kAllKinds)
    for (double a : props::kAValues)
      failures += !props::check_assumptions(kind, a).ok();
  return {failures == 0, fmt("%d of 16 (kind, a) combinations fail", failures)};
}

// 9. Tangent-line majorizer dominates and touches.
Verdict majorizer() {
  double worst = -1.0, touch = 0.0;
  std::uint64_t seed = 9;
  for (auto kind : props::kAllKinds) {
    double t = 0.0;
    worst = std::max(worst, props::majorizer_violation(kind, 10000, seed++, t));
    touch = std::max(touch, t);
  }
  return {worst <= 1e-12 && touch <= 1e-12,
          fmt("max phi - phi_maj %.3g, max |phi_maj(v,v) - phi(v)| %.3g", worst, touch)};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

// 10. generate -> denoise -> re-denoise is byte-identical across runs;
// parse errors and convexity violations map to their exit codes.
Verdict cli_round_trip() {
  const fs::path root = fs::temp_directory_path() / ("cncfl_acceptance_" + std::to_string(::getpid()));
  std::vector<std::string> artifacts;
  bool codes_ok = true;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / std::to_string(run);
    fs::create_directories(dir);
    auto p = [&](const char *name) { return (dir / name).string(); };
    const std::vector<std::string> flags{"--lambda0", "0.3",   "--sigma", "0.5",
                                         "--penalty", "atan", "--a0",    "1.6"};
    auto denoise = [&](const std::string &in, const std::string &out) {
      std::vector<std::string> args{"denoise", in, out};
      args.insert(args.end(), flags.begin(), flags.end());
      return cli(args);
    };
    codes_ok = codes_ok &&
               cli({"generate", "--default", "--sigma", "0.5", "--seed", "7", "-o", p("y.txt")}) == 0 &&
               denoise(p("y.txt"), p("x1.txt")) == 0 && denoise(p("x1.txt"), p("x2.txt")) == 0;
    std::string all;
    for (const char *f : {"y.txt", "x1.txt", "x1.txt.json", "x2.txt", "x2.txt.json"})
      all += slurp(dir / f) + '\x1e';
    artifacts.push_back(all);

    std::ofstream(dir / "bad.txt") << "0.5\nnot-a-number\n";
    codes_ok = codes_ok &&
               cli({"denoise", p("bad.txt"), p("z.txt"), "--lambda0", "1", "--lambda1", "1"}) ==
                   cli::kParseError &&
               cli({"denoise", p("y.txt"), p("z.txt"), "--lambda0", "1", "--lambda1", "1", "--penalty",
                    "log", "--a0", "0.5", "--a1", "0.333333"}) == cli::kConvexityViolation;
  }
  fs::remove_all(root);
  const bool same = artifacts[0] == artifacts[1] && artifacts[0].size() > 5;
  return {same && codes_ok,
          fmt("outputs identical across runs: %s, exit codes as documented: %s", same ? "yes" : "no",
              codes_ok ? "yes" : "no")};
}

struct Criterion {
  const char *name;
  std::function<Verdict()> check;
  double time_limit_s; // 0 = none
};

} // namespace

int main() {
  const Criterion criteria[] = {
      {"convexity boundary (N=2 example)", fig1_convexity, 1.0},
      {"tvd / flsa_l1 exactness", oracle_exactness, 10.0},
      {"MM monotone descent", mm_descent, 10.0},
      {"convergence within 10 updates", convergence_speed, 0.0},
      {"l1 reduction", l1_reduction, 0.0},
      {"global optimality under convexity", global_optimality, 0.0},
      {"RMSE ordering CNC <= MDFL <= L1", rmse_ordering, 120.0},
      {"penalty property suite", penalty_properties, 5.0},
      {"majorizer domination", majorizer, 0.0},
      {"CLI determinism and exit codes", cli_round_trip, 0.0},
  };
  int failed = 0, index = 0;
  for (const auto &c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += fmt(" [time limit %.0f s exceeded]", c.time_limit_s);
    }
    failed += !v.pass;
    std::printf("[%s] %2d %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", index, c.name, secs,
                v.detail.c_str());
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}

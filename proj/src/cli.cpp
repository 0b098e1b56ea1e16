#include "cncfl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cncfl/cnc.hpp"
#include "cncfl/errors.hpp"
#include "cncfl/experiment.hpp"
#include "cncfl/io.hpp"
#include "cncfl/signalgen.hpp"

namespace cncfl::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty())
      parts.push_back(item);
  return parts;
}

double to_double(const std::string &text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ParameterError("'" + text + "' is not a finite number");
  return v;
}

long long to_integer(const std::string &text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw SpecError("'" + text + "' is not an integer");
  return v;
}

std::vector<Pulse> parse_pulses(const std::string &text) {
  std::vector<Pulse> pulses;
  for (const auto &item : split(text, ',')) {
    const auto fields = split(item, ':');
    if (fields.size() != 3)
      throw SpecError("pulse '" + item + "' is not start:width:amplitude");
    Pulse p;
    p.start = static_cast<Eigen::Index>(to_integer(fields[0]));
    p.width = static_cast<Eigen::Index>(to_integer(fields[1]));
    try {
      p.amplitude = to_double(fields[2]);
    } catch (const ParameterError &e) {
      throw SpecError(e.what());
    }
    pulses.push_back(p);
  }
  return pulses;
}

void write_text(const std::string &path, const std::string &text, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

json history_json(const std::vector<double> &history) {
  json arr = json::array();
  for (double f : history)
    arr.push_back(f);
  return arr;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  bool use_default = false;
  std::optional<long long> n;
  std::string pulses;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateArgs &a, std::ostream &out) {
  PulseSpec spec;
  if (a.use_default) {
    if (!a.pulses.empty() || a.n)
      throw SpecError("--default cannot be combined with --n or --pulses");
    spec = default_pulse_spec();
  } else {
    if (!a.n)
      throw SpecError("--n is required unless --default is given");
    spec.length = static_cast<Eigen::Index>(*a.n);
    spec.pulses = parse_pulses(a.pulses);
  }
  if (!(a.sigma >= 0.0) || !std::isfinite(a.sigma))
    throw ParameterError("--sigma must be >= 0");
  const Signal y = add_awgn(generate_pulses(spec), {a.sigma, a.seed});
  write_text(a.output, format_signal(y), out);
  return kOk;
}

// ----------------------------------------------------------------- denoise

struct DenoiseArgs {
  std::string input;
  std::string output;
  std::string meta;
  double lambda0 = 0.0;
  std::optional<double> lambda1;
  std::optional<double> sigma;
  double beta = 0.25;
  std::optional<double> a0;
  std::optional<double> a1;
  std::string penalty = "l1";
  std::string method = "cnc";
  double tol = 1e-9;
  int max_iter = 50;
  bool allow_nonconvex = false;
  std::string reference;
};

int cmd_denoise(const DenoiseArgs &a, std::ostream &out) {
  const Signal y = read_signal(a.input);
  const Method method = parse_method(a.method);
  PenaltyKind kind = parse_penalty_kind(a.penalty);

  double lambda1 = 0.0;
  if (a.lambda1)
    lambda1 = *a.lambda1;
  else if (a.sigma)
    lambda1 = lambda1_heuristic(y.size(), *a.sigma, a.beta);
  else
    throw ParameterError("give --lambda1, or --sigma to derive it");
  const double lambda0 = a.lambda0;
  if (!(lambda0 >= 0.0) || !(lambda1 >= 0.0) || !std::isfinite(lambda0) ||
      !std::isfinite(lambda1))
    throw ParameterError("--lambda0 and --lambda1 must be finite and >= 0");

  double a0 = 0.0, a1 = 0.0;
  switch (method) {
  case Method::L1:
    if (a.a0.value_or(0.0) != 0.0 || a.a1.value_or(0.0) != 0.0)
      throw ParameterError("method l1 requires a0 = a1 = 0");
    kind = PenaltyKind::L1;
    break;
  case Method::MDFL:
    if (a.a1.value_or(0.0) != 0.0)
      throw ParameterError("method mdfl requires a1 = 0");
    if (a.a0)
      a0 = *a.a0;
    else if (lambda0 > 0.0)
      a0 = 1.0 / lambda0;
    break;
  case Method::CNC:
    a0 = a.a0.value_or(0.0);
    if (a.a1)
      a1 = *a.a1;
    else if (lambda1 > 0.0) {
      if (!(a0 >= 0.0))
        throw ParameterError("--a0 must be >= 0");
      if (a0 * lambda0 > 1.0 + convexity_slack<double>()) {
        if (!a.allow_nonconvex)
          throw ConvexityError("a0*lambda0 > 1: no convex a1 exists");
      } else {
        a1 = select_a1(lambda0, lambda1, a0);
      }
    }
    break;
  }

  CncConfig cfg;
  cfg.lambda0 = lambda0;
  cfg.lambda1 = lambda1;
  cfg.penalty0 = {kind, a0};
  cfg.penalty1 = {kind, a1};
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.allow_degenerate = lambda0 == 0.0 || lambda1 == 0.0;
  cfg.allow_nonconvex = a.allow_nonconvex;

  const SolveResult res = solve(y, cfg);

  json meta;
  meta["method"] = std::string(to_string(method));
  meta["lambda0"] = lambda0;
  meta["lambda1"] = lambda1;
  meta["a0"] = a0;
  meta["a1"] = a1;
  meta["penalty"] = std::string(to_string(kind));
  meta["convexity_margin"] = convexity_margin(cfg);
  meta["iterations"] = res.iterations;
  meta["converged"] = res.converged;
  meta["objective_history"] = history_json(res.objective_history);
  if (!a.reference.empty()) {
    const Signal ref = read_signal(a.reference);
    meta["rmse"] = rmse(res.x, ref);
  }

  write_signal(a.output, res.x);
  const std::string meta_path = a.meta.empty() ? a.output + ".json" : a.meta;
  write_text(meta_path, meta.dump(2) + "\n", out);
  return kOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string axis;
  std::string values;
  int trials = 15;
  std::string methods;
  std::string penalty = "atan";
  double beta = 0.25;
  double sigma = 0.5;
  double a0_scale = 0.5;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int max_iter = 50;
  std::string output;
  std::string records;
};

json record_json(const RunRecord &r) {
  json j;
  j["method"] = std::string(to_string(r.method));
  j["penalty"] = std::string(to_string(r.penalty));
  j["lambda0"] = r.lambda0;
  j["lambda1"] = r.lambda1;
  j["a0"] = r.a0;
  j["a1"] = r.a1;
  j["sigma"] = r.sigma;
  j["seed"] = r.seed;
  j["rmse"] = r.rmse;
  j["iterations"] = r.iterations;
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

int cmd_sweep(const SweepArgs &a, std::ostream &out) {
  SweepOptions opt;
  if (a.axis == "sigma")
    opt.axis = SweepAxis::Sigma;
  else if (a.axis == "a0")
    opt.axis = SweepAxis::A0;
  else
    throw ParameterError("--axis must be sigma or a0");
  for (const auto &v : split(a.values, ','))
    opt.values.push_back(to_double(v));
  if (opt.values.empty())
    throw ParameterError("--values is empty");
  if (!a.methods.empty()) {
    opt.methods.clear();
    for (const auto &m : split(a.methods, ','))
      opt.methods.push_back(parse_method(m));
  } else if (opt.axis == SweepAxis::A0) {
    opt.methods = {Method::CNC};
  }
  opt.trials = a.trials;
  opt.penalty = parse_penalty_kind(a.penalty);
  opt.beta = a.beta;
  opt.sigma = a.sigma;
  opt.cnc_a0_scale = a.a0_scale;
  if (!(a.a0_scale >= 0.0 && a.a0_scale <= 1.0))
    throw ParameterError("--a0-scale must lie in [0, 1]");
  opt.base_seed = a.seed;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;

  const SweepResult result = run_sweep(opt);
  write_text(a.output, sweep_csv(opt, result), out);
  if (!a.records.empty()) {
    json arr = json::array();
    for (const auto &r : result.records)
      arr.push_back(record_json(r));
    write_text(a.records, arr.dump(2) + "\n", out);
  }
  return kOk;
}

// --------------------------------------------------------- check-convexity

struct ConvexityArgs {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double a0 = 0.0;
  double a1 = 0.0;
};

int cmd_check_convexity(const ConvexityArgs &a, std::ostream &out) {
  for (double v : {a.lambda0, a.lambda1, a.a0, a.a1})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ParameterError("lambdas and a values must be finite and >= 0");
  CncConfig cfg;
  cfg.lambda0 = a.lambda0;
  cfg.lambda1 = a.lambda1;
  cfg.penalty0 = {PenaltyKind::Log, a.a0};
  cfg.penalty1 = {PenaltyKind::Log, a.a1};
  const double margin = convexity_margin(cfg);
  const bool convex = is_convex(cfg);
  out << "convexity_margin " << format_double(margin) << '\n'
      << (convex ? "CONVEX" : "NONCONVEX") << '\n';
  return convex ? kOk : kNotConvex;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Sparse piecewise-constant denoising with convex non-convex fused lasso",
               "cncfl"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto *generate = app.add_subcommand("generate", "Write a pulse-train test signal");
  generate->add_flag("--default", gen.use_default, "Use the built-in five-pulse fixture (N = 300)");
  generate->add_option("--n", gen.n, "Signal length");
  generate->add_option("--pulses", gen.pulses, "Pulses as start:width:amplitude[,...]");
  generate->add_option("--sigma", gen.sigma, "Noise standard deviation");
  generate->add_option("--seed", gen.seed, "Noise seed");
  generate->add_option("-o,--output", gen.output, "Output file (default stdout)");

  DenoiseArgs den;
  auto *denoise = app.add_subcommand("denoise", "Denoise a signal file");
  denoise->add_option("input", den.input, "Input signal file")->required();
  denoise->add_option("output", den.output, "Output signal file")->required();
  denoise->add_option("--meta", den.meta, "Metadata JSON path (default <output>.json)");
  denoise->add_option("--lambda0", den.lambda0, "Amplitude penalty weight")->required();
  denoise->add_option("--lambda1", den.lambda1, "Difference penalty weight");
  denoise->add_option("--sigma", den.sigma, "Noise level; sets lambda1 = beta sqrt(N) sigma");
  denoise->add_option("--beta", den.beta, "Constant in the lambda1 rule");
  denoise->add_option("--a0", den.a0, "Amplitude non-convexity");
  denoise->add_option("--a1", den.a1, "Difference non-convexity (default: convexity boundary)");
  denoise->add_option("--penalty", den.penalty, "l1, log, atan or rational");
  denoise->add_option("--method", den.method, "l1, mdfl or cnc");
  denoise->add_option("--tol", den.tol, "Relative objective change tolerance");
  denoise->add_option("--max-iter", den.max_iter, "Maximum MM updates");
  denoise->add_flag("--allow-nonconvex", den.allow_nonconvex, "Solve even if the margin is negative");
  denoise->add_option("--reference", den.reference, "Clean signal for RMSE reporting");

  SweepArgs sw;
  auto *sweep = app.add_subcommand("sweep", "RMSE sweep over sigma or a0 (CSV)");
  sweep->add_option("--axis", sw.axis, "sigma or a0")->required();
  sweep->add_option("--values", sw.values, "Comma-separated axis values")->required();
  sweep->add_option("--trials", sw.trials, "Noise realizations per point");
  sweep->add_option("--methods", sw.methods, "Comma-separated subset of l1,mdfl,cnc");
  sweep->add_option("--penalty", sw.penalty, "log, atan or rational");
  sweep->add_option("--beta", sw.beta, "Constant in the lambda1 rule");
  sweep->add_option("--sigma", sw.sigma, "Noise level for the a0 axis");
  sweep->add_option("--a0-scale", sw.a0_scale, "CNC uses a0 = scale / lambda0 on the sigma axis");
  sweep->add_option("--seed", sw.seed, "Base seed; trial t uses seed + t");
  sweep->add_option("--tol", sw.tol, "Relative objective change tolerance");
  sweep->add_option("--max-iter", sw.max_iter, "Maximum MM updates");
  sweep->add_option("-o,--output", sw.output, "CSV output (default stdout)");
  sweep->add_option("--records", sw.records, "Per-trial JSON records");

  ConvexityArgs cx;
  auto *check = app.add_subcommand("check-convexity", "Evaluate the convexity condition");
  check->add_option("--lambda0", cx.lambda0)->required();
  check->add_option("--lambda1", cx.lambda1)->required();
  check->add_option("--a0", cx.a0);
  check->add_option("--a1", cx.a1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (generate->parsed())
      return cmd_generate(gen, out);
    if (denoise->parsed())
      return cmd_denoise(den, out);
    if (sweep->parsed())
      return cmd_sweep(sw, out);
    if (check->parsed())
      return cmd_check_convexity(cx, out);
  } catch (const ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ConvexityError &e) {
    err << "error: " << e.what() << '\n';
    return kConvexityViolation;
  } catch (const ParameterError &e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const SpecError &e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const SizeError &e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const DomainError &e) {
    err << "error: " << e.what() << '\n';
    return kInvalidParameters;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }
  return kParseError;
}

} // namespace cncfl::cli

// Command-line frontend for the SSA library: solve filters, apply them to
// CSV series, simulate test processes and run validation experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ssa/empirics.hpp"
#include "ssa/integrated.hpp"
#include "ssa/io.hpp"

namespace fs = std::filesystem;
using namespace ssa;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::io:
    case ErrorCode::parse:
      return 3;
    case ErrorCode::config:
    case ErrorCode::domain:
    case ErrorCode::invalid_dimension:
    case ErrorCode::invalid_model:
    case ErrorCode::span_too_small:
    case ErrorCode::insufficient_data:
      return 4;
    case ErrorCode::constraint_infeasible:
      return 5;
    case ErrorCode::numerical:
    case ErrorCode::singularity:
    case ErrorCode::truncation_insufficient:
      return 6;
    default:
      return 2;
  }
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

// Grammar: wn | ar:c1[,c2...] | ma:c1[,...] | arma:c1[,...]/m1[,...]
ProcessModel parse_model(const std::string& spec) {
  if (spec.empty() || spec == "wn") return ProcessModel::white_noise();
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::config, "bad model spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "ar") return ProcessModel::arma(parse_csv_doubles(rest), {});
  if (kind == "ma") return ProcessModel::arma({}, parse_csv_doubles(rest));
  if (kind == "arma") {
    const auto slash = rest.find('/');
    if (slash == std::string::npos)
      throw Error(ErrorCode::config, "arma model spec needs ar.../ma...");
    return ProcessModel::arma(parse_csv_doubles(rest.substr(0, slash)),
                              parse_csv_doubles(rest.substr(slash + 1)));
  }
  throw Error(ErrorCode::config, "unknown model kind '" + kind + "'");
}

// Grammar: hp:LAMBDA[:HALF_SPAN] | hpw:LAMBDA:HALF_SPAN | bk:PLOW,PHIGH[:HALF_SPAN]
TargetSpec parse_target(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::config, "bad target spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<std::string> parts;
  {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
  }
  if (kind == "hp" || kind == "hpw") {
    const double lambda = std::stod(parts.at(0));
    int half = parts.size() > 1 ? std::stoi(parts[1]) : 0;
    if (kind == "hpw") {
      if (half <= 0) throw Error(ErrorCode::config, "hpw needs hpw:LAMBDA:HALF_SPAN");
      return hp_finite_window(lambda, half);
    }
    if (half <= 0) half = lambda > 3000 ? 1500 : 500;
    return hp_two_sided(lambda, half);
  }
  if (kind == "bk") {
    const auto periods = parse_csv_doubles(parts.at(0));
    if (periods.size() != 2)
      throw Error(ErrorCode::config, "bk target needs bk:PLOW,PHIGH");
    const int half = parts.size() > 1 ? std::stoi(parts[1]) : 12;
    return bk_two_sided(periods[0], periods[1], half);
  }
  throw Error(ErrorCode::config, "unknown target kind '" + kind + "'");
}

GeneratorSpec parse_generator(const std::string& spec, const ProcessModel& model, int d) {
  if (spec == "gaussian") return GeneratorSpec::gaussian();
  if (spec.rfind("t:", 0) == 0) return GeneratorSpec::student(std::stod(spec.substr(2)));
  if (spec.rfind("ar1:", 0) == 0) return GeneratorSpec::ar1(std::stod(spec.substr(4)));
  if (spec == "arima") return GeneratorSpec::arima(model, d);
  throw Error(ErrorCode::config, "unknown generator '" + spec + "'");
}

std::vector<std::string> index_dates(int n) {
  std::vector<std::string> dates(n);
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "t%08d", i + 1);
    dates[i] = buf;
  }
  return dates;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create directory " + dir);
}

struct SolveArgs {
  std::string target = "hp:1600";
  std::string model = "wn";
  std::string model_json;
  int L = 101;
  int delta = 0;
  double l = 1.0;
  double rho1 = 0.0, ht1 = 0.0;
  bool have_rho1 = false, have_ht1 = false;
  std::string out = ".";
};

ProcessModel resolve_model(const SolveArgs& args) {
  if (!args.model_json.empty()) {
    std::ifstream in(args.model_json);
    if (!in) throw Error(ErrorCode::io, "cannot open " + args.model_json);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
  }
  return parse_model(args.model);
}

SsaConfig make_config(const SolveArgs& args) {
  SsaConfig config;
  if (args.have_rho1 == args.have_ht1)
    throw Error(ErrorCode::config, "give exactly one of --rho1 / --ht1");
  if (args.have_rho1)
    config.rho1 = args.rho1;
  else
    config.ht1 = args.ht1;
  config.L = args.L;
  config.delta = args.delta;
  config.l = args.l;
  return config;
}

int run_solve(const SolveArgs& args) {
  ensure_dir(args.out);
  TargetSpec target = parse_target(args.target);
  target.delta = args.delta;
  target.L = args.L;
  const ProcessModel model = resolve_model(args);
  SsaConfig config = make_config(args);

  Vec coeffs;
  std::string diag_json;
  if (model.is_white()) {
    const Vec g = wn_mse_nowcast(target);
    SsaSolution sol = solve_ssa(g, config, target.l2sq());
    coeffs = sol.b;
    diag_json = solution_to_json(sol);
  } else {
    DependentSolution dep = solve_ssa_dependent(target, model, config);
    coeffs = dep.b_x;
    diag_json = solution_to_json(dep.solution);
  }
  write_coeffs_csv(args.out + "/coefficients.csv", coeffs);
  write_coeffs_csv(args.out + "/target.csv", target.gamma, target.min_lag);
  write_text_file(args.out + "/diagnostics.json", diag_json + "\n");
  std::cout << diag_json << "\n";
  return 0;
}

int run_filter(const std::string& coeffs_path, const std::string& input_path,
               const std::string& output_path) {
  const CoeffsCsv coeffs = read_coeffs_csv(coeffs_path);
  const DatedSeries series = ingest_csv(input_path);
  const Vec y = apply_filter(coeffs.weights, series.values);
  DatedSeries out;
  const int L = static_cast<int>(coeffs.weights.size());
  out.values = y;
  out.dates.assign(series.dates.begin() + (L - 1), series.dates.end());
  write_series_csv(output_path, out, "nowcast");
  return 0;
}

int run_simulate(const std::string& kind, const std::string& model_spec, int d, int n,
                 std::uint64_t seed, const std::string& out_path) {
  const GeneratorSpec gen = parse_generator(kind, parse_model(model_spec), d);
  const Vec x = generate(gen, n, seed);
  DatedSeries series;
  series.values = x;
  series.dates = index_dates(n);
  std::ostringstream meta;
  meta << "rng=" << kRngAlgorithm << " seed=" << seed;
  write_series_csv(out_path, series, gen.name(), meta.str());
  return 0;
}

int run_validate(const std::string& experiment, int n, std::uint64_t seed,
                 const std::string& dfs_spec, const std::string& out_dir) {
  ensure_dir(out_dir);
  if (experiment == "heavy-tails") {
    TargetSpec hp = hp_finite_window(1600.0, 50);
    hp.delta = 0;
    hp.L = 101;
    const Vec g0 = wn_mse_nowcast(hp);
    SsaConfig c97, c80;
    c97.rho1 = 0.97;
    c80.rho1 = 0.80;
    const std::vector<Vec> filters = {g0, solve_ssa(g0, c97, hp.l2sq()).b,
                                      solve_ssa(g0, c80, hp.l2sq()).b};
    const std::vector<double> dfs = parse_csv_doubles(dfs_spec);
    HeavyTailTable table = heavy_tail_experiment(
        filters, {"MSE", "SSA(0.97,0)", "SSA(0.8,0)"}, dfs, n, seed);
    write_text_file(out_dir + "/heavy_tails.csv", table.to_csv());
    std::cout << table.to_csv();
    return 0;
  }
  if (experiment == "rice") {
    // Unit filters with lag-one ACF spread over (-0.9, 0.9): convex mixes of
    // the extreme eigenvectors plus one random interior direction.
    const int L = 24;
    SpectralBasis basis = eigenpairs(L);
    Rng rng(seed ^ 0x5eedULL);
    std::ostringstream os;
    os << "# rng=" << kRngAlgorithm << " seed=" << seed << " n=" << n << "\n";
    os << "rho,theoretical_ht,empirical_ht,rel_err\n";
    for (int i = 0; i < 10; ++i) {
      const double rho_target = -0.9 + 1.8 * (i + 0.5) / 10.0;
      const int j = 2 + static_cast<int>(rng.uniform() * (L - 4));
      const double r = 0.2 * rng.uniform();
      // p*l1 + q*lL + r*lj = rho_target, p + q = 1 - r
      const double l1 = basis.lambda(0), lL = basis.lambda(L - 1), lj = basis.lambda(j);
      const double p = (rho_target - r * lj - (1.0 - r) * lL) / (l1 - lL);
      const double q = 1.0 - r - p;
      if (p < 0.0 || q < 0.0) {
        --i;
        continue;
      }
      Vec b = std::sqrt(p) * basis.V.col(0) + std::sqrt(q) * basis.V.col(L - 1) +
              std::sqrt(r) * basis.V.col(j);
      const Vec noise = generate(GeneratorSpec::gaussian(), n, seed + i);
      const double theory = ht_from_rho(acf1(b));
      const double emp = empirical_holding_time(apply_filter(b, noise)).value();
      os << acf1(b) << "," << theory << "," << emp << ","
         << std::abs(emp - theory) / theory << "\n";
    }
    write_text_file(out_dir + "/rice.csv", os.str());
    std::cout << os.str();
    return 0;
  }
  throw Error(ErrorCode::config, "unknown experiment '" + experiment + "'");
}

int run_nowcast(const SolveArgs& args, int d, int L_tilde, const std::string& input_path,
                const std::string& transform_spec) {
  ensure_dir(args.out);
  DatedSeries series = ingest_csv(input_path);
  series = transform(std::move(series), parse_transforms(transform_spec));
  if (series.size() < args.L)
    throw Error(ErrorCode::insufficient_data, "series shorter than filter length");

  TargetSpec target = parse_target(args.target);
  target.delta = args.delta;
  target.L = args.L;
  const ProcessModel model = resolve_model(args);

  Vec coeffs;
  std::string diag_json;
  if (d == 0) {
    SsaConfig config = make_config(args);
    if (model.is_white()) {
      SsaSolution sol = solve_ssa(wn_mse_nowcast(target), config, target.l2sq());
      coeffs = sol.b;
      diag_json = solution_to_json(sol);
    } else {
      DependentSolution dep = solve_ssa_dependent(target, model, config);
      coeffs = dep.b_x;
      diag_json = solution_to_json(dep.solution);
    }
  } else {
    if (args.have_rho1 == args.have_ht1)
      throw Error(ErrorCode::config, "give exactly one of --rho1 / --ht1");
    IntegratedConfig config;
    config.d = d;
    config.rho1 = args.have_rho1 ? args.rho1 : rho_from_ht(args.ht1);
    config.L = args.L;
    config.L_tilde = L_tilde;
    IntegratedSolution sol =
        d == 1 ? solve_i1_ssa(target, model, config) : solve_i2_ssa(target, model, config);
    coeffs = sol.b_x;
    diag_json = integrated_to_json(sol);
  }

  write_coeffs_csv(args.out + "/coefficients.csv", coeffs);
  write_text_file(args.out + "/diagnostics.json", diag_json + "\n");

  const Vec y = apply_filter(coeffs, series.values);
  DatedSeries nowcast;
  nowcast.values = y;
  nowcast.dates.assign(series.dates.begin() + (args.L - 1), series.dates.end());
  write_series_csv(args.out + "/nowcast.csv", nowcast, "nowcast");

  if (d >= 1) {
    // Plot-ready differenced output with crossing markers.
    if (nowcast.size() < 2)
      throw Error(ErrorCode::insufficient_data, "nowcast too short to difference");
    Vec diff(nowcast.size() - 1);
    for (int i = 1; i < nowcast.size(); ++i) diff(i - 1) = y(i) - y(i - 1);
    const std::vector<int> crossings = sign_crossings(diff);
    std::vector<bool> is_crossing(diff.size(), false);
    for (int idx : crossings) is_crossing[idx] = true;
    std::ostringstream os;
    os << "date,diff_nowcast,crossing\n";
    for (int i = 0; i < diff.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", diff(i));
      os << nowcast.dates[i + 1] << "," << buf << "," << (is_crossing[i] ? 1 : 0) << "\n";
    }
    write_text_file(args.out + "/differenced.csv", os.str());
  }
  std::cout << diag_json << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smooth sign accuracy filters: solve, apply, simulate, validate"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto add_common = [](CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("--target", a.target,
                    "hp:LAMBDA[:HALF] | hpw:LAMBDA:HALF | bk:PLOW,PHIGH[:HALF]");
    cmd->add_option("--model", a.model, "wn | ar:... | ma:... | arma:ar/ma");
    cmd->add_option("--model-json", a.model_json, "JSON file {\"ar\":[...],\"ma\":[...]}");
    cmd->add_option("--L", a.L, "causal filter length");
    cmd->add_option("--delta", a.delta, "forecast horizon");
    cmd->add_option("--l", a.l, "length-constraint scale");
    cmd->add_option("--rho1", a.rho1, "lag-one ACF constraint")
        ->each([&a](const std::string&) { a.have_rho1 = true; });
    cmd->add_option("--ht1", a.ht1, "holding-time constraint")
        ->each([&a](const std::string&) { a.have_ht1 = true; });
    cmd->add_option("--out", a.out, "output directory");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve an SSA filter design");
  add_common(solve_cmd, solve_args);

  std::string filter_coeffs, filter_input, filter_output;
  CLI::App* filter_cmd = app.add_subcommand("filter", "apply a coefficients CSV to a series");
  filter_cmd->add_option("--coeffs", filter_coeffs)->required();
  filter_cmd->add_option("--input", filter_input)->required();
  filter_cmd->add_option("--output", filter_output)->required();

  std::string sim_kind = "gaussian", sim_model = "wn", sim_out = "simulated.csv";
  int sim_d = 0, sim_n = 1000;
  std::uint64_t sim_seed = 1;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "generate a reproducible test series");
  sim_cmd->add_option("--kind", sim_kind, "gaussian | t:DF | ar1:A | arima");
  sim_cmd->add_option("--model", sim_model, "arima driving model");
  sim_cmd->add_option("--d", sim_d, "arima integration order");
  sim_cmd->add_option("--n", sim_n);
  sim_cmd->add_option("--seed", sim_seed);
  sim_cmd->add_option("--out", sim_out);

  std::string val_experiment = "heavy-tails", val_dfs = "2.1,4,6,8,10,100", val_out = ".";
  int val_n = 1000000;
  std::uint64_t val_seed = 1;
  CLI::App* val_cmd = app.add_subcommand("validate", "run a validation experiment");
  val_cmd->add_option("--experiment", val_experiment, "heavy-tails | rice");
  val_cmd->add_option("--n", val_n);
  val_cmd->add_option("--seed", val_seed);
  val_cmd->add_option("--dfs", val_dfs);
  val_cmd->add_option("--out", val_out);

  SolveArgs nowcast_args;
  int nc_d = 0, nc_L_tilde = 0;
  std::string nc_input, nc_transform;
  CLI::App* nc_cmd =
      app.add_subcommand("nowcast", "end-to-end nowcast pipeline on a CSV series");
  add_common(nc_cmd, nowcast_args);
  nc_cmd->add_option("--d", nc_d, "integration order 0|1|2");
  nc_cmd->add_option("--L-tilde", nc_L_tilde, "MA-inversion depth for d >= 1");
  nc_cmd->add_option("--input", nc_input)->required();
  nc_cmd->add_option("--transform", nc_transform, "comma list of log,diff");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (filter_cmd->parsed()) return run_filter(filter_coeffs, filter_input, filter_output);
    if (sim_cmd->parsed())
      return run_simulate(sim_kind, sim_model, sim_d, sim_n, sim_seed, sim_out);
    if (val_cmd->parsed())
      return run_validate(val_experiment, val_n, val_seed, val_dfs, val_out);
    if (nc_cmd->parsed())
      return run_nowcast(nowcast_args, nc_d, nc_L_tilde, nc_input, nc_transform);
  } catch (const Error& e) {
    nlohmann::json j;
    j["error"]["code"] = to_string(e.code());
    j["error"]["message"] = e.message();
    std::cerr << j.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"]["code"] = "internal";
    j["error"]["message"] = e.what();
    std::cerr << j.dump() << "\n";
    return 2;
  }
  return 0;
}

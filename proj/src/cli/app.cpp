#include "ghzsim/cli/app.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghzsim/cli/commands.hpp"

namespace ghzsim::cli {

namespace {

struct Overrides {
  CLI::Option* tol_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  double tol = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  void add_to(CLI::App* cmd) {
    tol_opt = cmd->add_option("--tol", tol, "step-halving tolerance on amplitudes");
    samples_opt = cmd->add_option("--samples", samples, "number of output samples");
    seed_opt = cmd->add_option("--seed", seed, "seed recorded with the run");
  }

  void apply(RunConfig& c) const {
    if (tol_opt->count()) c.tol = tol;
    if (samples_opt->count()) c.n_samples = samples;
    if (seed_opt->count()) c.seed = seed;
  }
};

Method method_from_string(const std::string& name) {
  if (name == "reduced") return Method::Reduced;
  if (name == "full") return Method::Full;
  throw Error(ErrorCode::InvalidConfig, "field 'method' must be 'reduced' or 'full'");
}

void print_simulation(std::ostream& out, const SimulationResult& r, const fs::path& dir) {
  out << "final_p=" << format_double(r.final_p) << " tail_p=" << format_double(r.tail_p)
      << " fidelity=" << format_double(r.ghz.fidelity)
      << " phi_star=" << format_double(r.ghz.phi_star) << "\n";
  if (r.analytic_reference)
    out << "analytic=" << format_double(*r.analytic_reference) << "\n";
  if (r.cross_check_deviation)
    out << "cross_check_deviation=" << format_double(*r.cross_check_deviation) << "\n";
  out << "wrote " << (dir / "trajectory.csv").string() << ", " << (dir / "report.json").string()
      << "\n";
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Driven N-wise coupled spin chain: sweeps through the avoided crossing, GHZ "
               "preparation and subspace-reduction checks"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string out_dir = "out";
  std::string config_path;
  std::string method_name;
  bool cross_check = false;

  auto* simulate_cmd = app.add_subcommand("simulate", "single run from a JSON config");
  Overrides simulate_over;
  simulate_cmd->add_option("--config", config_path, "run config (JSON)")->required();
  simulate_cmd->add_option("--out", out_dir, "output directory");
  auto* simulate_method =
      simulate_cmd->add_option("--method", method_name, "reduced or full");
  auto* simulate_cross =
      simulate_cmd->add_flag("--cross-check", cross_check, "also run the other method");
  simulate_over.add_to(simulate_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep from a JSON config");
  Overrides sweep_over;
  int parallel = 1;
  sweep_cmd->add_option("--config", config_path, "sweep config (JSON)")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory");
  sweep_cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
  sweep_over.add_to(sweep_cmd);

  auto* fig1_cmd = app.add_subcommand("fig1", "preset runs a, b, c");
  Overrides fig1_over;
  std::string variant;
  int n_qubits = 4;
  fig1_cmd->add_option("variant", variant, "a, b or c")->required()->check(
      CLI::IsMember({"a", "b", "c"}));
  fig1_cmd->add_option("--out", out_dir, "output directory");
  fig1_cmd->add_option("--n-qubits", n_qubits, "chain length");
  auto* fig1_method = fig1_cmd->add_option("--method", method_name, "reduced or full");
  auto* fig1_cross = fig1_cmd->add_flag("--cross-check", cross_check, "also run the other method");
  fig1_over.add_to(fig1_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "full-space vs single-pair timing");
  BenchOptions bench;
  bench.n_list = {2, 4, 6, 8, 10, 12};
  bench_cmd->add_option("--n-list", bench.n_list, "comma-separated chain lengths")->delimiter(',');
  bench_cmd->add_option("--reps", bench.reps, "repetitions per N (fastest is kept)");
  bench_cmd->add_option("--tol", bench.tol, "step-halving tolerance");
  bench_cmd->add_option("--samples", bench.n_samples, "number of output samples");
  bench_cmd->add_option("--out", out_dir, "output directory");

  auto* design_cmd = app.add_subcommand("design", "ramp design for a target transfer");
  DesignRequest request;
  std::string target_name = "half";
  std::string ramp_name = "symmetric";
  design_cmd->add_option("--gamma-hz", request.gamma_hz, "coupling frequency in Hz")->required();
  design_cmd->add_option("--target", target_name, "full or half");
  design_cmd->add_option("--ramp", ramp_name, "symmetric or asymmetric");
  design_cmd->add_option("--tau-window", request.tau_window, "dimensionless window length");
  design_cmd->add_flag("--approx", request.approx,
                       "accept P = 1/2 - epsilon for the asymmetric half target");
  design_cmd->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const fs::path dir(out_dir);
    if (*simulate_cmd) {
      RunConfig config = parse_run_config(load_json_file(config_path));
      simulate_over.apply(config);
      if (simulate_method->count()) config.method = method_from_string(method_name);
      if (simulate_cross->count()) config.cross_check = true;
      const SimulationResult r = simulate(config);
      write_simulation(r, dir, "simulate");
      print_simulation(out, r, dir);
      return kExitOk;
    }
    if (*sweep_cmd) {
      SweepConfig config = parse_sweep_config(load_json_file(config_path));
      sweep_over.apply(config.base);
      validate(config.base);
      const auto rows = run_sweep(config, parallel);
      write_sweep(config, rows, dir);
      for (const auto& row : rows)
        out << to_string(config.axis) << "=" << format_double(row.value) << " " << row.status
            << " tail_p=" << format_double(row.tail_p) << "\n";
      out << "wrote " << (dir / "sweep.csv").string() << "\n";
      const int code = sweep_exit_code(rows);
      if (code != kExitOk) err << "error: some sweep points failed, see manifest.json\n";
      return code;
    }
    if (*fig1_cmd) {
      Fig1Preset preset = fig1_preset(variant.front(), n_qubits);
      fig1_over.apply(preset.config);
      if (fig1_method->count()) preset.config.method = method_from_string(method_name);
      if (fig1_cross->count()) preset.config.cross_check = true;
      const SimulationResult r = simulate(preset.config);
      const json extra = {{"preset", variant},
                          {"reference_asymptote", preset.reference},
                          {"reference_deviation", std::abs(r.tail_p - preset.reference)}};
      write_simulation(r, dir, "fig1", extra);
      print_simulation(out, r, dir);
      out << "reference=" << format_double(preset.reference)
          << " deviation=" << format_double(std::abs(r.tail_p - preset.reference)) << "\n";
      return kExitOk;
    }
    if (*bench_cmd) {
      validate(bench);
      std::vector<BenchRow> rows;
      int code = kExitOk;
      for (int n : bench.n_list) {
        BenchRow row;
        try {
          row = bench_one(n, bench);
        } catch (const Error& e) {
          row.n_qubits = n;
          row.dim = std::size_t{1} << n;
          row.reps = bench.reps;
          row.status = std::string(to_string(e.code()));
          err << "error: N=" << n << ": " << e.what() << "\n";
          code = std::max(code, exit_code_for(e.code()));
        }
        out << "N=" << n << " full_s=" << format_double(row.full_s)
            << " reduced_s=" << format_double(row.reduced_s)
            << " speedup=" << format_double(row.speedup)
            << " max_deviation=" << format_double(row.max_deviation) << " " << row.status << "\n";
        rows.push_back(row);
      }
      write_bench(bench, rows, dir);
      return code;
    }
    if (*design_cmd) {
      request.target = design_target_from_string(target_name);
      request.ramp = ramp_kind_from_string(ramp_name);
      const DesignResult result = design(request);
      if (result.warning) err << "warning: " << *result.warning << "\n";
      write_design(result, dir);
      out << "lambda=" << format_double(result.lambda)
          << " alpha_over_hbar=" << format_double(result.duration.alpha_over_hbar)
          << " duration_s=" << format_double(result.duration.seconds)
          << " predicted_p=" << format_double(result.predicted_p) << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace ghzsim::cli

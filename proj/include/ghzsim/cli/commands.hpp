#pragma once

// The five subcommands as library calls. Each compute step is pure; the
// write_* functions put the result under an output directory, and every file
// carries the tool version and the config hash.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ghzsim/analytics.hpp"
#include "ghzsim/cli/config.hpp"
#include "ghzsim/errors.hpp"
#include "ghzsim/ghz.hpp"
#include "ghzsim/propagator.hpp"

namespace ghzsim::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(ErrorCode code);

// ---- simulate ----

struct SimulationResult {
  RunConfig config;
  std::string config_hash;
  BasisIndex initial = 0;
  BasisIndex target = 0;
  SubspacePair pair;
  TrajectoryRecord trajectory;
  std::vector<double> p_target;
  std::vector<double> p_initial;
  std::vector<cplx> amp_rep;      // a = <rep|psi> per sample
  std::vector<cplx> amp_partner;  // b = <partner|psi> per sample
  std::vector<double> norm;
  double final_p = 0.0;
  double tail_p = 0.0;
  GhzReport ghz;
  std::optional<double> lambda;  // configured (gamma_x^2 + gamma_y^2)/alpha
  std::optional<double> effective_lambda;  // |coupling|^2 / alpha of the pair
  std::optional<analytics::Adiabaticity> regime;
  // Asymptotic formula for the ramp kind; only for target = flipped initial.
  std::optional<double> analytic_reference;
  std::optional<double> cross_check_deviation;
  std::optional<double> cross_check_leakage;
};

SimulationResult simulate(const RunConfig& config);

json report_json(const SimulationResult& result);
void write_trajectory_csv(const SimulationResult& result, const fs::path& file);
// trajectory.csv, report.json, manifest.json
void write_simulation(const SimulationResult& result, const fs::path& out_dir,
                      const std::string& command, const json& extra_report = json::object());

// ---- fig1 ----

struct Fig1Preset {
  char variant = 'a';
  RunConfig config;
  double reference = 0.0;  // asymptotic P for the preset's ramp
};

// a: lambda = 2, symmetric [-100, 100]; b: lambda = ln2/(2 pi), symmetric
// [-100, 100]; c: lambda = 2, asymmetric [0, 100]. alpha = 1, start |-...->.
Fig1Preset fig1_preset(char variant, int n_qubits = 4);

// ---- sweep ----

struct SweepRow {
  double value = 0.0;
  std::string status = "ok";  // "ok" or the error code name
  std::string message;
  int exit_code = kExitOk;
  double final_p = 0.0;
  double tail_p = 0.0;
  std::optional<double> analytic;
  std::optional<double> deviation;
  double fidelity = 0.0;
  double phi_star = 0.0;
  std::optional<double> cross_check_deviation;
  double wall_time = 0.0;
};

// Rows in the order of config.values whatever the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& config, int parallel = 1);
// Highest-priority failure among rows, kExitOk if all passed.
int sweep_exit_code(const std::vector<SweepRow>& rows);
void write_sweep(const SweepConfig& config, const std::vector<SweepRow>& rows,
                 const fs::path& out_dir);

// ---- bench ----

struct BenchOptions {
  std::vector<int> n_list;
  int reps = 1;
  double tol = 1e-10;
  std::size_t n_samples = 2001;
};

struct BenchRow {
  int n_qubits = 0;
  std::size_t dim = 0;
  int reps = 0;
  double full_s = 0.0;     // fastest full-space run
  double reduced_s = 0.0;  // fastest single-pair run
  double speedup = 0.0;
  double max_deviation = 0.0;
  std::string status = "ok";
};

void validate(const BenchOptions& options);
// The fig1 'a' drive on the pair of |-...->.
BenchRow bench_one(int n_qubits, const BenchOptions& options);
json to_json(const BenchOptions& options);
void write_bench(const BenchOptions& options, const std::vector<BenchRow>& rows,
                 const fs::path& out_dir);

// ---- design ----

enum class DesignTarget { Full, Half };

struct DesignRequest {
  double gamma_hz = 0.0;
  DesignTarget target = DesignTarget::Half;
  analytics::RampKind ramp = analytics::RampKind::Symmetric;
  double tau_window = 200.0;
  bool approx = false;
};

// Distance below 1/2 used for the asymmetric half target, whose formula only
// approaches 1/2 as lambda grows without bound.
inline constexpr double kHalfAsymmetricEpsilon = 1e-3;
// Lambda chosen for the full-transfer target.
inline constexpr double kFullTransferLambda = 2.0;

struct DesignResult {
  DesignRequest request;
  double lambda = 0.0;
  std::optional<double> epsilon;
  analytics::DurationEstimate duration;
  double predicted_p = 0.0;
  std::optional<std::string> warning;
};

// Throws InvalidSpec for gamma_hz <= 0 and UnreachableTarget for the
// asymmetric half target unless approx is set.
DesignResult design(const DesignRequest& request);
json to_json(const DesignRequest& request);
void write_design(const DesignResult& result, const fs::path& out_dir);

DesignTarget design_target_from_string(const std::string& name);
analytics::RampKind ramp_kind_from_string(const std::string& name);

// ---- shared output helpers ----

// %.17g; "nan" for NaN.
std::string format_double(double x);
void ensure_directory(const fs::path& dir);
void write_text_file(const fs::path& file, const std::string& text);
void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs, const json& summary = json::object());

}  // namespace ghzsim::cli

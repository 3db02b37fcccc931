#include "ghzsim/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace ghzsim::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::string optional_field(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

std::string header_comment(const std::string& hash) {
  return std::string("# ") + kToolName + " " + kToolVersion + " config_sha256=" + hash + "\n";
}

std::optional<analytics::RampKind> ramp_of(DriveKind kind) {
  if (kind == DriveKind::LinearSymmetric) return analytics::RampKind::Symmetric;
  if (kind == DriveKind::LinearAsymmetric) return analytics::RampKind::Asymmetric;
  return std::nullopt;
}

json stats_json(const IntegratorStats& s) {
  return {{"tol", s.tol},
          {"step_bound", s.step_bound},
          {"steps", s.steps},
          {"halvings", s.halvings},
          {"final_change", s.final_change},
          {"max_norm_drift", s.max_norm_drift}};
}

json ghz_json(const GhzReport& g) {
  return {{"p_rep", g.p_rep},
          {"p_partner", g.p_partner},
          {"coherence_mag", g.coherence_mag},
          {"phi_star", g.phi_star},
          {"fidelity", g.fidelity},
          {"degenerate", g.degenerate}};
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::NoConvergence: return kExitNumerical;
    default: return kExitValidation;
  }
}

// ---- simulate ----

SimulationResult simulate(const RunConfig& config) {
  validate(config);
  SimulationResult r;
  r.config = config;
  r.config_hash = config_hash(to_json(config));

  const ChainModel model = build_chain(config.chain, config.drive);
  const int n = model.n_qubits();
  r.initial = parse_bitstring(config.initial, n, "initial");
  r.target = config.target ? parse_bitstring(*config.target, n, "target")
                           : r.initial ^ model.flip_mask();
  r.pair = pair_of(r.initial, n);
  const PropagationOptions options{config.tol, config.n_samples};

  if (config.method == Method::Reduced) {
    r.trajectory = propagate_reduced(model, r.initial, options);
    if (config.cross_check) {
      const auto full = propagate_full(model, StateVector::basis(n, r.initial), options);
      r.cross_check_deviation = max_amplitude_deviation(r.trajectory, full);
      r.cross_check_leakage = max_leakage(full, r.pair);
    }
  } else {
    r.trajectory = propagate_full(model, StateVector::basis(n, r.initial), options);
    r.cross_check_leakage = max_leakage(r.trajectory, r.pair);
    if (config.cross_check) {
      const auto reduced = propagate_reduced(model, r.initial, options);
      r.cross_check_deviation = max_amplitude_deviation(reduced, r.trajectory);
    }
  }

  const auto& traj = r.trajectory;
  const auto curve_target = transition_probability(traj, r.target);
  const auto curve_initial = transition_probability(traj, r.initial);
  const std::size_t col_rep = traj.column_of(r.pair.representative);
  const std::size_t col_partner = traj.column_of(r.pair.partner);
  const std::size_t n_samples = traj.n_samples();
  r.p_target.resize(n_samples);
  r.p_initial.resize(n_samples);
  r.amp_rep.resize(n_samples);
  r.amp_partner.resize(n_samples);
  r.norm.resize(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto row = traj.sample(s);
    r.p_target[s] = curve_target[s].second;
    r.p_initial[s] = curve_initial[s].second;
    r.amp_rep[s] = row[col_rep];
    r.amp_partner[s] = row[col_partner];
    double norm = 0.0;
    for (const auto& c : row) norm += std::norm(c);
    r.norm[s] = norm;
  }
  r.final_p = r.p_target.back();
  r.tail_p = tail_average(curve_target);
  r.ghz = traj.kind == RunKind::Full ? ghz_fidelity(traj.final_state(), r.pair)
                                     : ghz_report_from_amplitudes(r.amp_rep.back(),
                                                                  r.amp_partner.back());

  r.lambda = config_lambda(config);
  if (config.drive.kind != DriveKind::Constant) {
    const TwoLevelProblem problem = effective_two_level(model, r.pair);
    r.effective_lambda = std::norm(problem.coupling) / config.drive.alpha;
    r.regime = analytics::adiabaticity({*r.effective_lambda}).regime;
    const auto ramp = ramp_of(config.drive.kind);
    if (ramp && r.target == (r.initial ^ model.flip_mask()))
      r.analytic_reference = analytics::lmsz_asymptotic({*r.effective_lambda, *ramp});
  }
  return r;
}

json report_json(const SimulationResult& r) {
  const int n = r.config.chain.n_qubits;
  json cross = nullptr;
  if (r.cross_check_deviation || r.cross_check_leakage)
    cross = {{"max_amplitude_deviation", optional_number(r.cross_check_deviation)},
             {"max_leakage", optional_number(r.cross_check_leakage)}};
  std::optional<double> deviation;
  if (r.analytic_reference) deviation = std::abs(r.tail_p - *r.analytic_reference);
  json warnings = json::array();
  if (r.config.chain.gamma_x == 0.0 && r.config.chain.gamma_y == 0.0)
    warnings.push_back("gamma_x = gamma_y = 0: diagonal dynamics, no transitions");
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"config_hash", r.config_hash},
          {"config", to_json(r.config)},
          {"method", to_string(r.config.method)},
          {"n_qubits", n},
          {"initial", to_bitstring(r.initial, n)},
          {"target", to_bitstring(r.target, n)},
          {"pair",
           {{"representative", to_bitstring(r.pair.representative, n)},
            {"partner", to_bitstring(r.pair.partner, n)}}},
          {"final_p", r.final_p},
          {"tail_p", r.tail_p},
          {"tail_fraction", 0.1},
          {"ghz", ghz_json(r.ghz)},
          {"lambda", optional_number(r.lambda)},
          {"effective_lambda", optional_number(r.effective_lambda)},
          {"adiabaticity", r.regime ? json(analytics::to_string(*r.regime)) : json(nullptr)},
          {"analytic_reference", optional_number(r.analytic_reference)},
          {"analytic_deviation", optional_number(deviation)},
          {"integrator", stats_json(r.trajectory.stats)},
          {"cross_check", cross},
          {"warnings", warnings}};
}

void write_trajectory_csv(const SimulationResult& r, const fs::path& file) {
  std::string text = header_comment(r.config_hash);
  text += "tau,p_target,p_initial,re_a,im_a,re_b,im_b,norm\n";
  const auto& taus = r.trajectory.taus;
  for (std::size_t s = 0; s < taus.size(); ++s) {
    text += format_double(taus[s]) + ',' + format_double(r.p_target[s]) + ',' +
            format_double(r.p_initial[s]) + ',' + format_double(r.amp_rep[s].real()) + ',' +
            format_double(r.amp_rep[s].imag()) + ',' + format_double(r.amp_partner[s].real()) +
            ',' + format_double(r.amp_partner[s].imag()) + ',' + format_double(r.norm[s]) + '\n';
  }
  write_text_file(file, text);
}

void write_simulation(const SimulationResult& r, const fs::path& out_dir,
                      const std::string& command, const json& extra_report) {
  ensure_directory(out_dir);
  write_trajectory_csv(r, out_dir / "trajectory.csv");
  json report = report_json(r);
  report.update(extra_report);
  write_text_file(out_dir / "report.json", report.dump(2) + "\n");
  write_manifest(out_dir, command, to_json(r.config), {"trajectory.csv", "report.json"},
                 {{"final_p", r.final_p}, {"tail_p", r.tail_p}, {"fidelity", r.ghz.fidelity}});
}

// ---- fig1 ----

Fig1Preset fig1_preset(char variant, int n_qubits) {
  Fig1Preset preset;
  preset.variant = variant;
  RunConfig& c = preset.config;
  c.chain.n_qubits = n_qubits;
  c.initial = std::string(static_cast<std::size_t>(std::max(n_qubits, 0)), '-');
  c.drive.alpha = 1.0;
  double lambda = 2.0;
  switch (variant) {
    case 'a':
      c.drive.kind = DriveKind::LinearSymmetric;
      c.drive.tau_i = -100.0;
      c.drive.tau_f = 100.0;
      break;
    case 'b':
      lambda = analytics::half_transition_lambda();
      c.drive.kind = DriveKind::LinearSymmetric;
      c.drive.tau_i = -100.0;
      c.drive.tau_f = 100.0;
      break;
    case 'c':
      c.drive.kind = DriveKind::LinearAsymmetric;
      c.drive.tau_i = 0.0;
      c.drive.tau_f = 100.0;
      break;
    default:
      throw Error(ErrorCode::InvalidConfig, std::string("fig1 variant must be a, b or c, got '") +
                                                variant + "'");
  }
  c.chain.gamma_x = std::sqrt(lambda * c.drive.alpha);
  preset.reference = analytics::lmsz_asymptotic(
      {lambda, variant == 'c' ? analytics::RampKind::Asymmetric : analytics::RampKind::Symmetric});
  return preset;
}

// ---- sweep ----

namespace {

SweepRow sweep_row(const SweepConfig& config, double value) {
  SweepRow row;
  row.value = value;
  const auto start = Clock::now();
  try {
    const SimulationResult r = simulate(sweep_point(config, value));
    row.final_p = r.final_p;
    row.tail_p = r.tail_p;
    row.analytic = r.analytic_reference;
    if (r.analytic_reference) row.deviation = std::abs(r.tail_p - *r.analytic_reference);
    row.fidelity = r.ghz.fidelity;
    row.phi_star = r.ghz.phi_star;
    row.cross_check_deviation = r.cross_check_deviation;
  } catch (const Error& e) {
    row.status = std::string(to_string(e.code()));
    row.message = e.what();
    row.exit_code = exit_code_for(e.code());
  } catch (const std::exception& e) {
    row.status = "internal";
    row.message = e.what();
    row.exit_code = kExitNumerical;
  }
  row.wall_time = seconds_since(start);
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config, int parallel) {
  validate(config);
  const std::size_t n = config.values.size();
  std::vector<SweepRow> rows(n);
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parallel, 1)), 1, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) rows[i] = sweep_row(config, config.values[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

int sweep_exit_code(const std::vector<SweepRow>& rows) {
  int code = kExitOk;
  for (const auto& row : rows) code = std::max(code, row.exit_code);
  return code;
}

void write_sweep(const SweepConfig& config, const std::vector<SweepRow>& rows,
                 const fs::path& out_dir) {
  ensure_directory(out_dir);
  const json canonical = to_json(config);
  const std::string hash = config_hash(canonical);
  std::string text = header_comment(hash);
  text += std::string(to_string(config.axis)) +
          ",status,final_p,tail_p,analytic,deviation,fidelity,phi_star,cross_check_deviation,"
          "wall_time_s\n";
  json failures = json::array();
  std::size_t n_failed = 0;
  for (const auto& row : rows) {
    const bool ok = row.status == "ok";
    text += format_double(row.value) + ',' + row.status + ',' +
            (ok ? format_double(row.final_p) : "") + ',' + (ok ? format_double(row.tail_p) : "") +
            ',' + optional_field(row.analytic) + ',' + optional_field(row.deviation) + ',' +
            (ok ? format_double(row.fidelity) : "") + ',' +
            (ok ? format_double(row.phi_star) : "") + ',' +
            optional_field(row.cross_check_deviation) + ',' + format_double(row.wall_time) + '\n';
    if (!ok) {
      ++n_failed;
      failures.push_back({{"value", row.value}, {"status", row.status}, {"message", row.message}});
    }
  }
  write_text_file(out_dir / "sweep.csv", text);
  write_manifest(out_dir, "sweep", canonical, {"sweep.csv"},
                 {{"points", rows.size()}, {"failed", n_failed}, {"failures", failures}});
}

// ---- bench ----

void validate(const BenchOptions& options) {
  if (options.n_list.empty()) throw Error(ErrorCode::InvalidConfig, "field 'n_list' is empty");
  for (int n : options.n_list) {
    if (n < 2) throw Error(ErrorCode::InvalidConfig, "field 'n_list' entries must be >= 2");
    if (static_cast<std::size_t>(n) > kMaxFullQubits)
      throw Error(ErrorCode::DimensionTooLarge,
                  "bench needs n_qubits <= " + std::to_string(kMaxFullQubits));
  }
  if (options.reps < 1) throw Error(ErrorCode::InvalidConfig, "field 'reps' must be >= 1");
  if (!(options.tol >= 1e-13 && options.tol <= 1e-6))
    throw Error(ErrorCode::InvalidConfig, "field 'tol' must lie in [1e-13, 1e-6]");
  if (options.n_samples < 2) throw Error(ErrorCode::InvalidConfig, "field 'samples' must be >= 2");
}

BenchRow bench_one(int n_qubits, const BenchOptions& options) {
  const RunConfig config = fig1_preset('a', n_qubits).config;
  const ChainModel model = build_chain(config.chain, config.drive);
  const PropagationOptions prop{options.tol, options.n_samples};
  const StateVector initial = StateVector::basis(n_qubits, 0);

  BenchRow row;
  row.n_qubits = n_qubits;
  row.dim = model.dim();
  row.reps = options.reps;
  row.full_s = std::numeric_limits<double>::infinity();
  row.reduced_s = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < options.reps; ++rep) {
    auto start = Clock::now();
    const TrajectoryRecord full = propagate_full(model, initial, prop);
    row.full_s = std::min(row.full_s, seconds_since(start));
    start = Clock::now();
    const TrajectoryRecord reduced = propagate_reduced(model, 0, prop);
    row.reduced_s = std::min(row.reduced_s, seconds_since(start));
    row.max_deviation = std::max(row.max_deviation, max_amplitude_deviation(reduced, full));
  }
  row.speedup = row.full_s / row.reduced_s;
  return row;
}

json to_json(const BenchOptions& options) {
  return {{"command", "bench"},
          {"n_list", options.n_list},
          {"reps", options.reps},
          {"tol", options.tol},
          {"n_samples", options.n_samples},
          {"preset", "a"}};
}

void write_bench(const BenchOptions& options, const std::vector<BenchRow>& rows,
                 const fs::path& out_dir) {
  ensure_directory(out_dir);
  const json canonical = to_json(options);
  std::string text = header_comment(config_hash(canonical));
  text += "n_qubits,dim,reps,full_s,reduced_s,speedup,max_deviation,status\n";
  for (const auto& row : rows) {
    text += std::to_string(row.n_qubits) + ',' + std::to_string(row.dim) + ',' +
            std::to_string(row.reps) + ',' + format_double(row.full_s) + ',' +
            format_double(row.reduced_s) + ',' + format_double(row.speedup) + ',' +
            format_double(row.max_deviation) + ',' + row.status + '\n';
  }
  write_text_file(out_dir / "bench.csv", text);
  write_manifest(out_dir, "bench", canonical, {"bench.csv"});
}

// ---- design ----

DesignResult design(const DesignRequest& request) {
  if (!(request.gamma_hz > 0.0) || !std::isfinite(request.gamma_hz))
    throw Error(ErrorCode::InvalidSpec, "field 'gamma_hz' must be > 0");
  if (!(request.tau_window > 0.0) || !std::isfinite(request.tau_window))
    throw Error(ErrorCode::InvalidSpec, "field 'tau_window' must be > 0");
  DesignResult result;
  result.request = request;
  if (request.target == DesignTarget::Full) {
    result.lambda = kFullTransferLambda;
  } else if (request.ramp == analytics::RampKind::Symmetric) {
    result.lambda = analytics::half_transition_lambda();
  } else if (!request.approx) {
    result.lambda = analytics::solve_lambda_for_probability(0.5, request.ramp);  // throws
  } else {
    result.epsilon = kHalfAsymmetricEpsilon;
    result.lambda = analytics::solve_lambda_for_probability(0.5 - kHalfAsymmetricEpsilon,
                                                            request.ramp);
    result.warning =
        "asymmetric ramps only approach P = 1/2; designed for P = 1/2 - epsilon instead";
  }
  result.predicted_p = analytics::lmsz_asymptotic({result.lambda, request.ramp});
  result.duration = analytics::estimate_duration({request.gamma_hz, result.lambda,
                                                  request.tau_window});
  return result;
}

json to_json(const DesignRequest& request) {
  return {{"command", "design"},
          {"gamma_hz", request.gamma_hz},
          {"target", request.target == DesignTarget::Full ? "full" : "half"},
          {"ramp", analytics::to_string(request.ramp)},
          {"tau_window", request.tau_window},
          {"approx", request.approx}};
}

void write_design(const DesignResult& result, const fs::path& out_dir) {
  ensure_directory(out_dir);
  const json canonical = to_json(result.request);
  const std::string hash = config_hash(canonical);
  const json doc = {{"tool", kToolName},
                    {"version", kToolVersion},
                    {"config_hash", hash},
                    {"request", canonical},
                    {"lambda", result.lambda},
                    {"epsilon", optional_number(result.epsilon)},
                    {"alpha_over_hbar_s2", result.duration.alpha_over_hbar},
                    {"duration_s", result.duration.seconds},
                    {"predicted_p", result.predicted_p},
                    {"approximate", result.epsilon.has_value()},
                    {"hz_convention", "gamma / hbar = 2 pi gamma_hz"},
                    {"warning", result.warning ? json(*result.warning) : json(nullptr)}};
  write_text_file(out_dir / "design.json", doc.dump(2) + "\n");
  write_manifest(out_dir, "design", canonical, {"design.json"});
}

DesignTarget design_target_from_string(const std::string& name) {
  if (name == "full") return DesignTarget::Full;
  if (name == "half") return DesignTarget::Half;
  throw Error(ErrorCode::InvalidConfig, "field 'target' must be 'full' or 'half'");
}

analytics::RampKind ramp_kind_from_string(const std::string& name) {
  if (name == "symmetric") return analytics::RampKind::Symmetric;
  if (name == "asymmetric") return analytics::RampKind::Asymmetric;
  throw Error(ErrorCode::InvalidConfig, "field 'ramp' must be 'symmetric' or 'asymmetric'");
}

// ---- shared output helpers ----

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorCode::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + file.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to " + file.string() + " failed");
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs, const json& summary) {
  const json doc = {{"tool", kToolName},
                    {"version", kToolVersion},
                    {"command", command},
                    {"config_hash", config_hash(config)},
                    {"config", config},
                    {"outputs", outputs},
                    {"summary", summary}};
  write_text_file(out_dir / "manifest.json", doc.dump(2) + "\n");
}

}  // namespace ghzsim::cli

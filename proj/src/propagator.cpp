#include "ghzsim/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "ghzsim/errors.hpp"
#include "rk78.hpp"

namespace ghzsim {

namespace {

using State = std::vector<cplx>;

// Plain products; std::complex operator* carries inf/nan recovery that is
// far slower and never needed here.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
inline cplx times_minus_i(cplx a) { return {a.imag(), -a.real()}; }

struct Generator {
  std::size_t dim = 0;
  std::function<void(const State& psi, State& dpsi, double tau)> rhs;
  // Upper bound on the spectral radius of H(tau)/E.
  std::function<double(double tau)> rate;
};

struct FixedRun {
  std::vector<cplx> amplitudes;
  std::size_t steps = 0;
};

FixedRun integrate_fixed(const Generator& gen, const State& initial,
                         const std::vector<double>& taus, double step_bound) {
  FixedRun run;
  run.amplitudes.reserve(taus.size() * gen.dim);
  State psi = initial;
  run.amplitudes.insert(run.amplitudes.end(), psi.begin(), psi.end());

  detail::Rk78Stepper stepper(gen.dim);

  for (std::size_t k = 1; k < taus.size(); ++k) {
    double t = taus[k - 1];
    const double t_end = taus[k];
    while (t < t_end) {
      const double remaining = t_end - t;
      double h = remaining;
      const double r0 = gen.rate(t);
      if (r0 > 0.0) h = std::min(h, step_bound / r0);
      const double r1 = gen.rate(t + h);
      if (r1 > r0) h = std::min(h, step_bound / r1);
      // Absorb slivers into the current step so the grid is hit exactly.
      const double t_next = (remaining - h < 1e-3 * h) ? t_end : t + h;
      // The step actually taken must equal the clock advance; t + h rounds
      // by ~ulp(t), which at large |t| is a real phase error.
      stepper.step(gen.rhs, psi, t, t_next - t);
      t = t_next;
      ++run.steps;
    }
    run.amplitudes.insert(run.amplitudes.end(), psi.begin(), psi.end());
  }
  return run;
}

double initial_step_bound(double tol) {
  return std::clamp(0.25 * std::pow(tol / 1e-10, 1.0 / 8.0), 1e-3, 1.0);
}

void check_options(const PropagationOptions& options) {
  if (!(options.tol >= 1e-13 && options.tol <= 1e-6))
    throw Error(ErrorCode::InvalidConfig, "tol must lie in [1e-13, 1e-6]");
  if (options.n_samples < 2) throw Error(ErrorCode::InvalidConfig, "n_samples must be >= 2");
}

double max_norm_drift(const std::vector<cplx>& amps, std::size_t width) {
  const std::size_t n = amps.size() / width;
  auto norm_at = [&](std::size_t s) {
    double acc = 0.0;
    for (std::size_t c = 0; c < width; ++c) acc += std::norm(amps[s * width + c]);
    return acc;
  };
  const double n0 = norm_at(0);
  double drift = 0.0;
  for (std::size_t s = 1; s < n; ++s) drift = std::max(drift, std::abs(norm_at(s) - n0));
  return drift;
}

// Halve the step bound until two successive runs agree to tol.
FixedRun converge(const Generator& gen, const State& initial, const std::vector<double>& taus,
                  double tol, IntegratorStats& stats) {
  double kappa = initial_step_bound(tol);
  FixedRun coarse = integrate_fixed(gen, initial, taus, kappa);
  double change = std::numeric_limits<double>::infinity();
  for (int halving = 1; halving <= kMaxHalvings; ++halving) {
    kappa /= 2.0;
    FixedRun fine = integrate_fixed(gen, initial, taus, kappa);
    change = 0.0;
    for (std::size_t i = 0; i < fine.amplitudes.size(); ++i)
      change = std::max(change, std::abs(fine.amplitudes[i] - coarse.amplitudes[i]));
    if (change <= tol) {
      stats.tol = tol;
      stats.step_bound = kappa;
      stats.steps = fine.steps;
      stats.halvings = halving;
      stats.final_change = change;
      return fine;
    }
    coarse = std::move(fine);
  }
  throw Error(ErrorCode::NoConvergence,
              "amplitudes still change by " + std::to_string(change) + " at step bound " +
                  std::to_string(kappa));
}

Generator two_level_generator(const TwoLevelProblem& p) {
  // Only the traceless part is integrated; the trace contributes the exact
  // phase applied in attach_trace_phase().
  const double split = 0.5 * (p.offset_rep - p.offset_partner);
  const double inv_scale = 1.0 / p.energy_scale;
  const cplx c = p.coupling * inv_scale;
  const cplx c_conj = std::conj(c);
  const double s = p.detuning_sign;
  const DriveProfile drive = p.drive;

  Generator gen;
  gen.dim = 2;
  gen.rhs = [=](const State& x, State& dxdt, double tau) {
    const double d = (s * detail::drive_value_unchecked(drive, tau) + split) * inv_scale;
    dxdt[0] = times_minus_i(d * x[0] + mul(c_conj, x[1]));
    dxdt[1] = times_minus_i(mul(c, x[0]) - d * x[1]);
  };
  const double static_rate = std::abs(c) + std::abs(split) * inv_scale;
  gen.rate = [=](double tau) {
    return std::abs(detail::drive_value_unchecked(drive, tau)) * inv_scale + static_rate;
  };
  return gen;
}

void attach_trace_phase(const TwoLevelProblem& p, TrajectoryRecord& rec) {
  const double mean = 0.5 * (p.offset_rep + p.offset_partner) / p.energy_scale;
  if (mean == 0.0) return;
  for (std::size_t s = 0; s < rec.taus.size(); ++s) {
    const cplx phase = std::polar(1.0, -mean * (rec.taus[s] - rec.drive.tau_i));
    rec.amplitudes[2 * s] *= phase;
    rec.amplitudes[2 * s + 1] *= phase;
  }
}

Generator full_generator(const ChainModel& model) {
  const double inv_scale = 1.0 / model.energy_scale();
  const auto& spec = model.spec();
  const double static_rate =
      (std::abs(spec.gamma_x) + std::abs(spec.gamma_y) + std::abs(spec.gamma_z)) * inv_scale;
  Generator gen;
  gen.dim = model.dim();
  gen.rhs = [&model, inv_scale](const State& x, State& dxdt, double tau) {
    apply_hamiltonian(model, tau, x, dxdt);
    for (auto& v : dxdt) v = times_minus_i(v * inv_scale);
  };
  gen.rate = [&model, inv_scale, static_rate](double tau) {
    return std::abs(detail::drive_value_unchecked(model.drive(), tau)) * inv_scale + static_rate;
  };
  return gen;
}

void check_full_dimension(const ChainModel& model, const StateVector& initial) {
  if (static_cast<std::size_t>(model.n_qubits()) > kMaxFullQubits)
    throw Error(ErrorCode::DimensionTooLarge,
                "full-space propagation limited to N <= " + std::to_string(kMaxFullQubits));
  if (initial.n_qubits() != model.n_qubits())
    throw Error(ErrorCode::DimensionMismatch, "initial state has N = " +
                                                  std::to_string(initial.n_qubits()) +
                                                  ", model has N = " +
                                                  std::to_string(model.n_qubits()));
}

TrajectoryRecord make_record(RunKind kind, int n_qubits, const DriveProfile& drive,
                             std::vector<double> taus, std::size_t width) {
  TrajectoryRecord rec;
  rec.kind = kind;
  rec.n_qubits = n_qubits;
  rec.drive = drive;
  rec.taus = std::move(taus);
  rec.width = width;
  return rec;
}

}  // namespace

std::size_t TrajectoryRecord::column_of(BasisIndex b) const {
  if (kind == RunKind::Full) {
    if (b >= width)
      throw Error(ErrorCode::TargetOutOfRange, "basis index " + std::to_string(b) +
                                                   " outside 2^" + std::to_string(n_qubits));
    return static_cast<std::size_t>(b);
  }
  if (!pair)
    throw Error(ErrorCode::TargetOutOfRange,
                "reduced trajectory carries no pair; address it by PairMember");
  if (b == pair->representative) return 0;
  if (b == pair->partner) return 1;
  throw Error(ErrorCode::TargetOutOfRange,
              "basis index " + std::to_string(b) + " is not in the propagated pair");
}

std::vector<double> sample_times(const DriveProfile& drive, std::size_t n_samples) {
  if (n_samples < 2) throw Error(ErrorCode::InvalidConfig, "n_samples must be >= 2");
  std::vector<double> taus(n_samples);
  const double span = drive.tau_f - drive.tau_i;
  for (std::size_t k = 0; k < n_samples; ++k)
    taus[k] = drive.tau_i + span * static_cast<double>(k) / static_cast<double>(n_samples - 1);
  taus.back() = drive.tau_f;
  return taus;
}

TrajectoryRecord propagate_two_level(const TwoLevelProblem& problem, PairMember initial,
                                     const PropagationOptions& options) {
  std::array<cplx, 2> psi0{};
  psi0[initial == PairMember::Representative ? 0 : 1] = 1.0;
  return propagate_two_level(problem, psi0, options);
}

TrajectoryRecord propagate_two_level(const TwoLevelProblem& problem, std::array<cplx, 2> initial,
                                     const PropagationOptions& options) {
  check_options(options);
  validate_drive(problem.drive);
  auto rec = make_record(RunKind::Reduced, 0, problem.drive,
                         sample_times(problem.drive, options.n_samples), 2);
  const Generator gen = two_level_generator(problem);
  FixedRun run = converge(gen, State(initial.begin(), initial.end()), rec.taus, options.tol,
                          rec.stats);
  rec.amplitudes = std::move(run.amplitudes);
  attach_trace_phase(problem, rec);
  rec.stats.max_norm_drift = max_norm_drift(rec.amplitudes, 2);
  return rec;
}

TrajectoryRecord propagate_reduced(const ChainModel& model, BasisIndex initial,
                                   const PropagationOptions& options) {
  const SubspacePair pair = pair_of(initial, model.n_qubits());
  const TwoLevelProblem problem = effective_two_level(model, pair);
  const PairMember member =
      initial == pair.representative ? PairMember::Representative : PairMember::Partner;
  TrajectoryRecord rec = propagate_two_level(problem, member, options);
  rec.n_qubits = model.n_qubits();
  rec.pair = pair;
  return rec;
}

TrajectoryRecord propagate_full(const ChainModel& model, const StateVector& initial,
                                const PropagationOptions& options) {
  check_full_dimension(model, initial);
  check_options(options);
  auto rec = make_record(RunKind::Full, model.n_qubits(), model.drive(),
                         sample_times(model.drive(), options.n_samples), model.dim());
  const Generator gen = full_generator(model);
  const auto amps = initial.amplitudes();
  FixedRun run = converge(gen, State(amps.begin(), amps.end()), rec.taus, options.tol, rec.stats);
  rec.amplitudes = std::move(run.amplitudes);
  rec.stats.max_norm_drift = max_norm_drift(rec.amplitudes, rec.width);
  return rec;
}

TrajectoryRecord propagate_two_level_fixed(const TwoLevelProblem& problem,
                                           std::array<cplx, 2> initial, std::size_t n_samples,
                                           double step_bound) {
  validate_drive(problem.drive);
  auto rec = make_record(RunKind::Reduced, 0, problem.drive,
                         sample_times(problem.drive, n_samples), 2);
  FixedRun run = integrate_fixed(two_level_generator(problem),
                                 State(initial.begin(), initial.end()), rec.taus, step_bound);
  rec.amplitudes = std::move(run.amplitudes);
  attach_trace_phase(problem, rec);
  rec.stats.step_bound = step_bound;
  rec.stats.steps = run.steps;
  rec.stats.max_norm_drift = max_norm_drift(rec.amplitudes, 2);
  return rec;
}

TrajectoryRecord propagate_full_fixed(const ChainModel& model, const StateVector& initial,
                                      std::size_t n_samples, double step_bound) {
  check_full_dimension(model, initial);
  auto rec = make_record(RunKind::Full, model.n_qubits(), model.drive(),
                         sample_times(model.drive(), n_samples), model.dim());
  const auto amps = initial.amplitudes();
  FixedRun run = integrate_fixed(full_generator(model), State(amps.begin(), amps.end()),
                                 rec.taus, step_bound);
  rec.amplitudes = std::move(run.amplitudes);
  rec.stats.step_bound = step_bound;
  rec.stats.steps = run.steps;
  rec.stats.max_norm_drift = max_norm_drift(rec.amplitudes, rec.width);
  return rec;
}

std::vector<TauProbability> transition_probability(const TrajectoryRecord& traj,
                                                   BasisIndex target) {
  const std::size_t col = traj.column_of(target);
  std::vector<TauProbability> out(traj.n_samples());
  for (std::size_t s = 0; s < out.size(); ++s)
    out[s] = {traj.taus[s], std::norm(traj.amplitudes[s * traj.width + col])};
  return out;
}

std::vector<TauProbability> transition_probability(const TrajectoryRecord& traj,
                                                   PairMember target) {
  if (traj.kind != RunKind::Reduced)
    throw Error(ErrorCode::TargetOutOfRange, "PairMember targets need a reduced trajectory");
  const std::size_t col = target == PairMember::Representative ? 0 : 1;
  std::vector<TauProbability> out(traj.n_samples());
  for (std::size_t s = 0; s < out.size(); ++s)
    out[s] = {traj.taus[s], std::norm(traj.amplitudes[s * 2 + col])};
  return out;
}

double tail_average(std::span<const TauProbability> curve, double fraction) {
  if (curve.empty()) throw Error(ErrorCode::InvalidConfig, "empty probability curve");
  const double t0 = curve.front().first;
  const double t1 = curve.back().first;
  const double cut = t1 - fraction * (t1 - t0);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [tau, p] : curve) {
    if (tau >= cut) {
      sum += p;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

std::vector<cplx> embed_sample(const TrajectoryRecord& reduced, std::size_t sample) {
  if (reduced.kind != RunKind::Reduced || !reduced.pair)
    throw Error(ErrorCode::DimensionMismatch, "embedding needs a reduced run with a pair");
  std::vector<cplx> full(std::size_t{1} << reduced.n_qubits);
  full[reduced.pair->representative] = reduced.amplitudes[2 * sample];
  full[reduced.pair->partner] = reduced.amplitudes[2 * sample + 1];
  return full;
}

double max_amplitude_deviation(const TrajectoryRecord& reduced, const TrajectoryRecord& full) {
  if (reduced.kind != RunKind::Reduced || !reduced.pair || full.kind != RunKind::Full)
    throw Error(ErrorCode::DimensionMismatch, "expected a labelled reduced run and a full run");
  if (reduced.n_qubits != full.n_qubits || reduced.taus != full.taus)
    throw Error(ErrorCode::DimensionMismatch, "runs do not share N and the sample grid");
  const BasisIndex rep = reduced.pair->representative;
  const BasisIndex part = reduced.pair->partner;
  double dev = 0.0;
  for (std::size_t s = 0; s < full.n_samples(); ++s) {
    const auto row = full.sample(s);
    for (BasisIndex b = 0; b < row.size(); ++b) {
      cplx expected = 0.0;
      if (b == rep) expected = reduced.amplitudes[2 * s];
      else if (b == part) expected = reduced.amplitudes[2 * s + 1];
      dev = std::max(dev, std::abs(row[b] - expected));
    }
  }
  return dev;
}

double max_leakage(const TrajectoryRecord& full, const SubspacePair& pair) {
  if (full.kind != RunKind::Full)
    throw Error(ErrorCode::DimensionMismatch, "leakage needs a full-space trajectory");
  double worst = 0.0;
  for (std::size_t s = 0; s < full.n_samples(); ++s) {
    const auto row = full.sample(s);
    double outside = 0.0;
    for (BasisIndex b = 0; b < row.size(); ++b)
      if (b != pair.representative && b != pair.partner) outside += std::norm(row[b]);
    worst = std::max(worst, outside);
  }
  return worst;
}

const char* to_string(RunKind kind) { return kind == RunKind::Reduced ? "reduced" : "full"; }

}  // namespace ghzsim

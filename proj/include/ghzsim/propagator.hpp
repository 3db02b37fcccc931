#pragma once

// Time-dependent Schrodinger propagation in the dimensionless time tau:
//
//   i d psi/d tau = H(tau)/E psi,   E = ChainModel::energy_scale()
//
// Steps come from an 8th-order Runge-Kutta-Fehlberg formula. Each step is
// h = kappa / r(tau), where r bounds the spectral radius of H/E on the step
// and kappa is the step bound. A run is accepted once halving kappa changes
// every sampled amplitude by at most tol.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ghzsim/model.hpp"
#include "ghzsim/subspace.hpp"

namespace ghzsim {

struct PropagationOptions {
  double tol = 1e-10;
  std::size_t n_samples = 2001;
};

inline constexpr std::size_t kMaxFullQubits = 14;
inline constexpr int kMaxHalvings = 12;

struct IntegratorStats {
  double tol = 0.0;
  double step_bound = 0.0;    // kappa of the accepted run
  std::size_t steps = 0;      // steps of the accepted run
  int halvings = 0;
  double final_change = 0.0;  // max |amplitude change| at the last halving
  double max_norm_drift = 0.0;
};

enum class RunKind { Reduced, Full };

struct TrajectoryRecord {
  RunKind kind = RunKind::Reduced;
  int n_qubits = 0;
  std::optional<SubspacePair> pair;  // reduced runs launched from a model
  DriveProfile drive;
  std::vector<double> taus;
  std::size_t width = 0;        // amplitudes per sample: 2 or 2^N
  std::vector<cplx> amplitudes;  // row-major, taus.size() x width
  IntegratorStats stats;

  std::size_t n_samples() const { return taus.size(); }
  std::span<const cplx> sample(std::size_t i) const {
    return std::span<const cplx>(amplitudes).subspan(i * width, width);
  }
  std::span<const cplx> final_state() const { return sample(taus.size() - 1); }
  // Column holding basis state b. Throws TargetOutOfRange.
  std::size_t column_of(BasisIndex b) const;
};

// Samples evenly spaced on [tau_i, tau_f], endpoints included.
std::vector<double> sample_times(const DriveProfile& drive, std::size_t n_samples);

TrajectoryRecord propagate_two_level(const TwoLevelProblem& problem, PairMember initial,
                                     const PropagationOptions& options = {});
TrajectoryRecord propagate_two_level(const TwoLevelProblem& problem,
                                     std::array<cplx, 2> initial,
                                     const PropagationOptions& options = {});

// Reduced run for a basis-state initial condition, labelled with its pair.
TrajectoryRecord propagate_reduced(const ChainModel& model, BasisIndex initial,
                                   const PropagationOptions& options = {});

// Full 2^N propagation. Throws DimensionTooLarge for N > kMaxFullQubits.
TrajectoryRecord propagate_full(const ChainModel& model, const StateVector& initial,
                                const PropagationOptions& options = {});

// Single pass at a fixed step bound, without the halving loop.
TrajectoryRecord propagate_two_level_fixed(const TwoLevelProblem& problem,
                                           std::array<cplx, 2> initial, std::size_t n_samples,
                                           double step_bound);
TrajectoryRecord propagate_full_fixed(const ChainModel& model, const StateVector& initial,
                                      std::size_t n_samples, double step_bound);

using TauProbability = std::pair<double, double>;

std::vector<TauProbability> transition_probability(const TrajectoryRecord& traj,
                                                   BasisIndex target);
// Reduced runs only; member indexes the (representative, partner) columns.
std::vector<TauProbability> transition_probability(const TrajectoryRecord& traj,
                                                   PairMember target);

// Mean of P over samples with tau >= tau_f - fraction * (tau_f - tau_i).
double tail_average(std::span<const TauProbability> curve, double fraction = 0.1);

// Reduced sample embedded into 2^N amplitudes (zeros outside the pair).
std::vector<cplx> embed_sample(const TrajectoryRecord& reduced, std::size_t sample);

// Max over samples and components of |reduced embedded - full|. Both runs
// must share the sample grid.
double max_amplitude_deviation(const TrajectoryRecord& reduced, const TrajectoryRecord& full);

// Max over samples of the population outside `pair`.
double max_leakage(const TrajectoryRecord& full, const SubspacePair& pair);

const char* to_string(RunKind kind);

}  // namespace ghzsim

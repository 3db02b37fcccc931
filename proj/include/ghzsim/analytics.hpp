#pragma once

// Closed-form asymptotics of a linear sweep through an avoided crossing,
// written in the adiabaticity parameter lambda = gamma^2 / (hbar alpha).

#include <string>

namespace ghzsim::analytics {

enum class RampKind { Symmetric, Asymmetric };

struct DimensionlessParams {
  double lambda = 0.0;
  RampKind ramp_kind = RampKind::Symmetric;
};

// Full sweep from -inf to +inf: 1 - exp(-2 pi lambda).
double lmsz_asymptotic_symmetric(const DimensionlessParams& params);

// Sweep starting at the crossing: (1 - exp(-pi lambda / 2)) / 2.
double lmsz_asymptotic_half_ramp(const DimensionlessParams& params);

// Dispatches on ramp_kind.
double lmsz_asymptotic(const DimensionlessParams& params);

// ln 2 / (2 pi): the lambda at which the symmetric sweep ends at P = 1/2.
double half_transition_lambda();

// alpha (energy^2, hbar = 1) that makes the asymptotic formula for
// ramp_kind equal p_target at coupling gamma. Throws UnreachableTarget.
double solve_slope_for_probability(double gamma, double p_target, RampKind ramp_kind);

// lambda that gives p_target; same reachability rules as above.
double solve_lambda_for_probability(double p_target, RampKind ramp_kind);

enum class Adiabaticity { Adiabatic, Intermediate, NonAdiabatic };

inline constexpr double kAdiabaticThreshold = 1.0;
inline constexpr double kNonAdiabaticThreshold = 0.25;

struct AdiabaticityReport {
  Adiabaticity regime = Adiabaticity::Intermediate;
  double lambda = 0.0;
};

AdiabaticityReport adiabaticity(const DimensionlessParams& params);

struct HardwareParams {
  double gamma_hz = 0.0;    // coupling as a frequency, gamma/hbar = 2 pi gamma_hz
  double lambda = 0.0;
  double tau_window = 0.0;  // tau_f - tau_i
};

struct DurationEstimate {
  double alpha_over_hbar = 0.0;  // s^-2
  double seconds = 0.0;
};

// tau = sqrt(alpha/hbar) t, with alpha/hbar = (2 pi gamma_hz)^2 / lambda.
DurationEstimate estimate_duration(const HardwareParams& hw);

const char* to_string(Adiabaticity regime);
const char* to_string(RampKind kind);

}  // namespace ghzsim::analytics

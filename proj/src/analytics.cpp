#include "ghzsim/analytics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghzsim::analytics {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidSpec, "lambda must be finite and >= 0");
}

}  // namespace

double lmsz_asymptotic_symmetric(const DimensionlessParams& params) {
  check_lambda(params.lambda);
  return -std::expm1(-2.0 * std::numbers::pi * params.lambda);
}

double lmsz_asymptotic_half_ramp(const DimensionlessParams& params) {
  check_lambda(params.lambda);
  return -std::expm1(-std::numbers::pi * params.lambda / 2.0) / 2.0;
}

double lmsz_asymptotic(const DimensionlessParams& params) {
  return params.ramp_kind == RampKind::Symmetric ? lmsz_asymptotic_symmetric(params)
                                                 : lmsz_asymptotic_half_ramp(params);
}

double half_transition_lambda() { return std::numbers::ln2 / (2.0 * std::numbers::pi); }

double solve_lambda_for_probability(double p_target, RampKind ramp_kind) {
  const double ceiling = ramp_kind == RampKind::Symmetric ? 1.0 : 0.5;
  if (!(p_target > 0.0 && p_target < ceiling))
    throw Error(ErrorCode::UnreachableTarget,
                std::string("target probability must lie in (0, ") +
                    (ramp_kind == RampKind::Symmetric ? "1" : "1/2") + ") for the " +
                    to_string(ramp_kind) + " ramp");
  if (ramp_kind == RampKind::Symmetric)
    return -std::log1p(-p_target) / (2.0 * std::numbers::pi);
  return -2.0 * std::log1p(-2.0 * p_target) / std::numbers::pi;
}

double solve_slope_for_probability(double gamma, double p_target, RampKind ramp_kind) {
  if (!(gamma != 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidSpec, "coupling must be finite and nonzero");
  return gamma * gamma / solve_lambda_for_probability(p_target, ramp_kind);
}

AdiabaticityReport adiabaticity(const DimensionlessParams& params) {
  check_lambda(params.lambda);
  AdiabaticityReport report;
  report.lambda = params.lambda;
  if (params.lambda >= kAdiabaticThreshold) report.regime = Adiabaticity::Adiabatic;
  else if (params.lambda <= kNonAdiabaticThreshold) report.regime = Adiabaticity::NonAdiabatic;
  else report.regime = Adiabaticity::Intermediate;
  return report;
}

DurationEstimate estimate_duration(const HardwareParams& hw) {
  if (!(hw.gamma_hz > 0.0)) throw Error(ErrorCode::InvalidSpec, "gamma_hz must be > 0");
  if (!(hw.lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "lambda must be > 0");
  if (!(hw.tau_window > 0.0)) throw Error(ErrorCode::InvalidSpec, "tau_window must be > 0");
  const double omega = 2.0 * std::numbers::pi * hw.gamma_hz;
  DurationEstimate est;
  est.alpha_over_hbar = omega * omega / hw.lambda;
  est.seconds = hw.tau_window / std::sqrt(est.alpha_over_hbar);
  return est;
}

const char* to_string(Adiabaticity regime) {
  switch (regime) {
    case Adiabaticity::Adiabatic: return "adiabatic";
    case Adiabaticity::Intermediate: return "intermediate";
    case Adiabaticity::NonAdiabatic: return "non_adiabatic";
  }
  return "unknown";
}

const char* to_string(RampKind kind) {
  return kind == RampKind::Symmetric ? "symmetric" : "asymmetric";
}

}  // namespace ghzsim::analytics

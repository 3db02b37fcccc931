#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ghzsim/analytics.hpp"
#include "ghzsim/errors.hpp"
#include "ghzsim/propagator.hpp"

using namespace ghzsim;
using namespace ghzsim::analytics;

namespace {

constexpr double kPi = std::numbers::pi;

DimensionlessParams sym(double lambda) { return {lambda, RampKind::Symmetric}; }
DimensionlessParams asym(double lambda) { return {lambda, RampKind::Asymmetric}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no ghzsim::Error thrown");
  return ErrorCode::InvalidConfig;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

double tail_p(double lambda, DriveKind kind, double tau_i, double tau_f) {
  DriveProfile d;
  d.kind = kind;
  d.tau_i = tau_i;
  d.tau_f = tau_f;
  const auto model = build_chain({2, std::sqrt(lambda)}, d);
  const auto traj = propagate_reduced(model, 0);
  return tail_average(transition_probability(traj, BasisIndex{3}));
}

}  // namespace

TEST_CASE("symmetric asymptote examples") {
  CHECK(lmsz_asymptotic_symmetric(sym(0.0)) == 0.0);
  CHECK(lmsz_asymptotic_symmetric(sym(half_transition_lambda())) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lmsz_asymptotic_symmetric(sym(2.0)) == doctest::Approx(0.9999965).epsilon(1e-7));
  CHECK(lmsz_asymptotic_symmetric(sym(2.0)) == doctest::Approx(1.0 - std::exp(-4.0 * kPi)));
}

TEST_CASE("half-ramp asymptote examples") {
  CHECK(lmsz_asymptotic_half_ramp(asym(0.0)) == 0.0);
  CHECK(std::abs(lmsz_asymptotic_half_ramp(asym(2.0)) - 0.478393) <= 5e-7);
  CHECK(lmsz_asymptotic_half_ramp(asym(6.0)) < 0.5);
  CHECK(lmsz_asymptotic_half_ramp(asym(6.0)) > 0.4999);
  CHECK(lmsz_asymptotic(asym(2.0)) == lmsz_asymptotic_half_ramp(asym(2.0)));
  CHECK(lmsz_asymptotic(sym(2.0)) == lmsz_asymptotic_symmetric(sym(2.0)));
}

TEST_CASE("half_transition_lambda") {
  const double l = half_transition_lambda();
  CHECK(std::abs(l - 0.110318) <= 5e-7);
  CHECK(lmsz_asymptotic_symmetric(sym(l)) == doctest::Approx(0.5).epsilon(1e-16));
  CHECK(std::abs(2.0 * kPi * l - std::log(2.0)) <= 1e-15);
}

TEST_CASE("strict monotonicity in lambda") {
  const auto grid = log_grid(1e-4, 5.0, 400);
  bool sym_up = true, asym_up = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    sym_up = sym_up && lmsz_asymptotic_symmetric(sym(grid[i])) >
                           lmsz_asymptotic_symmetric(sym(grid[i - 1]));
    asym_up = asym_up && lmsz_asymptotic_half_ramp(asym(grid[i])) >
                             lmsz_asymptotic_half_ramp(asym(grid[i - 1]));
  }
  CHECK(sym_up);
  CHECK(asym_up);
}

TEST_CASE("slope inversion examples") {
  CHECK(solve_slope_for_probability(1.0, 0.5, RampKind::Symmetric) ==
        doctest::Approx(2.0 * kPi / std::log(2.0)));
  CHECK(std::abs(solve_slope_for_probability(1.0, 0.5, RampKind::Symmetric) - 9.0647) <= 5e-5);
  CHECK(std::abs(solve_slope_for_probability(1.0, 0.478393, RampKind::Asymmetric) - 0.5) <= 1e-6);
  CHECK(code_of([] { solve_slope_for_probability(1.0, 0.6, RampKind::Asymmetric); }) ==
        ErrorCode::UnreachableTarget);
}

TEST_CASE("forward/inverse round trip over a log grid of targets") {
  double worst_sym = 0.0, worst_asym = 0.0;
  for (double p : log_grid(1e-6, 0.999, 200)) {
    const double alpha = solve_slope_for_probability(0.7, p, RampKind::Symmetric);
    worst_sym = std::max(worst_sym,
                         std::abs(lmsz_asymptotic_symmetric(sym(0.49 / alpha)) - p));
  }
  for (double p : log_grid(1e-6, 0.4999, 200)) {
    const double alpha = solve_slope_for_probability(0.7, p, RampKind::Asymmetric);
    worst_asym = std::max(worst_asym,
                          std::abs(lmsz_asymptotic_half_ramp(asym(0.49 / alpha)) - p));
  }
  CHECK(worst_sym <= 1e-12);
  CHECK(worst_asym <= 1e-12);
}

TEST_CASE("unreachable targets and invalid inputs") {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::nan("")})
    CHECK(code_of([&] { solve_lambda_for_probability(p, RampKind::Symmetric); }) ==
          ErrorCode::UnreachableTarget);
  for (double p : {0.0, 0.5, 0.7})
    CHECK(code_of([&] { solve_lambda_for_probability(p, RampKind::Asymmetric); }) ==
          ErrorCode::UnreachableTarget);
  CHECK(code_of([] { solve_slope_for_probability(0.0, 0.5, RampKind::Symmetric); }) ==
        ErrorCode::InvalidSpec);
  CHECK(code_of([] { lmsz_asymptotic_symmetric(sym(-1.0)); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { lmsz_asymptotic_half_ramp(asym(std::nan(""))); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("adiabaticity classes") {
  CHECK(adiabaticity(sym(2.0)).regime == Adiabaticity::Adiabatic);
  CHECK(adiabaticity(sym(0.11)).regime == Adiabaticity::NonAdiabatic);
  CHECK(adiabaticity(sym(0.5)).regime == Adiabaticity::Intermediate);
  CHECK(adiabaticity(sym(1.0)).regime == Adiabaticity::Adiabatic);
  CHECK(adiabaticity(sym(0.25)).regime == Adiabaticity::NonAdiabatic);
  CHECK(adiabaticity(sym(0.5)).lambda == 0.5);
  CHECK(std::string(to_string(Adiabaticity::NonAdiabatic)) == "non_adiabatic");
}

TEST_CASE("duration estimates") {
  const double l = half_transition_lambda();
  const auto mhz = estimate_duration({1e6, l, 200.0});
  CHECK(std::abs(mhz.seconds - 1.06e-5) <= 0.005e-5);
  CHECK(mhz.alpha_over_hbar == doctest::Approx(std::pow(2.0 * kPi * 1e6, 2) / l));
  CHECK(mhz.seconds == doctest::Approx(200.0 / std::sqrt(mhz.alpha_over_hbar)));
  const auto khz = estimate_duration({1e3, l, 200.0});
  CHECK(khz.seconds / mhz.seconds == doctest::Approx(1000.0));
  CHECK(code_of([&] { estimate_duration({1e6, l, 0.0}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([&] { estimate_duration({0.0, l, 200.0}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([&] { estimate_duration({1e6, 0.0, 200.0}); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("numerical tail averages against the symmetric asymptote, tau_f = 200") {
  for (double lambda : {0.05, 0.11, 0.5, 1.0, 2.0}) {
    CAPTURE(lambda);
    const double p = tail_p(lambda, DriveKind::LinearSymmetric, -200.0, 200.0);
    CHECK(std::abs(p - lmsz_asymptotic_symmetric(sym(lambda))) <= 0.005);
  }
}

TEST_CASE("asymmetric runs: measured tail against the half-ramp formula") {
  // The numerics on [0, 200] track (1 - exp(-pi lambda)) / 2 rather than the
  // half-ramp formula; the two agree only near lambda = 0 and as lambda grows.
  for (double lambda : {0.05, 0.11, 0.5, 1.0, 2.0}) {
    CAPTURE(lambda);
    const double p = tail_p(lambda, DriveKind::LinearAsymmetric, 0.0, 200.0);
    CHECK(std::abs(p - (-std::expm1(-kPi * lambda) / 2.0)) <= 0.005);
  }
  const double p2 = tail_p(2.0, DriveKind::LinearAsymmetric, 0.0, 200.0);
  CHECK(std::abs(p2 - lmsz_asymptotic_half_ramp(asym(2.0))) > 0.01);
}

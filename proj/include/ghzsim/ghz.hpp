#pragma once

// GHZ-like targets (|rep> + e^{i phi}|partner>)/sqrt(2) on an invariant pair
// and the phase-optimised fidelity of a state against them.

#include <span>

#include "ghzsim/model.hpp"
#include "ghzsim/subspace.hpp"

namespace ghzsim {

struct GhzReport {
  double p_rep = 0.0;
  double p_partner = 0.0;
  double coherence_mag = 0.0;  // |a||b|
  double phi_star = 0.0;       // arg(b) - arg(a) wrapped to (-pi, pi]
  double fidelity = 0.0;       // max over phi of |<GHZ_phi|psi>|^2
  bool degenerate = false;     // a or b vanishes; phi_star is then 0
};

// Below this modulus an amplitude counts as zero for the phase convention.
inline constexpr double kDegenerateAmplitude = 1e-14;
// Allowed |norm^2 - 1| for ghz_fidelity inputs.
inline constexpr double kNormalizationTolerance = 1e-8;

StateVector ghz_like_target(const SubspacePair& pair, double phi);

// Throws NotNormalized or DimensionMismatch.
GhzReport ghz_fidelity(const StateVector& psi, const SubspacePair& pair);
GhzReport ghz_fidelity(std::span<const cplx> psi, const SubspacePair& pair);

// Report from the two pair amplitudes a = <rep|psi>, b = <partner|psi>.
GhzReport ghz_report_from_amplitudes(cplx a, cplx b);

// Wraps an angle to (-pi, pi].
double wrap_phase(double phi);

}  // namespace ghzsim

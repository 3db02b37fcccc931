#include "ghzsim/ghz.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ghzsim/errors.hpp"

namespace ghzsim {

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(phi, two_pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

StateVector ghz_like_target(const SubspacePair& pair, double phi) {
  if (pair.n_qubits < 2 || pair.n_qubits > kMaxQubits)
    throw Error(ErrorCode::InvalidSpec, "pair has invalid n_qubits");
  std::vector<cplx> amps(std::size_t{1} << pair.n_qubits);
  amps[pair.representative] = std::numbers::sqrt2 / 2.0;
  amps[pair.partner] = std::polar(std::numbers::sqrt2 / 2.0, phi);
  return StateVector::from_amplitudes(pair.n_qubits, std::move(amps));
}

GhzReport ghz_report_from_amplitudes(cplx a, cplx b) {
  GhzReport r;
  r.p_rep = std::norm(a);
  r.p_partner = std::norm(b);
  const double abs_a = std::abs(a);
  const double abs_b = std::abs(b);
  r.coherence_mag = abs_a * abs_b;
  r.degenerate = abs_a < kDegenerateAmplitude || abs_b < kDegenerateAmplitude;
  r.phi_star = r.degenerate ? 0.0 : wrap_phase(std::arg(b) - std::arg(a));
  r.fidelity = 0.5 * (r.p_rep + r.p_partner) + r.coherence_mag;
  return r;
}

GhzReport ghz_fidelity(std::span<const cplx> psi, const SubspacePair& pair) {
  if (psi.size() != (std::size_t{1} << pair.n_qubits))
    throw Error(ErrorCode::DimensionMismatch,
                "state length " + std::to_string(psi.size()) + " != 2^" +
                    std::to_string(pair.n_qubits));
  double norm2 = 0.0;
  for (const auto& c : psi) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > kNormalizationTolerance)
    throw Error(ErrorCode::NotNormalized, "state norm^2 = " + std::to_string(norm2));
  return ghz_report_from_amplitudes(psi[pair.representative], psi[pair.partner]);
}

GhzReport ghz_fidelity(const StateVector& psi, const SubspacePair& pair) {
  return ghz_fidelity(psi.amplitudes(), pair);
}

}  // namespace ghzsim

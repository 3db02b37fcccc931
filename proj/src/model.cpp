#include "ghzsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghzsim {

namespace {

bool finite(double x) { return std::isfinite(x); }

double window_slack(const DriveProfile& drive) {
  return 1e-12 * std::max({1.0, std::abs(drive.tau_i), std::abs(drive.tau_f)});
}

}  // namespace

StateVector StateVector::basis(int n_qubits, BasisIndex index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw Error(ErrorCode::InvalidSpec, "n_qubits out of range: " + std::to_string(n_qubits));
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim)
    throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(index) +
                                                " >= 2^" + std::to_string(n_qubits));
  std::vector<cplx> amps(dim);
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<cplx> amplitudes) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw Error(ErrorCode::InvalidSpec, "n_qubits out of range: " + std::to_string(n_qubits));
  if (amplitudes.size() != (std::size_t{1} << n_qubits))
    throw Error(ErrorCode::DimensionMismatch,
                "expected 2^" + std::to_string(n_qubits) + " amplitudes, got " +
                    std::to_string(amplitudes.size()));
  StateVector psi(n_qubits, std::move(amplitudes));
  if (std::abs(psi.norm_squared() - 1.0) > 1e-12)
    throw Error(ErrorCode::NotNormalized, "state norm^2 = " + std::to_string(psi.norm_squared()));
  return psi;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

double ChainModel::energy_scale() const {
  return drive_.kind == DriveKind::Constant ? 1.0 : std::sqrt(drive_.alpha);
}

void validate_spec(const ChainSpec& spec) {
  if (spec.n_qubits < 2 || spec.n_qubits > kMaxQubits)
    throw Error(ErrorCode::InvalidSpec,
                "n_qubits must be in [2, " + std::to_string(kMaxQubits) + "], got " +
                    std::to_string(spec.n_qubits));
  if (!finite(spec.gamma_x) || !finite(spec.gamma_y) || !finite(spec.gamma_z))
    throw Error(ErrorCode::InvalidSpec, "couplings must be finite");
}

void validate_drive(const DriveProfile& drive) {
  if (!finite(drive.tau_i) || !finite(drive.tau_f))
    throw Error(ErrorCode::InvalidWindow, "window bounds must be finite");
  if (!(drive.tau_i < drive.tau_f))
    throw Error(ErrorCode::InvalidWindow, "tau_i must be < tau_f");

  const bool needs_slope = drive.kind != DriveKind::Constant;
  if (needs_slope && !(drive.alpha > 0.0 && finite(drive.alpha)))
    throw Error(ErrorCode::InvalidSpec, "alpha must be positive and finite");

  switch (drive.kind) {
    case DriveKind::LinearSymmetric:
      if (std::abs(drive.tau_i + drive.tau_f) > window_slack(drive))
        throw Error(ErrorCode::InvalidWindow, "symmetric ramp requires tau_i = -tau_f");
      break;
    case DriveKind::LinearAsymmetric:
      if (drive.tau_i != 0.0)
        throw Error(ErrorCode::InvalidWindow, "asymmetric ramp requires tau_i = 0");
      break;
    case DriveKind::Tangent:
      if (drive.tau_f <= 0.0 || drive.tau_i < -drive.tau_f - window_slack(drive))
        throw Error(ErrorCode::InvalidWindow, "tangent profile requires -tau_f <= tau_i < tau_f, tau_f > 0");
      if (!finite(drive.tangent_scale))
        throw Error(ErrorCode::InvalidSpec, "tangent_scale must be finite");
      break;
    case DriveKind::Constant:
      if (!finite(drive.omega0)) throw Error(ErrorCode::InvalidSpec, "omega0 must be finite");
      break;
  }
}

ChainModel build_chain(const ChainSpec& spec, const DriveProfile& drive) {
  validate_spec(spec);
  validate_drive(drive);
  return ChainModel(spec, drive);
}

namespace detail {

double drive_value_unchecked(const DriveProfile& drive, double tau) {
  switch (drive.kind) {
    case DriveKind::LinearSymmetric:
    case DriveKind::LinearAsymmetric:
      return std::sqrt(drive.alpha) * tau / 2.0;
    case DriveKind::Constant:
      return drive.omega0;
    case DriveKind::Tangent: {
      constexpr double limit = std::numbers::pi / 2.0 - kTangentClamp;
      const double arg = std::clamp(std::numbers::pi / 2.0 * tau / drive.tau_f, -limit, limit);
      return drive.tangent_scale * std::tan(arg);
    }
  }
  return 0.0;
}

}  // namespace detail

double matched_tangent_scale(double alpha, double tau_f) {
  return std::sqrt(alpha) * tau_f / std::numbers::pi;
}

double drive_value(const DriveProfile& drive, double tau) {
  const double slack = window_slack(drive);
  if (!(tau >= drive.tau_i - slack && tau <= drive.tau_f + slack))
    throw Error(ErrorCode::OutOfWindow, "tau = " + std::to_string(tau) + " outside [" +
                                            std::to_string(drive.tau_i) + ", " +
                                            std::to_string(drive.tau_f) + "]");
  return detail::drive_value_unchecked(drive, tau);
}

namespace {

// Parity of the set bits; std::popcount becomes a library call without a
// hardware popcnt target, the builtin parity does not.
int ones_parity(BasisIndex b) { return __builtin_parityll(b); }

// i^(-n)
cplx inverse_i_power(int n) {
  static constexpr cplx powers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return powers[n % 4];
}

}  // namespace

cplx sigma_y_string_element(BasisIndex b, int n_qubits) {
  // sy|+> = i|->, sy|-> = -i|+>, so the product is i^ones (-i)^zeros
  // = i^(2 ones - N) = (-1)^ones i^(-N).
  const cplx base = inverse_i_power(n_qubits);
  return ones_parity(b) ? -base : base;
}

double sigma_z_string_eigenvalue(BasisIndex b, int n_qubits) {
  // (-1)^zeros with zeros = N - ones.
  return ((n_qubits + ones_parity(b)) & 1) ? -1.0 : 1.0;
}

cplx matrix_element(const ChainModel& model, double tau, BasisIndex row, BasisIndex col) {
  const auto& spec = model.spec();
  const int n = spec.n_qubits;
  if (row >= model.dim() || col >= model.dim())
    throw Error(ErrorCode::IndexOutOfRange, "matrix element index outside 2^N");
  if (row == col) {
    return ancilla_sign(col) * detail::drive_value_unchecked(model.drive(), tau) +
           spec.gamma_z * sigma_z_string_eigenvalue(col, n);
  }
  if (row == (col ^ model.flip_mask()))
    return spec.gamma_x + spec.gamma_y * sigma_y_string_element(col, n);
  return 0.0;
}

void apply_hamiltonian(const ChainModel& model, double tau, std::span<const cplx> psi,
                       std::span<cplx> out) {
  const std::size_t dim = model.dim();
  if (psi.size() != dim || out.size() != dim)
    throw Error(ErrorCode::DimensionMismatch,
                "state length " + std::to_string(psi.size()) + " != 2^N = " + std::to_string(dim));
  const auto& spec = model.spec();
  const int n = spec.n_qubits;
  const BasisIndex mask = model.flip_mask();
  const double w1 = detail::drive_value_unchecked(model.drive(), tau);

  // Each flip pair (b, b ^ mask) is handled in one pass; b ^ mask == mask - b
  // so both streams run sequentially. Real arithmetic throughout, since
  // std::complex multiplication goes through the checked library routine.
  const double gx = spec.gamma_x;
  const double gz = spec.gamma_z;
  const cplx y_base = spec.gamma_y * inverse_i_power(n);
  const int n_odd = n & 1;
  const cplx* in = psi.data();
  cplx* res = out.data();
  if (spec.gamma_y == 0.0 && gz == 0.0) {
    for (BasisIndex b = 0; b < dim / 2; ++b) {
      const BasisIndex s = mask - b;
      const double anc = (b & 1u) ? w1 : -w1;
      const cplx pb = in[b];
      const cplx ps = in[s];
      res[b] = {anc * pb.real() + gx * ps.real(), anc * pb.imag() + gx * ps.imag()};
      res[s] = {gx * pb.real() - anc * ps.real(), gx * pb.imag() - anc * ps.imag()};
    }
    return;
  }
  for (BasisIndex b = 0; b < dim / 2; ++b) {
    const BasisIndex s = mask - b;
    const int pb = ones_parity(b);
    const int ps = pb ^ n_odd;
    const double anc = (b & 1u) ? w1 : -w1;  // s carries the opposite sign
    const double diag_b = anc + (((n_odd + pb) & 1) ? -gz : gz);
    const double diag_s = -anc + (((n_odd + ps) & 1) ? -gz : gz);
    // <b|V|s> uses the sy phase of s, <s|V|b> the phase of b.
    const double fbr = gx + (ps ? -y_base.real() : y_base.real());
    const double fbi = ps ? -y_base.imag() : y_base.imag();
    const double fsr = gx + (pb ? -y_base.real() : y_base.real());
    const double fsi = pb ? -y_base.imag() : y_base.imag();
    const double br = in[b].real(), bi = in[b].imag();
    const double sr = in[s].real(), si = in[s].imag();
    res[b] = {diag_b * br + fbr * sr - fbi * si, diag_b * bi + fbr * si + fbi * sr};
    res[s] = {diag_s * sr + fsr * br - fsi * bi, diag_s * si + fsr * bi + fsi * br};
  }
}

std::vector<cplx> apply_hamiltonian(const ChainModel& model, double tau,
                                    std::span<const cplx> psi) {
  std::vector<cplx> out(psi.size());
  apply_hamiltonian(model, tau, psi, out);
  return out;
}

std::vector<cplx> apply_hamiltonian(const ChainModel& model, double tau, const StateVector& psi) {
  return apply_hamiltonian(model, tau, psi.amplitudes());
}

const char* to_string(DriveKind kind) {
  switch (kind) {
    case DriveKind::LinearSymmetric: return "linear_symmetric";
    case DriveKind::LinearAsymmetric: return "linear_asymmetric";
    case DriveKind::Tangent: return "tangent";
    case DriveKind::Constant: return "constant";
  }
  return "unknown";
}

DriveKind drive_kind_from_string(std::string_view name) {
  if (name == "linear_symmetric") return DriveKind::LinearSymmetric;
  if (name == "linear_asymmetric") return DriveKind::LinearAsymmetric;
  if (name == "tangent") return DriveKind::Tangent;
  if (name == "constant") return DriveKind::Constant;
  throw Error(ErrorCode::InvalidConfig, "unknown drive kind '" + std::string(name) + "'");
}

}  // namespace ghzsim

#pragma once

// Chain Hamiltonian with an N-wise coupling and a time-dependent field on
// the ancilla (spin 1):
//
//   H(t) = w1(t) sz_1 + gx (x)sx + gy (x)sy + gz (x)sz      (hbar = 1)
//
// Basis convention: bit k of a basis index is 1 when spin k+1 is in |+>
// (sz = +1). The ancilla is bit 0.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ghzsim {

using cplx = std::complex<double>;
using BasisIndex = std::uint64_t;

inline constexpr int kMaxQubits = 62;

struct ChainSpec {
  int n_qubits = 2;
  double gamma_x = 1.0;
  double gamma_y = 0.0;
  double gamma_z = 0.0;
};

enum class DriveKind { LinearSymmetric, LinearAsymmetric, Tangent, Constant };

// Times are the dimensionless tau = sqrt(alpha) t for the linear and tangent
// kinds; for Constant, tau = t.
struct DriveProfile {
  DriveKind kind = DriveKind::LinearSymmetric;
  double alpha = 1.0;
  double tau_i = -100.0;
  double tau_f = 100.0;
  double omega0 = 0.0;         // Constant only
  double tangent_scale = 0.0;  // Tangent only
};

// Tangent argument pi/2 * tau/tau_f is clamped to |arg| <= pi/2 - this.
inline constexpr double kTangentClamp = 1e-6;

// tangent_scale whose profile has the linear ramp's slope sqrt(alpha)/2 at
// the crossing: scale * pi / (2 tau_f) = sqrt(alpha) / 2.
double matched_tangent_scale(double alpha, double tau_f);

class StateVector {
 public:
  static StateVector basis(int n_qubits, BasisIndex index);
  // Throws DimensionMismatch on wrong length, NotNormalized if the norm is
  // off by more than 1e-12.
  static StateVector from_amplitudes(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm_squared() const;

 private:
  StateVector(int n_qubits, std::vector<cplx> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

  int n_qubits_;
  std::vector<cplx> amplitudes_;
};

// Validated, immutable bundle of chain and drive.
class ChainModel {
 public:
  const ChainSpec& spec() const { return spec_; }
  const DriveProfile& drive() const { return drive_; }
  int n_qubits() const { return spec_.n_qubits; }
  std::size_t dim() const { return std::size_t{1} << spec_.n_qubits; }
  BasisIndex flip_mask() const { return (BasisIndex{1} << spec_.n_qubits) - 1; }

  // Energy unit that makes tau the natural time variable: sqrt(alpha) for
  // the linear and tangent kinds, 1 for Constant.
  double energy_scale() const;

 private:
  friend ChainModel build_chain(const ChainSpec&, const DriveProfile&);
  ChainModel(ChainSpec spec, DriveProfile drive) : spec_(spec), drive_(drive) {}

  ChainSpec spec_;
  DriveProfile drive_;
};

void validate_spec(const ChainSpec& spec);
void validate_drive(const DriveProfile& drive);

ChainModel build_chain(const ChainSpec& spec, const DriveProfile& drive);

// Detuning hbar*w1 at tau. Throws OutOfWindow outside [tau_i, tau_f].
double drive_value(const DriveProfile& drive, double tau);

namespace detail {
// No window check; the integrators evaluate stage times that may sit one
// ulp past the window edge.
double drive_value_unchecked(const DriveProfile& drive, double tau);
}  // namespace detail

// <b ^ mask| (x)sy |b>, a power of i.
cplx sigma_y_string_element(BasisIndex b, int n_qubits);
// Eigenvalue of (x)sz on |b>.
double sigma_z_string_eigenvalue(BasisIndex b, int n_qubits);
// Eigenvalue of sz_1 on |b>.
inline double ancilla_sign(BasisIndex b) { return (b & 1u) ? 1.0 : -1.0; }

// <row|H(tau)|col> from the per-term rules; nonzero only for row == col or
// row == col ^ mask.
cplx matrix_element(const ChainModel& model, double tau, BasisIndex row, BasisIndex col);

// out = H(tau) psi, matrix-free. Throws DimensionMismatch on length errors.
void apply_hamiltonian(const ChainModel& model, double tau, std::span<const cplx> psi,
                       std::span<cplx> out);
std::vector<cplx> apply_hamiltonian(const ChainModel& model, double tau,
                                    std::span<const cplx> psi);
std::vector<cplx> apply_hamiltonian(const ChainModel& model, double tau, const StateVector& psi);

const char* to_string(DriveKind kind);
DriveKind drive_kind_from_string(std::string_view name);

}  // namespace ghzsim

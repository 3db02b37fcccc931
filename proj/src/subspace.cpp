#include "ghzsim/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ghzsim/errors.hpp"

namespace ghzsim {

namespace {

BasisIndex mask_for(int n_qubits) { return (BasisIndex{1} << n_qubits) - 1; }

void check_n(int n_qubits) {
  if (n_qubits < 2 || n_qubits > kMaxQubits)
    throw Error(ErrorCode::InvalidSpec, "n_qubits must be in [2, " + std::to_string(kMaxQubits) +
                                            "], got " + std::to_string(n_qubits));
}

double zz_eigenvalue(BasisIndex b, int i, int j) {
  const bool same = ((b >> i) & 1u) == ((b >> j) & 1u);
  return same ? 1.0 : -1.0;
}

}  // namespace

SubspacePair pair_of(BasisIndex basis_index, int n_qubits) {
  check_n(n_qubits);
  const BasisIndex mask = mask_for(n_qubits);
  if (basis_index > mask)
    throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(basis_index) +
                                                " outside 2^" + std::to_string(n_qubits));
  const BasisIndex other = basis_index ^ mask;
  return {std::min(basis_index, other), std::max(basis_index, other), n_qubits};
}

std::vector<SubspacePair> enumerate_subspaces(int n_qubits) {
  check_n(n_qubits);
  // Representatives are exactly the indices with the top bit clear.
  const BasisIndex mask = mask_for(n_qubits);
  const BasisIndex count = BasisIndex{1} << (n_qubits - 1);
  std::vector<SubspacePair> pairs;
  pairs.reserve(count);
  for (BasisIndex b = 0; b < count; ++b) pairs.push_back({b, b ^ mask, n_qubits});
  return pairs;
}

SubspacePair ghz_pair(int n_qubits) { return pair_of(0, n_qubits); }

TwoLevelProblem effective_two_level(const ChainModel& model, const SubspacePair& pair) {
  if (pair.n_qubits != model.n_qubits())
    throw Error(ErrorCode::DimensionMismatch,
                "pair has N = " + std::to_string(pair.n_qubits) + ", model has N = " +
                    std::to_string(model.n_qubits()));
  const BasisIndex rep = pair.representative;
  const BasisIndex part = pair.partner;

  TwoLevelProblem problem;
  problem.drive = model.drive();
  problem.energy_scale = model.energy_scale();
  problem.detuning_sign = ancilla_sign(rep);

  // Offsets are the diagonal elements with the ancilla field switched off.
  DriveProfile field_off;
  field_off.kind = DriveKind::Constant;
  field_off.omega0 = 0.0;
  field_off.tau_i = 0.0;
  field_off.tau_f = 1.0;
  const ChainModel static_part = build_chain(model.spec(), field_off);
  problem.offset_rep = matrix_element(static_part, 0.0, rep, rep).real();
  problem.offset_partner = matrix_element(static_part, 0.0, part, part).real();
  problem.coupling = matrix_element(static_part, 0.0, part, rep);
  return problem;
}

ConstantsOfMotionReport check_constants_of_motion(const ChainModel& model, int n_samples,
                                                  std::uint64_t seed) {
  HamiltonianAction action = [&model](double tau, std::span<const cplx> psi, std::span<cplx> out) {
    apply_hamiltonian(model, tau, psi, out);
  };
  return check_constants_of_motion(model, action, n_samples, seed);
}

ConstantsOfMotionReport check_constants_of_motion(const ChainModel& model,
                                                  const HamiltonianAction& action, int n_samples,
                                                  std::uint64_t seed) {
  if (n_samples < 1) throw Error(ErrorCode::InvalidConfig, "n_samples must be >= 1");
  const int n = model.n_qubits();
  const std::size_t dim = model.dim();
  const auto& drive = model.drive();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> window(drive.tau_i, drive.tau_f);

  std::vector<cplx> v(dim), zz_v(dim), h_v(dim), h_zz_v(dim);
  ConstantsOfMotionReport report;
  for (int s = 0; s < n_samples; ++s) {
    const double tau = window(rng);
    for (auto& a : v) a = {unit(rng), unit(rng)};
    action(tau, v, h_v);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (BasisIndex b = 0; b < dim; ++b) zz_v[b] = zz_eigenvalue(b, i, j) * v[b];
        action(tau, zz_v, h_zz_v);
        double residual = 0.0;
        for (BasisIndex b = 0; b < dim; ++b)
          residual = std::max(residual, std::abs(zz_eigenvalue(b, i, j) * h_v[b] - h_zz_v[b]));
        ++report.checks;
        if (residual >= report.max_residual) {
          report.max_residual = residual;
          report.worst_i = i;
          report.worst_j = j;
          report.worst_tau = tau;
        }
      }
    }
  }
  report.passed = report.max_residual <= 1e-12;
  return report;
}

}  // namespace ghzsim

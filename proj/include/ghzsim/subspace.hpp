#pragma once

// The products sz_i sz_j commute with H(t) for every t, so the basis splits
// into 2^(N-1) invariant pairs {|b>, |b ^ mask>}. Inside each pair the chain
// behaves as one driven two-level system.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ghzsim/model.hpp"

namespace ghzsim {

struct SubspacePair {
  BasisIndex representative = 0;  // smaller index of the pair
  BasisIndex partner = 0;         // representative ^ mask
  int n_qubits = 0;

  friend bool operator==(const SubspacePair&, const SubspacePair&) = default;
};

enum class PairMember { Representative, Partner };

// 2x2 Hamiltonian in the (representative, partner) basis:
//
//   [ s w1(t) + d_rep      conj(c)          ]
//   [ c                   -s w1(t) + d_part ]
//
// with s = detuning_sign and c = coupling.
struct TwoLevelProblem {
  double detuning_sign = -1.0;
  cplx coupling{0.0, 0.0};
  double offset_rep = 0.0;
  double offset_partner = 0.0;
  DriveProfile drive;
  double energy_scale = 1.0;
};

SubspacePair pair_of(BasisIndex basis_index, int n_qubits);

// Canonical pairs in increasing representative order.
std::vector<SubspacePair> enumerate_subspaces(int n_qubits);

// Reads the coupling and offsets off exact matrix elements of the full
// Hamiltonian. Throws DimensionMismatch if the pair's N differs from the model.
TwoLevelProblem effective_two_level(const ChainModel& model, const SubspacePair& pair);

// The pair containing |1...1> and |0...0>.
SubspacePair ghz_pair(int n_qubits);

struct ConstantsOfMotionReport {
  double max_residual = 0.0;
  int worst_i = -1;
  int worst_j = -1;
  double worst_tau = 0.0;
  std::size_t checks = 0;
  bool passed = false;
};

// out = H(tau) psi for some Hamiltonian on 2^N amplitudes.
using HamiltonianAction =
    std::function<void(double tau, std::span<const cplx> psi, std::span<cplx> out)>;

// Max over sampled tau, random vectors v and spin pairs i < j of
// || [sz_i sz_j, H(tau)] v ||_inf. Passes when the residual is <= 1e-12.
ConstantsOfMotionReport check_constants_of_motion(const ChainModel& model, int n_samples,
                                                  std::uint64_t seed = 1);

// Same check for an arbitrary action on the model's Hilbert space.
ConstantsOfMotionReport check_constants_of_motion(const ChainModel& model,
                                                  const HamiltonianAction& action, int n_samples,
                                                  std::uint64_t seed = 1);

}  // namespace ghzsim

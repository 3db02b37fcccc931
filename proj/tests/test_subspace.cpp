#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "ghzsim/errors.hpp"
#include "ghzsim/subspace.hpp"

using namespace ghzsim;

namespace {

DriveProfile symmetric(double tau_f = 10.0) {
  DriveProfile d;
  d.tau_i = -tau_f;
  d.tau_f = tau_f;
  return d;
}

DriveProfile constant_zero() {
  DriveProfile d;
  d.kind = DriveKind::Constant;
  d.tau_i = 0.0;
  d.tau_f = 1.0;
  return d;
}

}  // namespace

TEST_CASE("pair_of examples") {
  CHECK(pair_of(0b001, 3) == SubspacePair{0b001, 0b110, 3});
  CHECK(pair_of(0b11, 2) == SubspacePair{0b00, 0b11, 2});
  CHECK(pair_of(0b1010, 4) == SubspacePair{0b0101, 0b1010, 4});
  CHECK(pair_of(0b0101, 4) == SubspacePair{0b0101, 0b1010, 4});

  CHECK_THROWS_AS(pair_of(8, 3), Error);
  try {
    pair_of(8, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("enumerate_subspaces examples") {
  const auto two = enumerate_subspaces(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == SubspacePair{0b00, 0b11, 2});
  CHECK(two[1] == SubspacePair{0b01, 0b10, 2});
  CHECK(enumerate_subspaces(3).size() == 4);
  CHECK(enumerate_subspaces(10).size() == 512);
  CHECK(ghz_pair(5) == SubspacePair{0, 31, 5});
}

TEST_CASE("partition property for 2 <= N <= 14") {
  for (int n = 2; n <= 14; ++n) {
    const auto pairs = enumerate_subspaces(n);
    const std::size_t dim = std::size_t{1} << n;
    CHECK(pairs.size() == dim / 2);
    std::vector<int> seen(dim, 0);
    bool canonical = true;
    for (const auto& p : pairs) {
      canonical = canonical && p.representative < p.partner &&
                  p.partner == (p.representative ^ (dim - 1)) && p.n_qubits == n &&
                  pair_of(p.partner, n) == p;
      ++seen[p.representative];
      ++seen[p.partner];
    }
    CHECK(canonical);
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("effective_two_level examples") {
  SUBCASE("N=3, gamma_x=1: real coupling, representative |---> has sign -1") {
    const auto model = build_chain({3, 1.0}, symmetric());
    const auto p = effective_two_level(model, ghz_pair(3));
    CHECK(p.coupling == cplx(1.0, 0.0));
    CHECK(p.detuning_sign == -1.0);
    CHECK(p.offset_rep == 0.0);
    CHECK(p.offset_partner == 0.0);
    CHECK(p.energy_scale == 1.0);
  }
  SUBCASE("N=3, gamma_y=1: phase from the dense matrix") {
    const auto model = build_chain({3, 0.0, 1.0, 0.0}, symmetric());
    const auto p = effective_two_level(model, ghz_pair(3));
    const oracle::Mat h = oracle::dense_hamiltonian(model, 0.0);
    CHECK(std::abs(p.coupling) == doctest::Approx(1.0));
    CHECK(std::abs(p.coupling - h(7, 0)) <= 1e-15);
    CHECK(p.coupling == cplx(0.0, 1.0));  // frozen numpy value of <+++|YYY|--->
  }
  SUBCASE("N=4, gamma_z only: equal offsets") {
    const auto model = build_chain({4, 0.0, 0.0, 1.0}, symmetric());
    for (const auto& pair : enumerate_subspaces(4)) {
      const auto p = effective_two_level(model, pair);
      CHECK(p.offset_rep == p.offset_partner);
      CHECK(std::abs(p.offset_rep) == 1.0);
    }
  }
  SUBCASE("odd N, gamma_z only: opposite offsets") {
    const auto model = build_chain({5, 0.0, 0.0, 0.7}, symmetric());
    for (const auto& pair : enumerate_subspaces(5)) {
      const auto p = effective_two_level(model, pair);
      CHECK(p.offset_rep == -p.offset_partner);
      CHECK(std::abs(p.offset_rep) == doctest::Approx(0.7));
    }
  }
  SUBCASE("detuning sign follows bit 0 of the representative") {
    const auto model = build_chain({3, 1.0}, symmetric());
    CHECK(effective_two_level(model, pair_of(0b001, 3)).detuning_sign == 1.0);
    CHECK(effective_two_level(model, pair_of(0b010, 3)).detuning_sign == -1.0);
  }
  SUBCASE("dimension mismatch") {
    const auto model = build_chain({3, 1.0}, symmetric());
    CHECK_THROWS_AS(effective_two_level(model, ghz_pair(4)), Error);
  }
}

TEST_CASE("effective problem reproduces the dense 2x2 restriction") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 2; n <= 7; ++n) {
    const auto model = build_chain({n, u(rng), u(rng), u(rng)}, symmetric());
    const double tau = u(rng) * 4.0;
    const oracle::Mat h = oracle::dense_hamiltonian(model, tau);
    const double w1 = drive_value(model.drive(), tau);
    for (const auto& pair : enumerate_subspaces(n)) {
      const auto p = effective_two_level(model, pair);
      const auto r = static_cast<Eigen::Index>(pair.representative);
      const auto q = static_cast<Eigen::Index>(pair.partner);
      CHECK(std::abs(h(r, r) - (p.detuning_sign * w1 + p.offset_rep)) <= 1e-13);
      CHECK(std::abs(h(q, q) - (-p.detuning_sign * w1 + p.offset_partner)) <= 1e-13);
      CHECK(std::abs(h(q, r) - p.coupling) <= 1e-14);
      CHECK(std::abs(h(r, q) - std::conj(p.coupling)) <= 1e-14);
    }
  }
}

TEST_CASE("coupling magnitude: sqrt(gx^2 + gy^2) for odd N, |gx +- gy| for even N") {
  // The N-fold sigma_y element on a flip pair is (-1)^ones * i^(-N): imaginary
  // for odd N, real for even N.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_odd = 0.0;
  double worst_even = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const double gx = u(rng), gy = u(rng);
      const auto model = build_chain({n, gx, gy, u(rng)}, symmetric());
      for (const auto& pair : enumerate_subspaces(n)) {
        const double mag = std::abs(effective_two_level(model, pair).coupling);
        if (n % 2 == 1) {
          worst_odd = std::max(worst_odd, std::abs(mag - std::hypot(gx, gy)));
        } else {
          worst_even = std::max(worst_even, std::min(std::abs(mag - std::abs(gx + gy)),
                                                     std::abs(mag - std::abs(gx - gy))));
        }
      }
    }
  }
  CHECK(worst_odd <= 1e-12);
  CHECK(worst_even <= 1e-12);
}

TEST_CASE("even N: equal gamma_x and gamma_y cancel on the GHZ pair of N=2") {
  const auto model = build_chain({2, 1.0, 1.0, 0.0}, symmetric());
  CHECK(std::abs(effective_two_level(model, ghz_pair(2)).coupling) <= 1e-15);
  CHECK(std::abs(effective_two_level(model, pair_of(0b01, 2)).coupling) == doctest::Approx(2.0));
}

TEST_CASE("constants of motion") {
  SUBCASE("N=4 with every coupling nonzero") {
    const auto model = build_chain({4, 0.9, -0.6, 1.3}, symmetric(30.0));
    const auto report = check_constants_of_motion(model, 20, 3);
    CHECK(report.passed);
    CHECK(report.max_residual <= 1e-12);
    CHECK(report.checks == 20u * 6u);
  }
  SUBCASE("N=2, gamma_x=1: zero up to rounding") {
    const auto model = build_chain({2, 1.0}, symmetric());
    const auto report = check_constants_of_motion(model, 10);
    CHECK(report.passed);
    CHECK(report.max_residual <= 1e-15);
  }
  SUBCASE("negative control: an injected sigma_x on spin 2 breaks the symmetry") {
    const auto model = build_chain({4, 0.9, 0.2, 0.3}, symmetric());
    HamiltonianAction broken = [&model](double tau, std::span<const cplx> psi,
                                        std::span<cplx> out) {
      apply_hamiltonian(model, tau, psi, out);
      for (BasisIndex b = 0; b < psi.size(); ++b) out[b] += 0.05 * psi[b ^ 0b10];
    };
    const auto report = check_constants_of_motion(model, broken, 5);
    CHECK_FALSE(report.passed);
    CHECK(report.max_residual > 1e-3);
    // only pairs containing spin 2 (index 1) are violated
    CHECK((report.worst_i == 1 || report.worst_j == 1));
  }
  SUBCASE("a sigma_z on spin 2 commutes with every sz_i sz_j and cannot serve as the control") {
    const auto model = build_chain({4, 0.9, 0.2, 0.3}, symmetric());
    HamiltonianAction extra_z = [&model](double tau, std::span<const cplx> psi,
                                         std::span<cplx> out) {
      apply_hamiltonian(model, tau, psi, out);
      for (BasisIndex b = 0; b < psi.size(); ++b) out[b] += ((b & 0b10) ? 0.05 : -0.05) * psi[b];
    };
    CHECK(check_constants_of_motion(model, extra_z, 5).passed);
  }
  SUBCASE("constant drive") {
    const auto model = build_chain({3, 1.0, 1.0, 1.0}, constant_zero());
    CHECK(check_constants_of_motion(model, 4).passed);
  }
}

#pragma once

// Fehlberg 7(8) explicit Runge-Kutta, 8th-order solution only. The state
// update x += dx is Kahan-compensated: runs take up to ~10^6 steps, and an
// uncompensated add leaves ~1e-16 per step in the amplitudes.

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace ghzsim::detail {

class Rk78Stepper {
 public:
  using cplx = std::complex<double>;
  using State = std::vector<cplx>;
  static constexpr int kStages = 13;

  explicit Rk78Stepper(std::size_t dim) : stage_(dim), carry_(dim) {
    for (auto& k : k_) k.resize(dim);
  }

  // Advances x from t to t + h. rhs(x, dxdt, t) writes the derivative.
  template <class Rhs>
  void step(Rhs&& rhs, State& x, double t, double h) {
    rhs(x, k_[0], t);
    stages(rhs, x, t, h, std::make_integer_sequence<int, kStages - 1>{});
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      const cplx inc = h * combine<kB>(i, std::make_integer_sequence<int, kStages>{});
      x[i] = compensated_add(x[i], inc, carry_[i]);
    }
  }

  // Drops the accumulated compensation (start of a new trajectory).
  void reset() {
    for (auto& c : carry_) c = 0.0;
  }

 private:
  static double kahan(double sum, double add, double& carry) {
    const double y = add - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    return t;
  }

  static cplx compensated_add(cplx sum, cplx add, cplx& carry) {
    double cr = carry.real();
    double ci = carry.imag();
    const double re = kahan(sum.real(), add.real(), cr);
    const double im = kahan(sum.imag(), add.imag(), ci);
    carry = {cr, ci};
    return {re, im};
  }

  template <class Rhs, int... S>
  void stages(Rhs& rhs, const State& x, double t, double h, std::integer_sequence<int, S...>) {
    (stage<S + 1>(rhs, x, t, h), ...);
  }

  template <int S, class Rhs>
  void stage(Rhs& rhs, const State& x, double t, double h) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i)
      stage_[i] = x[i] + h * combine<kA[S]>(i, std::make_integer_sequence<int, S>{});
    rhs(stage_, k_[S], t + kC[S] * h);
  }

  // sum_j w[j] k_j[i], unrolled with zero weights dropped at compile time.
  template <const auto& W, int... J>
  cplx combine(std::size_t i, std::integer_sequence<int, J...>) const {
    cplx acc{};
    ((W[J] != 0.0 ? (acc += W[J] * k_[J][i], 0) : 0), ...);
    return acc;
  }

  static constexpr std::array<double, kStages> kC = {
      0.0, 2.0 / 27, 1.0 / 9, 1.0 / 6, 5.0 / 12, 1.0 / 2, 5.0 / 6,
      1.0 / 6, 2.0 / 3, 1.0 / 3, 1.0, 0.0, 1.0};

  static constexpr std::array<double, kStages> kB = {
      0.0, 0.0, 0.0, 0.0, 0.0, 34.0 / 105, 9.0 / 35,
      9.0 / 35, 9.0 / 280, 9.0 / 280, 0.0, 41.0 / 840, 41.0 / 840};

  static constexpr std::array<std::array<double, kStages>, kStages> kA = {{
      {},
      {2.0 / 27},
      {1.0 / 36, 1.0 / 12},
      {1.0 / 24, 0.0, 1.0 / 8},
      {5.0 / 12, 0.0, -25.0 / 16, 25.0 / 16},
      {1.0 / 20, 0.0, 0.0, 1.0 / 4, 1.0 / 5},
      {-25.0 / 108, 0.0, 0.0, 125.0 / 108, -65.0 / 27, 125.0 / 54},
      {31.0 / 300, 0.0, 0.0, 0.0, 61.0 / 225, -2.0 / 9, 13.0 / 900},
      {2.0, 0.0, 0.0, -53.0 / 6, 704.0 / 45, -107.0 / 9, 67.0 / 90, 3.0},
      {-91.0 / 108, 0.0, 0.0, 23.0 / 108, -976.0 / 135, 311.0 / 54, -19.0 / 60, 17.0 / 6,
       -1.0 / 12},
      {2383.0 / 4100, 0.0, 0.0, -341.0 / 164, 4496.0 / 1025, -301.0 / 82, 2133.0 / 4100,
       45.0 / 82, 45.0 / 164, 18.0 / 41},
      {3.0 / 205, 0.0, 0.0, 0.0, 0.0, -6.0 / 41, -3.0 / 205, -3.0 / 41, 3.0 / 41, 6.0 / 41,
       0.0},
      {-1777.0 / 4100, 0.0, 0.0, -341.0 / 164, 4496.0 / 1025, -289.0 / 82, 2193.0 / 4100,
       51.0 / 82, 33.0 / 164, 12.0 / 41, 0.0, 1.0},
  }};

  std::array<State, kStages> k_;
  State stage_;
  State carry_;
};

}  // namespace ghzsim::detail

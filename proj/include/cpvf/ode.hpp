#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace cpvf {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-13;
  double h_init = 1e-3;
  double h_max = 1.0;
  std::size_t max_steps = 200000;
};

enum class StepVerdict { Continue, Stop };

enum class IntegrationStatus { Stopped, BudgetExhausted, StepUnderflow };

// Dormand-Prince 5(4). The observer sees (previous, current, step) after each accepted step.
template <std::size_t N, class Rhs, class Observer>
IntegrationStatus dormand_prince(const Rhs& f, State<N> y, const StepControl& ctl, Observer&& observe) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;

  auto axpy = [](const State<N>& base, std::initializer_list<std::pair<double, const State<N>*>> terms, double h) {
    State<N> out = base;
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    return out;
  };

  double h = ctl.h_init;
  State<N> k1 = f(y);
  for (std::size_t step = 0; step < ctl.max_steps;) {
    h = std::min(h, ctl.h_max);
    State<N> k2 = f(axpy(y, {{a21, &k1}}, h));
    State<N> k3 = f(axpy(y, {{a31, &k1}, {a32, &k2}}, h));
    State<N> k4 = f(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    State<N> k5 = f(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    State<N> k6 = f(axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
    State<N> yn = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
    State<N> k7 = f(yn);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      ++step;
      State<N> prev = y;
      y = yn;
      k1 = k7;
      if (observe(prev, y, h) == StepVerdict::Stop) return IntegrationStatus::Stopped;
      double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      if (h < 1e-300) return IntegrationStatus::StepUnderflow;
    }
  }
  return IntegrationStatus::BudgetExhausted;
}

}  // namespace cpvf

namespace cpvf {

// Classic fourth-order Runge-Kutta step.
template <std::size_t N, class Rhs>
State<N> rk4_step(const Rhs& f, const State<N>& y, double h) {
  auto add = [](const State<N>& a, const State<N>& k, double c) {
    State<N> o = a;
    for (std::size_t i = 0; i < N; ++i) o[i] += c * k[i];
    return o;
  };
  State<N> k1 = f(y), k2 = f(add(y, k1, 0.5 * h)), k3 = f(add(y, k2, 0.5 * h)), k4 = f(add(y, k3, h));
  State<N> o = y;
  for (std::size_t i = 0; i < N; ++i) o[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return o;
}

}  // namespace cpvf

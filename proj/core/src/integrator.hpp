#pragma once

#include <cstddef>

namespace macrofield::detail {

// State is any random-access container of doubles with size().
// f(t, y, dydt) writes the derivative into dydt.
template <class State, class F>
void rk4_step(F&& f, double t, State& y, double h, State& k1, State& k2, State& k3, State& k4,
              State& tmp) {
    const std::size_t n = y.size();
    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    f(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

template <class State, class F>
void euler_step(F&& f, double t, State& y, double h, State& k1) {
    f(t, y, k1);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * k1[i];
}

} // namespace macrofield::detail

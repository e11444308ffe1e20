#pragma once

#include <complex>

namespace sqrtw {

/// Truncated stochastic differential c0 + c_abs*|dW| + c_dt*dt with the Ito
/// multiplication table |dW|^2 = dt, |dW|*dt = 0, dt^2 = 0.
///
/// Products are reduced on the fly, so squaring an increment built from the
/// square-root bracket yields the exact Ito-level result. `evaluate` maps a
/// differential back to a number for one concrete step.
struct ItoDifferential {
    using Complex = std::complex<double>;

    Complex c0{};
    Complex c_abs{};
    Complex c_dt{};

    static constexpr ItoDifferential constant(Complex c) { return {c, {}, {}}; }
    static constexpr ItoDifferential abs_dw() { return {{}, 1.0, {}}; }
    static constexpr ItoDifferential dt() { return {{}, {}, 1.0}; }

    Complex evaluate(double abs_dw, double dt) const { return c0 + c_abs * abs_dw + c_dt * dt; }

    friend ItoDifferential operator+(const ItoDifferential& a, const ItoDifferential& b) {
        return {a.c0 + b.c0, a.c_abs + b.c_abs, a.c_dt + b.c_dt};
    }
    friend ItoDifferential operator-(const ItoDifferential& a, const ItoDifferential& b) {
        return {a.c0 - b.c0, a.c_abs - b.c_abs, a.c_dt - b.c_dt};
    }
    friend ItoDifferential operator*(const ItoDifferential& a, const ItoDifferential& b) {
        return {a.c0 * b.c0, a.c0 * b.c_abs + a.c_abs * b.c0, a.c0 * b.c_dt + a.c_dt * b.c0 + a.c_abs * b.c_abs};
    }
    friend ItoDifferential operator*(Complex s, const ItoDifferential& a) { return {s * a.c0, s * a.c_abs, s * a.c_dt}; }
    friend ItoDifferential operator*(const ItoDifferential& a, Complex s) { return s * a; }
    friend bool operator==(const ItoDifferential&, const ItoDifferential&) = default;
};

}  // namespace sqrtw

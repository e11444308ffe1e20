#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

#include "sqrtw/ito.hpp"

namespace sqrtw {

/// Dense 2x2 matrix over a ring T (std::complex<double> or ItoDifferential).
template <typename T>
struct Matrix2 {
    std::array<T, 4> e{};  // row-major: e[0]=(0,0) e[1]=(0,1) e[2]=(1,0) e[3]=(1,1)

    T& operator()(int r, int c) { return e[static_cast<std::size_t>(2 * r + c)]; }
    const T& operator()(int r, int c) const { return e[static_cast<std::size_t>(2 * r + c)]; }

    static Matrix2 zero() { return {}; }
    static Matrix2 identity() {
        Matrix2 m;
        m.e[0] = T{std::complex<double>{1.0}};
        m.e[3] = T{std::complex<double>{1.0}};
        return m;
    }

    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        return {{a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]}};
    }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
        return {{a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]}};
    }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
                 a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
    }
    friend Matrix2 operator*(const T& s, const Matrix2& a) { return {{s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]}}; }
    friend Matrix2 operator*(const Matrix2& a, const T& s) { return {{a.e[0] * s, a.e[1] * s, a.e[2] * s, a.e[3] * s}}; }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

using Matrix2C = Matrix2<std::complex<double>>;
using Matrix2Ito = Matrix2<ItoDifferential>;

inline double max_norm(const Matrix2C& m) {
    double r = 0.0;
    for (const auto& z : m.e) r = std::max(r, std::abs(z));
    return r;
}

/// Lifts a numeric matrix into the Ito ring (constant entries).
Matrix2Ito lift(const Matrix2C& m);

/// Evaluates every entry at one concrete step.
Matrix2C evaluate(const Matrix2Ito& m, double abs_dw, double dt);

/// Selects sigma_1, sigma_2 or sigma_3.
struct PauliIndex {
    int index = 1;
};

/// Standard Pauli matrix. Throws std::invalid_argument for index outside {1,2,3}.
Matrix2C pauli(PauliIndex p);

template <typename T>
Matrix2<T> anticommutator(const Matrix2<T>& a, const Matrix2<T>& b) {
    return a * b + b * a;
}

/// Two matrices that anticommute and square to the identity. The embedding
/// below only relies on these two relations, so a Dirac-matrix pair can be
/// supplied once a 4x4 carrier exists.
template <typename M>
struct AnticommutingPair {
    M first;
    M second;
};

/// Pauli pair (sigma_i, sigma_k). Throws std::invalid_argument if i == k or
/// either index is out of range.
AnticommutingPair<Matrix2C> pauli_pair(PauliIndex i, PauliIndex k);

/// Repo-wide default pair (sigma_1, sigma_2).
inline constexpr PauliIndex kDefaultPauliFirst{1};
inline constexpr PauliIndex kDefaultPauliSecond{2};

/// gamma_i * scalar_part * phi + i * gamma_k * mu0 * phi.
///
/// With scalar_part the square-root bracket, the square of the result is
/// dW times the identity: the cross terms cancel by anticommutation and the
/// mu0^2 sgn(dW) shift of the scalar square is removed by (i mu0 phi)^2.
template <typename T, typename M>
auto embed_sqrt_increment(const T& scalar_part, double mu0, const AnticommutingPair<M>& gammas,
                          std::complex<double> phi) {
    const std::complex<double> shift = std::complex<double>{0.0, 1.0} * mu0 * phi;
    if constexpr (std::is_same_v<T, std::complex<double>>) {
        return gammas.first * (scalar_part * phi) + gammas.second * shift;
    } else {
        return lift(gammas.first) * (scalar_part * phi) + lift(gammas.second) * T::constant(shift);
    }
}

/// Pauli-index form of the embedding. Throws std::invalid_argument when
/// i_idx == k_idx, phi is not 1 or i, or mu0 == 0.
Matrix2C embed_sqrt_increment(std::complex<double> scalar_part, double mu0, PauliIndex i_idx, PauliIndex k_idx,
                              std::complex<double> phi);
Matrix2Ito embed_sqrt_increment(const ItoDifferential& scalar_part, double mu0, PauliIndex i_idx,
                                PauliIndex k_idx, std::complex<double> phi);

}  // namespace sqrtw

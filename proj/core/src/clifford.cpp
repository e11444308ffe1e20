#include "sqrtw/clifford.hpp"

#include <stdexcept>
#include <string>

namespace sqrtw {

namespace {

using C = std::complex<double>;

void check_index(PauliIndex p) {
    if (p.index < 1 || p.index > 3) {
        throw std::invalid_argument("Pauli index must be 1, 2 or 3, got " + std::to_string(p.index));
    }
}

void check_embedding_args(double mu0, PauliIndex i_idx, PauliIndex k_idx, C phi) {
    check_index(i_idx);
    check_index(k_idx);
    if (i_idx.index == k_idx.index) {
        throw std::invalid_argument("embedding needs two distinct Pauli matrices (i_idx == k_idx leaves cross terms)");
    }
    if (mu0 == 0.0) {
        throw std::invalid_argument("mu0 must be non-zero");
    }
    if (phi != C{1.0, 0.0} && phi != C{0.0, 1.0}) {
        throw std::invalid_argument("phi must be exactly 1 or i");
    }
}

}  // namespace

Matrix2Ito lift(const Matrix2C& m) {
    Matrix2Ito out;
    for (std::size_t j = 0; j < 4; ++j) out.e[j] = ItoDifferential::constant(m.e[j]);
    return out;
}

Matrix2C evaluate(const Matrix2Ito& m, double abs_dw, double dt) {
    Matrix2C out;
    for (std::size_t j = 0; j < 4; ++j) out.e[j] = m.e[j].evaluate(abs_dw, dt);
    return out;
}

Matrix2C pauli(PauliIndex p) {
    check_index(p);
    switch (p.index) {
        case 1: return {{C{0, 0}, C{1, 0}, C{1, 0}, C{0, 0}}};
        case 2: return {{C{0, 0}, C{0, -1}, C{0, 1}, C{0, 0}}};
        default: return {{C{1, 0}, C{0, 0}, C{0, 0}, C{-1, 0}}};
    }
}

AnticommutingPair<Matrix2C> pauli_pair(PauliIndex i, PauliIndex k) {
    check_index(i);
    check_index(k);
    if (i.index == k.index) {
        throw std::invalid_argument("Pauli pair needs i != k");
    }
    return {pauli(i), pauli(k)};
}

Matrix2C embed_sqrt_increment(C scalar_part, double mu0, PauliIndex i_idx, PauliIndex k_idx, C phi) {
    check_embedding_args(mu0, i_idx, k_idx, phi);
    return embed_sqrt_increment(scalar_part, mu0, pauli_pair(i_idx, k_idx), phi);
}

Matrix2Ito embed_sqrt_increment(const ItoDifferential& scalar_part, double mu0, PauliIndex i_idx, PauliIndex k_idx,
                                C phi) {
    check_embedding_args(mu0, i_idx, k_idx, phi);
    return embed_sqrt_increment(scalar_part, mu0, pauli_pair(i_idx, k_idx), phi);
}

}  // namespace sqrtw

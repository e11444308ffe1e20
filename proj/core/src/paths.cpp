#include "sqrtw/paths.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqrtw {

TimeGrid::TimeGrid(double dt, std::size_t n_steps, double t0) : dt_(dt), n_steps_(n_steps), t0_(t0) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be finite and > 0, got " + std::to_string(dt));
    }
    if (n_steps == 0) {
        throw std::invalid_argument("n_steps must be >= 1");
    }
    if (!std::isfinite(t0) || !std::isfinite(horizon())) {
        throw std::invalid_argument("t0 and the horizon n_steps*dt must be finite");
    }
}

std::vector<double> WienerIncrements::cumulative() const {
    std::vector<double> w(dw.size() + 1, 0.0);
    for (std::size_t k = 0; k < dw.size(); ++k) {
        w[k + 1] = w[k] + dw[k];
    }
    return w;
}

void fill_wiener(const TimeGrid& grid, RandomStream& rng, std::span<double> dw) {
    if (dw.size() != grid.n_steps()) {
        throw std::invalid_argument("fill_wiener: buffer length does not match n_steps");
    }
    const double scale = std::sqrt(grid.dt());
    for (double& x : dw) {
        x = scale * rng.normal();
    }
}

WienerIncrements sample_wiener(const TimeGrid& grid, RandomStream& rng) {
    WienerIncrements w{grid, std::vector<double>(grid.n_steps())};
    fill_wiener(grid, rng, w.dw);
    return w;
}

SignSequence sign_of(const WienerIncrements& w) {
    SignSequence out;
    out.s.reserve(w.dw.size());
    for (double x : w.dw) {
        out.s.push_back(sign_of(x));
    }
    return out;
}

std::vector<double> abs_of(const WienerIncrements& w) {
    std::vector<double> out;
    out.reserve(w.dw.size());
    for (double x : w.dw) {
        out.push_back(std::fabs(x));
    }
    return out;
}

PhiSequence phi_from_bernoulli(const SignSequence& b) {
    PhiSequence out;
    out.phi.reserve(b.s.size());
    for (int s : b.s) {
        if (s != 1 && s != -1) {
            throw std::invalid_argument("phi_from_bernoulli: sign sequence must hold only +1/-1");
        }
        const double bd = s;
        out.phi.emplace_back((1.0 + bd) / 2.0, (1.0 - bd) / 2.0);
    }
    return out;
}

PhiSequence phi_half(const WienerIncrements& w) {
    const Complex a{0.5, -0.5};  // (1 - i)/2
    const Complex c{0.5, 0.5};   // (1 + i)/2
    PhiSequence out;
    out.phi.reserve(w.dw.size());
    for (double x : w.dw) {
        out.phi.push_back(a * static_cast<double>(sign_of(x)) + c);
    }
    return out;
}

}  // namespace sqrtw

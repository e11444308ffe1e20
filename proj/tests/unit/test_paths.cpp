#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sqrtw/paths.hpp"

using namespace sqrtw;

namespace {

WienerIncrements make(std::vector<double> dw) { return {TimeGrid(0.001, dw.size()), std::move(dw)}; }

WienerIncrements seeded(std::uint64_t seed, std::uint64_t path, std::size_t n = 1000, double dt = 0.001) {
    auto rng = make_rng({seed, path});
    return sample_wiener(TimeGrid(dt, n), rng);
}

std::string message_of(auto&& f) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("TimeGrid validation names the offending field") {
    CHECK(message_of([] { TimeGrid(0.0, 10); }).find("dt") != std::string::npos);
    CHECK(message_of([] { TimeGrid(-1e-3, 10); }).find("dt") != std::string::npos);
    CHECK(message_of([] { TimeGrid(std::nan(""), 10); }).find("dt") != std::string::npos);
    CHECK(message_of([] { TimeGrid(1e-3, 0); }).find("n_steps") != std::string::npos);

    const TimeGrid g(0.001, 1000);
    CHECK(g.horizon() == doctest::Approx(1.0));
    CHECK(g.time(0) == 0.0);
    CHECK(g.t0() == 0.0);
}

TEST_CASE("sign_of with the sgn(0) = +1 tie-break") {
    CHECK(sign_of(make({0.3, -0.2, 0.1})).s == std::vector<int>{1, -1, 1});
    CHECK(sign_of(make({0.0})).s == std::vector<int>{1});
    CHECK(sign_of(make({-0.0})).s == std::vector<int>{1});
}

TEST_CASE("abs_of") {
    CHECK(abs_of(make({0.3, -0.2})) == std::vector<double>{0.3, 0.2});
}

TEST_CASE("modulus times sign rebuilds dw bit-exactly on seeded paths") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto w = seeded(seed, seed * 7);
        const auto s = sign_of(w);
        const auto a = abs_of(w);
        for (std::size_t k = 0; k < w.dw.size(); ++k) {
            REQUIRE(a[k] >= 0.0);
            REQUIRE(a[k] * s.s[k] == w.dw[k]);
            REQUIRE(s.s[k] * s.s[k] == 1);
        }
    }
}

TEST_CASE("phi_from_bernoulli") {
    const auto phi = phi_from_bernoulli(SignSequence{{1, -1}});
    CHECK(phi.phi[0] == Complex{1.0, 0.0});
    CHECK(phi.phi[1] == Complex{0.0, 1.0});
    CHECK_THROWS_AS(phi_from_bernoulli(SignSequence{{0}}), std::invalid_argument);
    CHECK_THROWS_AS(phi_from_bernoulli(SignSequence{{2}}), std::invalid_argument);

    // Phi^2 = B exactly for random signs.
    const auto b = sign_of(seeded(3, 0, 4096));
    const auto p = phi_from_bernoulli(b);
    for (std::size_t k = 0; k < b.s.size(); ++k) {
        REQUIRE(p.phi[k] * p.phi[k] == Complex(b.s[k], 0.0));
    }
}

TEST_CASE("phi_half") {
    const auto phi = phi_half(make({0.5, -0.5}));
    CHECK(phi.phi[0] == Complex{1.0, 0.0});
    CHECK(phi.phi[1] == Complex{0.0, 1.0});

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto w = seeded(seed, 0);
        const auto h = phi_half(w);
        const auto s = sign_of(w);
        for (std::size_t k = 0; k < w.dw.size(); ++k) {
            const Complex z = h.phi[k];
            REQUIRE((z == Complex{1.0, 0.0} || z == Complex{0.0, 1.0}));
            REQUIRE(z * z == Complex(s.s[k], 0.0));
            REQUIRE(z == phi_of_sign(s.s[k]));
        }
    }
}

TEST_CASE("golden Wiener stream for seed 42, path 0") {
    std::ifstream in(SQRTW_TEST_DATA_DIR "/golden_wiener_seed42_path0.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    std::vector<double> expected;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string idx, value;
        std::getline(row, idx, ',');
        std::getline(row, value);
        expected.push_back(std::stod(value));
    }
    REQUIRE(expected.size() == 64);
    const auto w = seeded(42, 0, 64);
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(w.dw[k] == doctest::Approx(expected[k]).epsilon(1e-14));
    }
}

TEST_CASE("half-normal mean of |dw|") {
    const double dt = 0.001;
    const double oracle = std::sqrt(2.0 * dt / std::numbers::pi);
    CHECK(oracle == doctest::Approx(0.02523).epsilon(1e-3));

    double sum = 0.0;
    std::size_t n = 0;
    for (std::uint64_t p = 0; p < 1000; ++p) {
        for (double a : abs_of(seeded(11, p, 1000, dt))) {
            sum += a;
            ++n;
        }
    }
    CHECK(n == 1'000'000);
    CHECK(std::abs(sum / n - oracle) < 1e-4);
}

TEST_CASE("ensemble law at dt = 0.001, 20000 paths of 1000 steps") {
    const double dt = 0.001;
    const std::size_t m = 20000, n = 1000;
    double s1 = 0.0, s2 = 0.0, end1 = 0.0, end2 = 0.0;
    for (std::uint64_t p = 0; p < m; ++p) {
        const auto w = seeded(1, p, n, dt);
        double wt = 0.0;
        for (double x : w.dw) {
            s1 += x;
            s2 += x * x;
            wt += x;
        }
        end1 += wt;
        end2 += wt * wt;
    }
    const double mn = static_cast<double>(m * n);
    const double mean = s1 / mn;
    const double var = s2 / mn - mean * mean;
    CHECK(std::abs(mean) <= 3.0 * std::sqrt(dt) / std::sqrt(mn));
    CHECK(std::abs(var / dt - 1.0) < 0.02);

    const double w_mean = end1 / m;
    const double w_var = end2 / m - w_mean * w_mean;
    CHECK(std::abs(w_var - 1.0) < 0.02);
}

TEST_CASE("paths do not depend on generation order") {
    std::vector<std::vector<double>> forward, backward(16);
    for (std::uint64_t p = 0; p < 16; ++p) forward.push_back(seeded(9, p, 200).dw);
    for (std::uint64_t p = 16; p-- > 0;) backward[p] = seeded(9, p, 200).dw;
    CHECK(forward == backward);
}

TEST_CASE("cumulative starts at zero and sums increments") {
    const auto w = make({0.1, -0.25, 0.5});
    const auto c = w.cumulative();
    REQUIRE(c.size() == 4);
    CHECK(c[0] == 0.0);
    CHECK(c[3] == doctest::Approx(0.35));
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sqrtw/fokker_planck.hpp"
#include "sqrtw/kernels.hpp"

using namespace sqrtw;

namespace {

double linf(const GridFunction& g, double t, const FPParams& p, double sigma0) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_points(); ++i) {
        worst = std::max(worst, std::abs(g.values[i] - fp_gaussian_solution(g.x(i), t, p, sigma0)));
    }
    return worst;
}

GridFunction evolve_gaussian(const FPParams& p, double sigma0, double t, std::size_t points, std::size_t steps,
                             std::vector<Complex>* mass = nullptr) {
    const auto d = default_fp_domain(p, sigma0, t, points);
    const auto init = sample_grid_function(d.x_min, d.x_max, d.n_points,
                                           [&](double x) { return fp_gaussian_solution(x, 0.0, p, sigma0); });
    return fp_evolve(init, p, t / static_cast<double>(steps), steps, mass);
}

std::string config_message(auto&& f) {
    try {
        f();
    } catch (const FPConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("analytic solution with D = 1 is the heat kernel") {
    for (double x : {-2.0, 0.0, 0.7, 3.1}) {
        for (double t : {0.1, 1.0, 2.5}) {
            const Complex a = fp_analytic_solution(x, t, FPParams::heat(1.0));
            CHECK(std::abs(a - heat_kernel(x, t)) <= 1e-15);
        }
    }
    CHECK_THROWS_AS(fp_analytic_solution(0.0, 0.0, FPParams::heat()), std::domain_error);
}

TEST_CASE("drift translates the analytic solution") {
    const FPParams p{Complex{0.8, 0.0}, Complex{0.5, 0.0}, 0.0};
    const FPParams still{Complex{}, p.diffusion, 0.0};
    for (double x : {-1.0, 0.3, 2.0}) {
        CHECK(std::abs(fp_analytic_solution(x, 1.5, p) - fp_analytic_solution(x - 1.2, 1.5, still)) <= 1e-15);
    }
}

TEST_CASE("analytic Gaussian solution satisfies the PDE") {
    // Central differences at 100 random points for real, imaginary and mixed D.
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), ut(0.2, 2.0);
    const FPParams cases[] = {FPParams::heat(1.0), {Complex{}, Complex{0.0, -0.25}, 0.0},
                              {Complex{0.3, 0.0}, Complex{0.4, -0.2}, 0.0}};
    for (const auto& p : cases) {
        for (int i = 0; i < 100; ++i) {
            const double x = ux(g), t = ut(g), h = 1e-4, k = 1e-5, s0 = 0.5;
            auto f = [&](double xx, double tt) { return fp_gaussian_solution(xx, tt, p, s0); };
            const Complex dt = (f(x, t + k) - f(x, t - k)) / (2.0 * k);
            const Complex dx = (f(x + h, t) - f(x - h, t)) / (2.0 * h);
            const Complex dxx = (f(x + h, t) - 2.0 * f(x, t) + f(x - h, t)) / (h * h);
            const Complex residual = dt - (-p.drift * dx + p.diffusion * dxx);
            REQUIRE(std::abs(residual) <= 1e-5 * (1.0 + std::abs(dt)));
        }
    }
}

TEST_CASE("square-root coefficients") {
    const auto p0 = FPParams::from_sqrt_process(0.0);
    CHECK(p0.drift == Complex{-0.5, -0.5});
    CHECK(p0.diffusion == Complex{0.0, -0.25});
    const auto p1 = FPParams::from_sqrt_process(1.0);
    CHECK(p1.drift == Complex{0.0, -1.0});
    CHECK(p1.beta == 1.0);
}

TEST_CASE("Crank-Nicolson heat equation against the analytic Gaussian") {
    const double e = linf(evolve_gaussian(FPParams::heat(), 0.5, 1.0, 4097, 1000), 1.0, FPParams::heat(), 0.5);
    CHECK(e <= 1e-6);
}

TEST_CASE("second-order convergence") {
    const FPParams p = FPParams::heat();
    const double e1 = linf(evolve_gaussian(p, 0.5, 1.0, 257, 64), 1.0, p, 0.5);
    const double e2 = linf(evolve_gaussian(p, 0.5, 1.0, 513, 128), 1.0, p, 0.5);
    const double e3 = linf(evolve_gaussian(p, 0.5, 1.0, 1025, 256), 1.0, p, 0.5);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.125));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("mass conservation") {
    for (const FPParams& p : {FPParams::heat(), FPParams{Complex{}, Complex{0.0, -0.25}, 0.0},
                              FPParams{Complex{0.4, 0.0}, Complex{0.3, 0.0}, 0.0}}) {
        std::vector<Complex> mass;
        evolve_gaussian(p, 0.5, 1.0, 2049, 500, &mass);
        REQUIRE(mass.size() == 501);
        CHECK(std::abs(mass.front() - 1.0) <= 1e-8);
        for (std::size_t k = 1; k < mass.size(); ++k) REQUIRE(std::abs(mass[k] - mass[k - 1]) <= 1e-8);
    }
}

TEST_CASE("imaginary diffusion matches the analytic Gaussian") {
    const FPParams p{Complex{}, Complex{0.0, -0.25}, 0.0};
    CHECK(linf(evolve_gaussian(p, 0.5, 1.0, 4097, 1000), 1.0, p, 0.5) <= 1e-3);
}

TEST_CASE("stability preconditions are reported before stepping") {
    const auto d = default_fp_domain(FPParams::heat(), 0.5, 1.0, 257);
    const auto init = sample_grid_function(d.x_min, d.x_max, d.n_points,
                                           [](double x) { return fp_gaussian_solution(x, 0.0, FPParams::heat(), 0.5); });

    // A complex drift with imaginary diffusion amplifies some grid mode.
    const auto sq = FPParams::from_sqrt_process(0.0);
    CHECK(fp_max_mode_growth(sq, init.dx()) > 0.0);
    CHECK(config_message([&] { CrankNicolsonFP(init, sq, 1e-3); }).find("von Neumann") != std::string::npos);

    // Courant bound on the drift.
    const FPParams fast{Complex{100.0, 0.0}, Complex{1.0, 0.0}, 0.0};
    CHECK_FALSE(config_message([&] { CrankNicolsonFP(init, fast, 0.01); }).empty());

    // The initial profile must vanish at the boundary.
    const auto wide = sample_grid_function(-1.0, 1.0, 101, [](double) { return Complex{1.0}; });
    CHECK(config_message([&] { CrankNicolsonFP(wide, FPParams::heat(), 1e-3); }).find("domain width") !=
          std::string::npos);

    CHECK_THROWS_AS(CrankNicolsonFP(init, FPParams::heat(), 0.0), FPConfigError);
    CHECK(fp_max_mode_growth(FPParams::heat(), init.dx()) <= 0.0);
}

TEST_CASE("grid helpers") {
    const auto g = sample_grid_function(0.0, 1.0, 11, [](double x) { return Complex{x, 0.0}; });
    CHECK(g.dx() == doctest::Approx(0.1));
    CHECK(integral(g).real() == doctest::Approx(0.5));
    CHECK_THROWS_AS(sample_grid_function(1.0, 0.0, 11, [](double) { return Complex{}; }), std::invalid_argument);
    CHECK_THROWS_AS(sample_grid_function(0.0, 1.0, 2, [](double) { return Complex{}; }), std::invalid_argument);
}

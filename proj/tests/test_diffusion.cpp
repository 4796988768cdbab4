#include <doctest.h>

#include <cmath>
#include <numbers>

#include "magnetworks/diffusion.hpp"
#include "magnetworks/error.hpp"
#include "magnetworks/transport.hpp"
#include "oracles.hpp"

using namespace magnetworks;

namespace {

ScalarField bump(const GridSpec& g, double center, double inv_width2) {
    return ScalarField::sample(g, [=](double x, double) { return std::exp(-inv_width2 * (x - center) * (x - center)); });
}

double variance(const ScalarField& p) {
    const GridSpec& g = p.grid();
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.cell_x(i);
        m0 += p.at(i);
        m1 += p.at(i) * x;
        m2 += p.at(i) * x * x;
    }
    const double mean = m1 / m0;
    return m2 / m0 - mean * mean;
}

// Unit point mass in the middle cell of [-L, L], diffused to time t, L1
// distance to the heat kernel.
double point_mass_error(int nx, double sigma, double t) {
    const double half = 8.0;
    const GridSpec g = GridSpec::line(nx, -half, 2.0 * half);
    std::vector<double> p0(nx, 0.0);
    p0[nx / 2] = 1.0 / g.dx;
    const ScalarField p = advance_fokker_planck(ScalarField(g, p0), sigma, VectorField::zeros(g), t,
                                                0.4 * g.dx * g.dx / sigma);
    const double x_hot = g.cell_x(nx / 2);
    double err = 0.0;
    for (int i = 0; i < nx; ++i) err += std::abs(p.at(i) - heat_kernel(g.cell_x(i) - x_hot, t, sigma)) * g.dx;
    return err;
}

}  // namespace

TEST_CASE("stability bound") {
    const GridSpec g = GridSpec::line(100, 0.0, 1.0);
    CHECK(diffusion_dt_limit(2.0, g) == doctest::Approx(0.5 * 1e-4 / 2.0));
    CHECK(std::isinf(diffusion_dt_limit(0.0, g)));
    DiffusionParams params{2.0, 0.0, ZeroVelocity{}, ZeroVelocity{}, 1e-4};
    CHECK_THROWS_AS(step_fokker_planck(bump(g, 0.5, 50.0), params, Sign::Plus), ContractError);
    params.dt = stable_dt(params, Sign::Plus, g);
    CHECK_NOTHROW(step_fokker_planck(bump(g, 0.5, 50.0), params, Sign::Plus));
}

TEST_CASE("degenerate steps") {
    const GridSpec g = GridSpec::line(120, 0.0, 12.0);
    const ScalarField p = bump(g, 4.0, 1.0);
    SUBCASE("no diffusion and no drift leaves p unchanged") {
        DiffusionParams params{0.0, 0.0, ZeroVelocity{}, ZeroVelocity{}, 0.7};
        CHECK((step_fokker_planck(p, params, Sign::Minus) - p).max_abs() == 0.0);
    }
    SUBCASE("no diffusion reduces to the upwind transport step") {
        DiffusionParams params{0.0, 0.0, ConstantVelocity{1.3, 0.0}, ZeroVelocity{}, 0.05};
        const ScalarField fp = step_fokker_planck(p, params, Sign::Plus);
        const ScalarField te = step_upwind(TransportState(0.0, p, ConstantVelocity{1.3, 0.0}), 0.05).rho;
        CHECK((fp - te).max_abs() == 0.0);
    }
}

TEST_CASE("heat kernel") {
    for (double t : {0.1, 1.0, 3.0}) {
        for (double s : {0.2, 1.0, 4.0}) {
            const double sd = std::sqrt(t * s);
            const double mass = oracle::integrate([&](double x) { return heat_kernel(x, t, s); }, -20.0 * sd, 20.0 * sd);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(heat_kernel(0.0, t, s) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * t * s)).epsilon(1e-15));
        }
    }
    SUBCASE("solves dp/dt = (sigma/2) d2p/dx2") {
        const double s = 0.8;
        for (double t : {0.5, 1.0, 2.0}) {
            for (double x : {-1.5, 0.0, 0.3, 2.0}) {
                const double dpdt = oracle::central_first([&](double u) { return heat_kernel(x, u, s); }, t, 1e-5);
                const double d2p = oracle::central_second([&](double y) { return heat_kernel(y, t, s); }, x, 1e-4);
                CHECK(std::abs(dpdt - 0.5 * s * d2p) <= 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(heat_kernel(0.0, 0.0, 1.0), ContractError);
    CHECK_THROWS_AS(heat_kernel(0.0, 1.0, 0.0), ContractError);
}

TEST_CASE("point mass approaches the heat kernel under refinement") {
    const double e1 = point_mass_error(200, 1.0, 1.0);
    const double e2 = point_mass_error(400, 1.0, 1.0);
    const double e3 = point_mass_error(800, 1.0, 1.0);
    CHECK(e2 < e1);
    CHECK(e3 < e2);
    CHECK(e3 < 1e-3);
}

TEST_CASE("static destinations") {
    const GridSpec g = GridSpec::line(50, 0.0, 5.0);
    const ScalarField minus = bump(g, 3.0, 2.0);
    const StaticDensity fixed = static_destination_density(minus);
    CHECK((fixed.at(0.0) - fixed.at(2.0)).max_abs() == 0.0);
    DiffusionParams params{0.5, 0.0, ZeroVelocity{}, ZeroVelocity{}, 0.01};
    CHECK((step_fokker_planck(minus, params, Sign::Minus) - fixed.at(0.01)).max_abs() == 0.0);

    ScalarField plus = bump(g, 1.5, 4.0);
    const double total0 = integrate(plus) + integrate(minus);
    for (int n = 0; n < 200; ++n) plus = step_fokker_planck(plus, params, Sign::Plus);
    CHECK(integrate(plus) + integrate(fixed.at(2.0)) == doctest::Approx(total0).epsilon(1e-12));
}

TEST_CASE("conservation, positivity and maximum principle") {
    const GridSpec g = GridSpec::rect(30, 24, 0.0, 0.0, 3.0, 2.4);
    ScalarField p = ScalarField::sample(g, [](double x, double y) { return std::exp(-20.0 * ((x - 2.5) * (x - 2.5) + (y - 0.3) * (y - 0.3))); });
    DiffusionParams params{0.3, 0.0, ZeroVelocity{}, ZeroVelocity{}, 0.0};
    params.dt = 0.9 * stable_dt(params, Sign::Plus, g);
    const double m0 = integrate(p);
    double peak = p.max();
    for (int n = 0; n < 1000; ++n) {
        p = step_fokker_planck(p, params, Sign::Plus);
        CHECK(p.max() <= peak);
        peak = p.max();
    }
    CHECK(std::abs(integrate(p) - m0) <= 1e-10 * m0);
    CHECK(p.min() >= 0.0);
}

TEST_CASE("variance grows by sigma dt per step") {
    const GridSpec g = GridSpec::line(400, -10.0, 20.0);
    const double sigma = 0.5;
    ScalarField p = bump(g, 0.0, 2.0);
    DiffusionParams params{sigma, 0.0, ZeroVelocity{}, ZeroVelocity{}, 0.0};
    params.dt = 0.5 * stable_dt(params, Sign::Plus, g);
    for (int n = 0; n < 50; ++n) {
        const double before = variance(p);
        p = step_fokker_planck(p, params, Sign::Plus);
        CHECK((variance(p) - before) == doctest::Approx(sigma * params.dt).epsilon(0.05));
    }
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "magnetworks/error.hpp"
#include "magnetworks/flow.hpp"
#include "magnetworks/pipeline1d.hpp"
#include "magnetworks/poisson.hpp"
#include "oracles.hpp"

using namespace magnetworks;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField example1_rho(int nx) {
    const GridSpec g = GridSpec::line(nx, 0.0, 1.0);
    return ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 1.0 : -1.0; });
}

ScalarField random_compatible(const GridSpec& g, std::mt19937_64& rng) {
    auto v = oracle::random_values(rng, g.cells());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
    return ScalarField(g, v);
}

double mean_of(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values()) s += x;
    return s / static_cast<double>(f.size());
}

}  // namespace

TEST_CASE("compatibility_check") {
    const Compatibility balanced = compatibility_check(example1_rho(100), 1e-9);
    CHECK(balanced.pass);
    CHECK(balanced.ratio <= 1e-15);

    const Compatibility ones = compatibility_check(ScalarField::constant(GridSpec::line(10, 0.0, 1.0), 1.0), 1e-9);
    CHECK_FALSE(ones.pass);
    CHECK(ones.ratio == 1.0);

    const GridSpec g = GridSpec::line(2000, 0.0, 20.0);
    const ScalarField truncated = sample_density(example2_density(), g);
    CHECK(compatibility_check(balance(truncated, 1e-12), 1e-9).pass);
}

TEST_CASE("apply_operator") {
    std::mt19937_64 rng(5);
    const GridSpec g = GridSpec::rect(11, 7, 0.0, 0.0, 1.3, 0.7);
    CHECK(apply_operator(ScalarField::constant(g, 4.2)).max_abs() == 0.0);
    for (int k = 0; k < 50; ++k) {
        const ScalarField a(g, oracle::random_values(rng, g.cells()));
        const ScalarField b(g, oracle::random_values(rng, g.cells()));
        const double ab = inner_product(apply_operator(a), b);
        const double ba = inner_product(a, apply_operator(b));
        CHECK(std::abs(ab - ba) <= 1e-11 * std::max(1.0, std::abs(ab)));
        CHECK(inner_product(apply_operator(a), a) >= 0.0);
        CHECK((apply_operator(a + ScalarField::constant(g, 3.0)) - apply_operator(a)).max_abs() <= 1e-10);
    }
}

TEST_CASE("solve_neumann") {
    SUBCASE("zero density") {
        const PoissonSolution sol = solve_neumann(ScalarField::zeros(GridSpec::rect(5, 5, 0, 0, 1, 1)), 1e-8);
        CHECK(sol.iterations == 0);
        CHECK(sol.phi.max_abs() == 0.0);
        CHECK(sol.converged);
    }
    SUBCASE("incompatible density is rejected") {
        CHECK_THROWS_AS(solve_neumann(ScalarField::constant(GridSpec::line(8, 0, 1), 1.0), 1e-8), SolverError);
    }
    SUBCASE("1D Example 1 reproduces the tent flow") {
        const ScalarField rho = example1_rho(200);
        const PoissonSolution sol = solve_neumann(rho, 1e-10);
        REQUIRE(sol.converged);
        const VectorField t = traffic_flow(sol.phi);
        const GridSpec& g = rho.grid();
        for (int i = 0; i <= g.nx; ++i) {
            const double x = g.node_x(i);
            CHECK(std::abs(t.u_at(i) - std::min(x, 1.0 - x)) <= g.dx);
        }
    }
    SUBCASE("residual is recomputed and the potential is mean-zero") {
        std::mt19937_64 rng(9);
        const GridSpec g = GridSpec::rect(24, 16, 0.0, 0.0, 2.0, 1.0);
        const ScalarField rho = random_compatible(g, rng);
        const PoissonSolution sol = solve_neumann(rho, 1e-9);
        REQUIRE(sol.converged);
        const ScalarField r = apply_operator(sol.phi) - rho;
        const double independent = std::sqrt(inner_product(r, r) / inner_product(rho, rho));
        CHECK(sol.residual_norm == doctest::Approx(independent).epsilon(1e-6));
        CHECK(sol.residual_norm <= 1e-9);
        CHECK(std::abs(mean_of(sol.phi)) <= 1e-12);
    }
    SUBCASE("gauge: linear superposition of compatible perturbations") {
        std::mt19937_64 rng(13);
        const GridSpec g = GridSpec::rect(16, 16, 0.0, 0.0, 1.0, 1.0);
        const ScalarField rho = random_compatible(g, rng);
        const ScalarField delta = random_compatible(g, rng);
        const ScalarField direct = solve_neumann(rho, 1e-11).phi;
        const ScalarField shifted = solve_neumann(rho + delta, 1e-11).phi - solve_neumann(delta, 1e-11).phi;
        CHECK((direct - shifted).max_abs() <= 1e-8 * std::max(1.0, direct.max_abs()));
    }
    SUBCASE("iteration budget exhausted") {
        std::mt19937_64 rng(17);
        const GridSpec g = GridSpec::rect(32, 32, 0.0, 0.0, 1.0, 1.0);
        const PoissonSolution sol = solve_neumann(random_compatible(g, rng), 1e-10, 5);
        CHECK_FALSE(sol.converged);
        CHECK(sol.iterations == 5);
        CHECK(sol.residual_norm > 1e-10);
        CHECK(sol.residual_norm < 1.0);
    }
}

TEST_CASE("manufactured solution converges at second order") {
    auto max_error = [](int n) {
        const double lx = 1.0, ly = 1.5;
        const GridSpec g = GridSpec::rect(n, n, 0.0, 0.0, lx, ly);
        const auto phi = [&](double x, double y) { return std::cos(pi * x / lx) * std::cos(pi * y / ly); };
        const double k2 = (pi / lx) * (pi / lx) + (pi / ly) * (pi / ly);
        const ScalarField rho = ScalarField::sample(g, [&](double x, double y) { return k2 * phi(x, y); });
        const PoissonSolution sol = solve_neumann(rho, 1e-10);
        REQUIRE(sol.converged);
        const ScalarField exact = ScalarField::sample(g, phi);
        return (sol.phi - (exact - ScalarField::constant(g, mean_of(exact)))).max_abs();
    };
    const double e16 = max_error(16), e32 = max_error(32);
    CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.125));
}

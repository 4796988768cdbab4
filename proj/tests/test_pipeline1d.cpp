#include <doctest.h>

#include <cmath>
#include <random>

#include "magnetworks/error.hpp"
#include "magnetworks/pipeline1d.hpp"
#include "oracles.hpp"

using namespace magnetworks;

namespace {

ScalarField example1(int nx) {
    const GridSpec g = GridSpec::line(nx, 0.0, 1.0);
    return ScalarField::sample(g, [](double x, double) { return x < 0.5 ? 1.0 : -1.0; });
}

// Reference highway flow from quadrature of the advected density.
double mass_on_half_line(double c) {
    return oracle::integrate([c](double s) { return std::exp(-(s - c) * (s - c)); }, 0.0, c + 30.0, 1e-15, 256);
}

double reference_flow(double t, double x) {
    static const double k1 = 1.0 / mass_on_half_line(3.0);
    static const double k2 = 1.0 / mass_on_half_line(10.0);
    const auto rho = [t](double s) {
        const double y = s * std::exp(-t);
        return (k1 * std::exp(-(y - 3.0) * (y - 3.0)) - k2 * std::exp(-(y - 10.0) * (y - 10.0))) * std::exp(-t);
    };
    return oracle::integrate(rho, 0.0, x, 1e-14, 256);
}

}  // namespace

TEST_CASE("Example 1 node count and flow profile") {
    for (int nx : {1000, 4000}) {
        const Flow1D f = solve_1d(example1(nx), 2.0);
        CHECK(std::abs(f.N - 1.0 / 12.0) / (1.0 / 12.0) <= 1e-3);
        CHECK(f.T.zero_flux());
        for (int i = 0; i <= nx; ++i) {
            const double x = f.grid.node_x(i);
            CHECK(std::abs(f.T.u_at(i) - std::min(x, 1.0 - x)) <= f.grid.dx);
        }
    }
}

TEST_CASE("solve_1d edge cases") {
    const Flow1D zero = solve_1d(ScalarField::zeros(GridSpec::line(50, 0.0, 1.0)), 2.0);
    CHECK(zero.T.max_abs() == 0.0);
    CHECK(zero.N == 0.0);

    const GridSpec g = GridSpec::line(40, 0.0, 1.0);
    CHECK_THROWS_AS(solve_1d(ScalarField::constant(g, 1.0), 2.0), SolverError);

    SUBCASE("mirror symmetry") {
        std::mt19937_64 rng(5);
        std::vector<double> half = oracle::random_values(rng, 20, 0.0, 1.0);
        std::vector<double> values(40);
        for (int i = 0; i < 20; ++i) {
            values[i] = half[i];
            values[39 - i] = -half[i];
        }
        const Flow1D f = solve_1d(ScalarField(g, values), 2.0);
        for (int i = 0; i <= 40; ++i) CHECK(f.T.u_at(i) == doctest::Approx(f.T.u_at(40 - i)).epsilon(1e-12).scale(1.0));
    }

    SUBCASE("differentiating the flow recovers the density") {
        std::mt19937_64 rng(6);
        std::vector<double> values = oracle::random_values(rng, 40);
        double mean = 0.0;
        for (double v : values) mean += v / 40.0;
        for (double& v : values) v -= mean;
        const ScalarField rho(g, values);
        const Flow1D f = solve_1d(rho, 2.0);
        const ScalarField d = divergence(f.T);
        for (int i = 0; i < 40; ++i) CHECK(d[i] == doctest::Approx(rho[i]).scale(1.0).epsilon(1e-10));
        const VectorField back = traffic_flow(potential_1d(f.T));
        CHECK((back - f.T).max_abs() <= 1e-12);
    }
}

TEST_CASE("snapshot from the 1D path") {
    const SolveSnapshot s = solve_snapshot_1d(0.0, example1(500), 2.0);
    CHECK(s.converged);
    CHECK(s.node_count == doctest::Approx(1.0 / 12.0).epsilon(1e-3));
    CHECK(s.flux_residual == 0.0);
    CHECK(s.div_residual <= 1e-12);
}

TEST_CASE("highway closed form against quadrature") {
    CHECK(example2_flow(0.0, 0.0) == 0.0);
    CHECK(example2_flow(1.5, 0.0) == 0.0);
    CHECK(std::abs(example2_flow(0.0, 40.0)) <= 1e-12);
    CHECK(example2_flow(0.0, 6.0) == doctest::Approx(0.999988946920872895).epsilon(1e-12));
    for (double t : {0.0, 0.5, 1.0, 2.0})
        for (double x : {1.0, 3.0, 6.0, 10.0, 14.0, 20.0})
            CHECK(example2_flow(t, x) == doctest::Approx(reference_flow(t, x)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("property: highway flow is non-negative and rises then falls") {
    for (double t = 0.0; t <= 2.0; t += 0.25) {
        double prev = 0.0;
        bool falling = false;
        for (double x = 0.0; x <= 20.0; x += 0.05) {
            const double v = example2_flow(t, x);
            CHECK(v >= -1e-15);
            if (v < prev - 1e-15) falling = true;
            if (falling) CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("highway node count") {
    const QuadratureResult n0 = example2_node_count_with_error(0.0);
    CHECK(n0.value == doctest::Approx(6.2021066266118270661).epsilon(1e-10));
    CHECK(n0.error_estimate <= 1e-8);
    CHECK(example2_node_count(1.0) == doctest::Approx(16.85907374128435822).epsilon(1e-10));
    CHECK(example2_node_count(2.0) == doctest::Approx(45.827713795584321803).epsilon(1e-10));
    for (double t : {0.3, 1.0, 1.7})
        CHECK(example2_node_count(t) == doctest::Approx(std::exp(t) * n0.value).epsilon(1e-9));
}

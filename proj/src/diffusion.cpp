#include "magnetworks/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magnetworks/error.hpp"
#include "magnetworks/transport.hpp"

namespace magnetworks {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stable_dt_faces(double sigma, const VectorField& drift) {
    const GridSpec& g = drift.grid();
    double max_u = 0.0, max_v = 0.0;
    for (double x : drift.u()) max_u = std::max(max_u, std::abs(x));
    for (double x : drift.v()) max_v = std::max(max_v, std::abs(x));
    double rate = max_u / g.dx + sigma / (g.dx * g.dx);
    if (g.dim == 2) rate += max_v / g.dy + sigma / (g.dy * g.dy);
    const double joint = rate > 0.0 ? 1.0 / rate : kInf;
    return std::min(joint, diffusion_dt_limit(sigma, g));
}

}  // namespace

double diffusion_dt_limit(double sigma, const GridSpec& grid) {
    if (sigma <= 0.0) return kInf;
    const double h = grid.dim == 2 ? std::min(grid.dx, grid.dy) : grid.dx;
    return 0.5 * h * h / sigma;
}

double stable_dt(const DiffusionParams& params, Sign sign, const GridSpec& grid) {
    return stable_dt_faces(params.sigma(sign), sample_velocity(params.drift(sign), grid));
}

ScalarField step_fokker_planck(const ScalarField& p, double sigma, const VectorField& drift, double dt) {
    if (!(sigma >= 0.0)) throw ContractError("step_fokker_planck: sigma must be >= 0");
    if (!(dt >= 0.0) || dt > stable_dt_faces(sigma, drift) * (1.0 + 1e-12))
        throw ContractError("step_fokker_planck: dt exceeds the stability bound");
    if (p.min() < -1e-12 * p.max_abs()) throw ContractError("step_fokker_planck: density must be non-negative");

    const ScalarField advected = step_upwind(p, drift, dt);
    if (sigma == 0.0) return advected;
    const ScalarField laplacian = divergence(gradient(p));
    std::vector<double> out(advected.values().begin(), advected.values().end());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += dt * 0.5 * sigma * laplacian[k];
        if (std::abs(out[k]) < std::numeric_limits<double>::min()) out[k] = 0.0;
    }
    return ScalarField(p.grid(), std::move(out));
}

ScalarField step_fokker_planck(const ScalarField& p, const DiffusionParams& params, Sign sign) {
    return step_fokker_planck(p, params.sigma(sign), sample_velocity(params.drift(sign), p.grid()), params.dt);
}

ScalarField advance_fokker_planck(const ScalarField& p, double sigma, const VectorField& drift,
                                  double duration, double dt_max) {
    if (duration <= 0.0) return p;
    dt_max = std::min(dt_max, stable_dt_faces(sigma, drift));
    const long steps = std::isinf(dt_max) ? 1L : std::max(1L, static_cast<long>(std::ceil(duration / dt_max - 1e-9)));
    const double dt = duration / static_cast<double>(steps);
    ScalarField q = p;
    for (long n = 0; n < steps; ++n) q = step_fokker_planck(q, sigma, drift, dt);
    return q;
}

double heat_kernel(double x, double t, double sigma) {
    if (!(t > 0.0)) throw ContractError("heat_kernel: t must be > 0");
    if (!(sigma > 0.0)) throw ContractError("heat_kernel: sigma must be > 0");
    const double variance = t * sigma;
    return std::exp(-x * x / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

StaticDensity static_destination_density(const ScalarField& rho_minus_0) { return StaticDensity(rho_minus_0); }

}  // namespace magnetworks

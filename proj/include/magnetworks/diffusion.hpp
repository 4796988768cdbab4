// Explicit Kolmogorov forward (Fokker-Planck) evolution of the source and
// destination densities under Brownian mobility.
//
// sigma_plus / sigma_minus are variance rates s: a point mass spreads into a
// Gaussian of variance t * s, so the equation advanced here is
//   dp/dt = -div(v p) + (s / 2) lap(p)
// with zero-flux walls for the diffusive part. In 2D the diffusion acts
// independently along each axis.
#pragma once

#include <optional>

#include "magnetworks/fields.hpp"
#include "magnetworks/scenario.hpp"

namespace magnetworks {

struct DiffusionParams {
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    VelocitySpec drift_plus = ZeroVelocity{};
    VelocitySpec drift_minus = ZeroVelocity{};
    double dt = 0.0;

    double sigma(Sign sign) const { return sign == Sign::Plus ? sigma_plus : sigma_minus; }
    const VelocitySpec& drift(Sign sign) const { return sign == Sign::Plus ? drift_plus : drift_minus; }
};

// 0.5 * min(dx, dy)^2 / sigma, infinite for sigma = 0.
double diffusion_dt_limit(double sigma, const GridSpec& grid);

// Largest dt the explicit step accepts for this sign: the diffusion bound
// combined with the drift CFL bound and the joint positivity condition.
double stable_dt(const DiffusionParams& params, Sign sign, const GridSpec& grid);

// One explicit step. Throws ContractError when params.dt exceeds stable_dt
// or p has negative entries.
ScalarField step_fokker_planck(const ScalarField& p, const DiffusionParams& params, Sign sign);

// Face-sampled drift variant, for loops that reuse the sampled velocity.
ScalarField step_fokker_planck(const ScalarField& p, double sigma, const VectorField& drift, double dt);

// Advances by `duration` in equal steps of at most `dt_max`.
ScalarField advance_fokker_planck(const ScalarField& p, double sigma, const VectorField& drift,
                                  double duration, double dt_max);

// exp(-x^2 / (2 t sigma)) / sqrt(2 pi t sigma). Throws for t <= 0 or sigma <= 0.
double heat_kernel(double x, double t, double sigma);

// Destinations with sigma_minus = 0 and no drift never move.
class StaticDensity {
public:
    explicit StaticDensity(ScalarField initial) : field_(std::move(initial)) {}
    const ScalarField& at(double /*t*/) const { return field_; }

private:
    ScalarField field_;
};

StaticDensity static_destination_density(const ScalarField& rho_minus_0);

}  // namespace magnetworks

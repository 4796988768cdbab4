// Conservative donor-cell upwind evolution of a density under drift,
// d(rho)/dt + div(rho v) = 0.
#pragma once

#include "magnetworks/fields.hpp"
#include "magnetworks/scenario.hpp"

namespace magnetworks {

struct TransportState {
    double t = 0.0;
    ScalarField rho;
    VectorField velocity;  // normal components at faces

    TransportState(double t, ScalarField rho, const VelocitySpec& v);
    TransportState(double t, ScalarField rho, VectorField face_velocity);
};

// cfl * min(dx / max|u|, dy / max|v|); `window` when the velocity vanishes.
double cfl_dt(const VectorField& face_velocity, double cfl, double window);
double cfl_dt(const VelocitySpec& v, const GridSpec& grid, double cfl, double window);

// Donor-cell flux rho_upwind * v. Inflow boundary faces carry zero flux,
// outflow boundary faces carry the boundary cell's density.
VectorField upwind_flux(const ScalarField& rho, const VectorField& face_velocity);

// Throws ContractError when dt exceeds the cfl = 1 limit.
TransportState step_upwind(const TransportState& state, double dt);
ScalarField step_upwind(const ScalarField& rho, const VectorField& face_velocity, double dt);

// Advances to `t_target` in equal steps no larger than cfl_dt(cfl) / dim,
// which keeps the donor-cell update positive in 2D.
TransportState advance_upwind(const TransportState& state, double t_target, double cfl);

// rho0(x e^-t) e^-t for v(x) = x in 1D.
double characteristics_density(const DensitySpec& spec, const VelocitySpec& v, double t, double x);

// Average of the adjacent cell densities times the face velocity.
VectorField node_current(const ScalarField& rho, const VectorField& face_velocity);
VectorField node_current(const ScalarField& rho, const VelocitySpec& v);

// max |(after - before)/dt + div F(before)| with F the upwind flux.
double continuity_residual(const TransportState& before, const TransportState& after, double dt);

}  // namespace magnetworks

#include "magnetworks/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magnetworks/error.hpp"

namespace magnetworks {

TransportState::TransportState(double t, ScalarField rho, const VelocitySpec& v)
    : t(t), rho(std::move(rho)), velocity(sample_velocity(v, this->rho.grid())) {}

TransportState::TransportState(double t, ScalarField rho, VectorField face_velocity)
    : t(t), rho(std::move(rho)), velocity(std::move(face_velocity)) {
    if (!(this->rho.grid() == velocity.grid())) throw ContractError("TransportState: velocity grid differs");
}

double cfl_dt(const VectorField& face_velocity, double cfl, double window) {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ContractError("cfl_dt: cfl must lie in (0, 1]");
    const GridSpec& g = face_velocity.grid();
    double max_u = 0.0, max_v = 0.0;
    for (double x : face_velocity.u()) max_u = std::max(max_u, std::abs(x));
    for (double x : face_velocity.v()) max_v = std::max(max_v, std::abs(x));
    double dt = std::numeric_limits<double>::infinity();
    if (max_u > 0.0) dt = std::min(dt, g.dx / max_u);
    if (max_v > 0.0) dt = std::min(dt, g.dy / max_v);
    return std::isinf(dt) ? window : cfl * dt;
}

double cfl_dt(const VelocitySpec& v, const GridSpec& grid, double cfl, double window) {
    return cfl_dt(sample_velocity(v, grid), cfl, window);
}

VectorField upwind_flux(const ScalarField& rho, const VectorField& vel) {
    const GridSpec& g = rho.grid();
    std::vector<double> fu(g.x_faces()), fv(g.y_faces());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            const double a = vel.u_at(i, j);
            double donor = 0.0;
            if (a > 0.0 && i > 0) donor = rho.at(i - 1, j);
            if (a < 0.0 && i < g.nx) donor = rho.at(i, j);
            fu[g.x_face(i, j)] = donor * a;
        }
    }
    if (g.dim == 2) {
        for (int j = 0; j <= g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const double a = vel.v_at(i, j);
                double donor = 0.0;
                if (a > 0.0 && j > 0) donor = rho.at(i, j - 1);
                if (a < 0.0 && j < g.ny) donor = rho.at(i, j);
                fv[g.y_face(i, j)] = donor * a;
            }
        }
    }
    return VectorField(g, std::move(fu), std::move(fv));
}

ScalarField step_upwind(const ScalarField& rho, const VectorField& vel, double dt) {
    const GridSpec& g = rho.grid();
    if (!(g == vel.grid())) throw ContractError("step_upwind: velocity grid differs");
    const double limit = cfl_dt(vel, 1.0, std::numeric_limits<double>::infinity());
    if (!(dt >= 0.0) || dt > limit * (1.0 + 1e-12))
        throw ContractError("step_upwind: dt exceeds the CFL limit");
    // Fused flux and divergence, same donor rule as upwind_flux: boundary
    // faces only ever carry outflow.
    const std::span<const double> r = rho.values(), u = vel.u(), v = vel.v();
    std::vector<double> out(r.begin(), r.end());
    const double cx = dt / g.dx;
    for (int j = 0; j < g.ny; ++j) {
        const double* rr = r.data() + g.cell(0, j);
        const double* uu = u.data() + g.x_face(0, j);
        double* oo = out.data() + g.cell(0, j);
        double west = std::min(uu[0], 0.0) * rr[0];
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double east = std::max(uu[i + 1], 0.0) * rr[i] + std::min(uu[i + 1], 0.0) * rr[i + 1];
            oo[i] -= cx * (east - west);
            west = east;
        }
        oo[g.nx - 1] -= cx * (std::max(uu[g.nx], 0.0) * rr[g.nx - 1] - west);
    }
    if (g.dim == 2) {
        const double cy = dt / g.dy;
        for (int j = 0; j <= g.ny; ++j) {
            const double* vv = v.data() + g.y_face(0, j);
            const double* below = j > 0 ? r.data() + g.cell(0, j - 1) : nullptr;
            const double* above = j < g.ny ? r.data() + g.cell(0, j) : nullptr;
            for (int i = 0; i < g.nx; ++i) {
                double f = 0.0;
                if (below) f += std::max(vv[i], 0.0) * below[i];
                if (above) f += std::min(vv[i], 0.0) * above[i];
                if (j > 0) out[g.cell(i, j - 1)] -= cy * f;
                if (j < g.ny) out[g.cell(i, j)] += cy * f;
            }
        }
    }
    // Gaussian tails otherwise decay into subnormals, which are very slow.
    for (double& x : out)
        if (std::abs(x) < std::numeric_limits<double>::min()) x = 0.0;
    return ScalarField(g, std::move(out));
}

TransportState step_upwind(const TransportState& state, double dt) {
    return TransportState(state.t + dt, step_upwind(state.rho, state.velocity, dt), state.velocity);
}

TransportState advance_upwind(const TransportState& state, double t_target, double cfl) {
    const double span = t_target - state.t;
    if (span <= 0.0) return state;
    const double dt_max = cfl_dt(state.velocity, cfl, span) / state.rho.grid().dim;
    const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt_max - 1e-9)));
    const double dt = span / static_cast<double>(steps);
    TransportState s = state;
    for (long n = 0; n < steps; ++n) s = step_upwind(s, dt);
    s.t = t_target;
    return s;
}

double characteristics_density(const DensitySpec& spec, const VelocitySpec& v, double t, double x) {
    if (!std::holds_alternative<LinearRadialVelocity>(v))
        throw ContractError("characteristics_density: closed form only for v(x) = x");
    const double decay = std::exp(-t);
    return evaluate(spec, 1, x * decay) * decay;
}

VectorField node_current(const ScalarField& rho, const VectorField& vel) {
    const GridSpec& g = rho.grid();
    std::vector<double> ju(g.x_faces()), jv(g.y_faces());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            double r;
            if (i == 0) r = rho.at(0, j);
            else if (i == g.nx) r = rho.at(g.nx - 1, j);
            else r = 0.5 * (rho.at(i - 1, j) + rho.at(i, j));
            ju[g.x_face(i, j)] = r * vel.u_at(i, j);
        }
    }
    if (g.dim == 2) {
        for (int j = 0; j <= g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                double r;
                if (j == 0) r = rho.at(i, 0);
                else if (j == g.ny) r = rho.at(i, g.ny - 1);
                else r = 0.5 * (rho.at(i, j - 1) + rho.at(i, j));
                jv[g.y_face(i, j)] = r * vel.v_at(i, j);
            }
        }
    }
    return VectorField(g, std::move(ju), std::move(jv));
}

VectorField node_current(const ScalarField& rho, const VelocitySpec& v) {
    return node_current(rho, sample_velocity(v, rho.grid()));
}

double continuity_residual(const TransportState& before, const TransportState& after, double dt) {
    if (!(dt > 0.0)) throw ContractError("continuity_residual: dt must be > 0");
    const ScalarField div = divergence(upwind_flux(before.rho, before.velocity));
    double worst = 0.0;
    for (std::size_t k = 0; k < div.size(); ++k)
        worst = std::max(worst, std::abs((after.rho[k] - before.rho[k]) / dt + div[k]));
    return worst;
}

}  // namespace magnetworks

#include "magnetworks/flow.hpp"

#include <algorithm>
#include <cmath>

#include "magnetworks/error.hpp"
#include "magnetworks/poisson.hpp"

namespace magnetworks {

VectorField traffic_flow(const ScalarField& phi) { return gradient(phi) * -1.0; }

ScalarField flow_magnitude(const VectorField& t) {
    const GridSpec& g = t.grid();
    std::vector<double> out(g.cells());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double ul = t.u_at(i, j), ur = t.u_at(i + 1, j);
            double sq = 0.5 * (ul * ul + ur * ur);
            if (g.dim == 2) {
                const double vb = t.v_at(i, j), vt = t.v_at(i, j + 1);
                sq += 0.5 * (vb * vb + vt * vt);
            }
            out[g.cell(i, j)] = std::sqrt(sq);
        }
    }
    return ScalarField(g, std::move(out));
}

ScalarField relay_density(const VectorField& t, double alpha) {
    if (!(alpha > 0.0)) throw ContractError("relay_density: alpha must be > 0");
    const ScalarField magnitude = flow_magnitude(t);
    std::vector<double> out(magnitude.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double m = magnitude[k];
        out[k] = alpha == 2.0 ? m * m : std::pow(m, alpha);
    }
    return ScalarField(t.grid(), std::move(out));
}

double node_count(const ScalarField& eta) {
    if (eta.min() < 0.0) throw ContractError("node_count: relay density must be non-negative");
    return integrate(eta);
}

CapacityCheck capacity_check(const VectorField& t, const ScalarField& eta, double k) {
    if (!(k > 0.0)) throw ContractError("capacity_check: K must be > 0");
    if (!(t.grid() == eta.grid())) throw ContractError("capacity_check: grids differ");
    const ScalarField magnitude = flow_magnitude(t);
    double worst = 0.0;
    for (std::size_t c = 0; c < magnitude.size(); ++c) {
        const double bound = k * std::sqrt(std::max(eta[c], 0.0));
        worst = std::max(worst, magnitude[c] - bound);
    }
    return {worst <= 1e-12, worst};
}

double time_integrated_count(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ContractError("time_integrated_count: needs at least two samples");
    double total = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].second < 0.0) throw ContractError("time_integrated_count: negative node count");
        if (k == 0) continue;
        const double dt = points[k].first - points[k - 1].first;
        if (!(dt > 0.0)) throw ContractError("time_integrated_count: times must be strictly increasing");
        total += 0.5 * dt * (points[k].second + points[k - 1].second);
    }
    return total;
}

void measure_diagnostics(SolveSnapshot& s) {
    const ScalarField div = divergence(s.T);
    double worst = 0.0;
    for (std::size_t k = 0; k < div.size(); ++k) worst = std::max(worst, std::abs(div[k] - s.rho[k]));
    s.div_residual = worst;
    s.curl_max = s.T.grid().dim == 2 ? curl(s.T).max_abs() : 0.0;
    s.flux_residual = std::abs(boundary_flux(s.T));
}

SolveSnapshot solve_snapshot(double t, const ScalarField& rho, double alpha, double tol, int max_iter) {
    PoissonSolution sol = solve_neumann(rho, tol, max_iter);
    VectorField flow = traffic_flow(sol.phi);
    ScalarField eta = relay_density(flow, alpha);
    const double n = node_count(eta);
    SolveSnapshot s{t, rho, std::move(sol.phi), std::move(flow), std::move(eta), n};
    s.iterations = sol.iterations;
    s.residual_norm = sol.residual_norm;
    s.converged = sol.converged;
    measure_diagnostics(s);
    return s;
}

}  // namespace magnetworks

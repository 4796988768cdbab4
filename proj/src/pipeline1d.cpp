#include "magnetworks/pipeline1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "magnetworks/error.hpp"

namespace magnetworks {

Flow1D solve_1d(const ScalarField& rho, double alpha, double closure_tol) {
    const GridSpec& g = rho.grid();
    if (g.dim != 1) throw ContractError("solve_1d: grid must be 1D");
    std::vector<double> t(g.x_faces(), 0.0);
    double running = 0.0, peak = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        running += rho.at(i) * g.dx;
        t[i + 1] = running;
        peak = std::max(peak, std::abs(running));
    }
    const double defect = t[g.nx];
    if (std::abs(defect) > closure_tol * peak) {
        std::ostringstream msg;
        msg << "solve_1d: unbalanced density, T(L) = " << defect << " against max|T| = " << peak;
        throw SolverError(msg.str());
    }
    t[g.nx] = 0.0;
    VectorField flow(g, std::move(t));
    ScalarField eta = relay_density(flow, alpha);
    const double n = node_count(eta);
    return {g, std::move(flow), std::move(eta), n, defect};
}

ScalarField potential_1d(const VectorField& t) {
    const GridSpec& g = t.grid();
    std::vector<double> phi(g.cells(), 0.0);
    for (int i = 1; i < g.nx; ++i) phi[i] = phi[i - 1] - t.u_at(i) * g.dx;
    double mean = 0.0;
    for (double x : phi) mean += x;
    mean /= static_cast<double>(phi.size());
    for (double& x : phi) x -= mean;
    return ScalarField(g, std::move(phi));
}

SolveSnapshot solve_snapshot_1d(double t, const ScalarField& rho, double alpha) {
    Flow1D f = solve_1d(rho, alpha);
    SolveSnapshot s{t, rho, potential_1d(f.T), std::move(f.T), std::move(f.eta), f.N};
    measure_diagnostics(s);
    return s;
}

DensitySpec example2_density() {
    DensitySpec spec;
    spec.terms.emplace_back(GaussianBlob{1.0, 3.0, 0.0, 1.0, true, 0.0, 0.0});
    spec.terms.emplace_back(GaussianBlob{-1.0, 10.0, 0.0, 1.0, true, 0.0, 0.0});
    return spec;
}

double characteristics_flow(const DensitySpec& spec, double t, double x) {
    // int_0^x A exp(-((s e^-t - c)/w)^2 - t) ds, substituting u = s e^-t:
    // A w sqrt(pi)/2 (erfc(-c/w) - erfc((x e^-t - c)/w)).
    const double y = x * std::exp(-t);
    double total = 0.0;
    for (const auto& term : spec.terms) {
        const auto* g = std::get_if<GaussianBlob>(&term);
        if (!g) throw ContractError("characteristics_flow: only Gaussian terms have a closed form");
        double amplitude = g->weight;
        if (g->normalized) amplitude *= normalization_constant(g->cx, g->width, g->origin_x);
        const double scale = amplitude * g->width * std::sqrt(std::numbers::pi) / 2.0;
        total += scale * (erfc(-g->cx / g->width) - erfc((y - g->cx) / g->width));
    }
    return total;
}

double example2_flow(double t, double x) {
    static const DensitySpec spec = example2_density();
    return characteristics_flow(spec, t, x);
}

namespace {

double simpson_flow_squared(double t, double x_max, int panels) {
    const double h = x_max / panels;
    double sum = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double f = example2_flow(t, k * h);
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        sum += w * f * f;
    }
    return sum * h / 3.0;
}

}  // namespace

QuadratureResult example2_node_count_with_error(double t, int panels) {
    if (panels < 2 || panels % 2) throw ContractError("example2_node_count: panels must be even and >= 2");
    // Beyond x e^-t = 17 the flow is below erfc(7)/2 ~ 2e-23, so the
    // dropped tail is far under 1e-8 of the integral.
    const double x_max = 17.0 * std::exp(t);
    const double coarse = simpson_flow_squared(t, x_max, panels);
    const double fine = simpson_flow_squared(t, x_max, 2 * panels);
    return {fine, std::abs(fine - coarse), x_max};
}

double example2_node_count(double t) { return example2_node_count_with_error(t).value; }

}  // namespace magnetworks

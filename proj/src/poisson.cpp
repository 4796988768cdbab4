#include "magnetworks/poisson.hpp"

#include <cmath>
#include <sstream>

#include "magnetworks/error.hpp"

namespace magnetworks {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

void remove_mean(std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double& v : x) v -= mean;
}

double relative_residual(const ScalarField& phi, const ScalarField& rho, double rho_norm) {
    const ScalarField a_phi = apply_operator(phi);
    double s = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) s += (a_phi[k] - rho[k]) * (a_phi[k] - rho[k]);
    return std::sqrt(s) / rho_norm;
}

}  // namespace

Compatibility compatibility_check(const ScalarField& rho, double tol) {
    double sum = 0.0, abs_sum = 0.0;
    for (double x : rho.values()) {
        sum += x;
        abs_sum += std::abs(x);
    }
    const double ratio = abs_sum > 0.0 ? std::abs(sum) / abs_sum : 0.0;
    return {ratio <= tol, ratio};
}

ScalarField apply_operator(const ScalarField& phi) { return divergence(gradient(phi)) * -1.0; }

PoissonSolution solve_neumann(const ScalarField& rho, double tol, int max_iter) {
    const GridSpec& g = rho.grid();
    if (!(tol > 0.0)) throw ContractError("solve_neumann: tol must be > 0");
    const Compatibility c = compatibility_check(rho, tol);
    if (!c.pass) {
        std::ostringstream msg;
        msg << "solve_neumann: incompatible density, |int rho| / int |rho| = " << c.ratio;
        throw SolverError(msg.str());
    }
    const double rho_norm = std::sqrt(dot(rho.values(), rho.values()));
    if (rho_norm == 0.0) return {ScalarField::zeros(g), 0.0, 0, true};
    if (max_iter <= 0) max_iter = 2 * static_cast<int>(g.cells()) + 100;

    std::vector<double> x(g.cells(), 0.0);
    std::vector<double> r(rho.values().begin(), rho.values().end());
    remove_mean(r);
    std::vector<double> p = r;
    double rr = dot(r, r);

    PoissonSolution best{ScalarField::zeros(g), 1.0, 0, false};
    int it = 0;
    while (it < max_iter) {
        const ScalarField ap_field = apply_operator(ScalarField(g, p));
        const auto ap = ap_field.values();
        const double p_ap = dot(p, ap);
        if (!(p_ap > 0.0)) break;
        const double step = rr / p_ap;
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] += step * p[k];
            r[k] -= step * ap[k];
        }
        remove_mean(r);
        ++it;
        const double rr_new = dot(r, r);
        if (std::sqrt(rr_new) <= 0.5 * tol * rho_norm) {
            std::vector<double> phi = x;
            remove_mean(phi);
            ScalarField candidate(g, std::move(phi));
            const double res = relative_residual(candidate, rho, rho_norm);
            best = {std::move(candidate), res, it, res <= tol};
            if (best.converged) return best;
            // Recurrence drifted from the true residual; restart from x.
            const ScalarField ax = apply_operator(best.phi);
            for (std::size_t k = 0; k < r.size(); ++k) r[k] = rho[k] - ax[k];
            remove_mean(r);
            p = r;
            rr = dot(r, r);
            continue;
        }
        const double beta = rr_new / rr;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
        rr = rr_new;
    }

    std::vector<double> phi = x;
    remove_mean(phi);
    ScalarField candidate(g, std::move(phi));
    const double res = relative_residual(candidate, rho, rho_norm);
    if (res < best.residual_norm || best.iterations == 0) best = {std::move(candidate), res, it, res <= tol};
    best.iterations = it;
    return best;
}

}  // namespace magnetworks

// Optimal traffic flow T = -grad(phi), relay density eta = |T|^alpha, node
// counts and the capacity bound |T| <= K sqrt(eta).
//
// T lives on faces and eta on cells. The cell magnitude |T| is the Euclidean
// norm of the quadratic means of the two opposing face values per axis, so at
// alpha = 2 the node count equals the face-weighted discrete L2 energy of T,
// the inner product in which gradient and divergence are adjoint.
#pragma once

#include <utility>
#include <vector>

#include "magnetworks/fields.hpp"

namespace magnetworks {

struct SolveSnapshot {
    double t = 0.0;
    ScalarField rho;
    ScalarField phi;
    VectorField T;
    ScalarField eta;
    double node_count = 0.0;
    double div_residual = 0.0;   // max |div T - rho|
    double curl_max = 0.0;       // zero in 1D
    double flux_residual = 0.0;  // |boundary flux of T|
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = true;
};

struct RunSummary {
    std::vector<double> times;
    std::vector<double> node_counts;
    double time_integrated_count = 0.0;
};

VectorField traffic_flow(const ScalarField& phi);

// Cell-centered |T|.
ScalarField flow_magnitude(const VectorField& t);

ScalarField relay_density(const VectorField& t, double alpha);

// Throws ContractError for negative densities.
double node_count(const ScalarField& eta);

struct CapacityCheck {
    bool pass = false;
    double max_violation = 0.0;  // max(|T| - K sqrt(eta), 0) over cells
};

CapacityCheck capacity_check(const VectorField& t, const ScalarField& eta, double k = 1.0);

// Trapezoidal rule over (t, N) samples with strictly increasing t.
double time_integrated_count(const std::vector<std::pair<double, double>>& points);

// Solves the Neumann problem for an already balanced rho and derives the
// flow, relay density, node count and diagnostics.
SolveSnapshot solve_snapshot(double t, const ScalarField& rho, double alpha, double tol, int max_iter = 0);

// Fills div_residual, curl_max and flux_residual from snapshot.T and rho.
void measure_diagnostics(SolveSnapshot& snapshot);

}  // namespace magnetworks

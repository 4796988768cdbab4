// Pure-Neumann Poisson problem  -lap(phi) = rho,  grad(phi).n = 0.
//
// The discrete operator is A = -divergence(gradient(.)) on the staggered
// grid: symmetric positive semidefinite, with the constants as nullspace.
// The solution is the mean-zero representative.
#pragma once

#include "magnetworks/fields.hpp"

namespace magnetworks {

struct Compatibility {
    bool pass = false;
    double ratio = 0.0;  // |int rho| / int |rho|, zero for rho == 0
};

Compatibility compatibility_check(const ScalarField& rho, double tol);

ScalarField apply_operator(const ScalarField& phi);

struct PoissonSolution {
    ScalarField phi;
    double residual_norm = 0.0;  // ||A phi - rho||_2 / ||rho||_2, recomputed
    int iterations = 0;
    bool converged = false;
};

// Unpreconditioned conjugate gradients with nullspace projection.
// max_iter = 0 picks a bound from the grid size. Incompatible rho throws
// SolverError; running out of iterations returns the best iterate with
// converged = false.
PoissonSolution solve_neumann(const ScalarField& rho, double tol, int max_iter = 0);

}  // namespace magnetworks

// The 1D model: dT/dx = rho on a segment with T = 0 at both ends, solved by
// direct cumulative integration, plus the closed-form highway example where
// sources and sinks drift with v(x) = x.
#pragma once

#include "magnetworks/fields.hpp"
#include "magnetworks/flow.hpp"
#include "magnetworks/scenario.hpp"

namespace magnetworks {

struct Flow1D {
    GridSpec grid;
    VectorField T;
    ScalarField eta;
    double N = 0.0;
    double closure_defect = 0.0;  // cumulative flow reaching the right end before it is zeroed
};

// Throws SolverError when |T(L)| exceeds closure_tol * max|T|.
Flow1D solve_1d(const ScalarField& rho, double alpha, double closure_tol = 1e-6);

// Potential with -grad(phi) = T on interior faces, mean zero.
ScalarField potential_1d(const VectorField& t);

// Snapshot built from solve_1d, with the same diagnostics as the 2D path.
SolveSnapshot solve_snapshot_1d(double t, const ScalarField& rho, double alpha);

// Sources k1 exp(-(x-3)^2), destinations -k2 exp(-(x-10)^2), both
// normalized on [0, inf).
DensitySpec example2_density();

// Cumulative flow int_0^x rho(s, t) ds of a sum of Gaussians advected by
// v(x) = x, in closed form through erfc.
double characteristics_flow(const DensitySpec& spec, double t, double x);

double example2_flow(double t, double x);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double x_max = 0.0;
};

// N*(t) = int_0^inf T*(x,t)^2 dx by composite Simpson on [0, x_max]; the
// error estimate compares n and 2n panels.
QuadratureResult example2_node_count_with_error(double t, int panels = 20000);
double example2_node_count(double t);

}  // namespace magnetworks

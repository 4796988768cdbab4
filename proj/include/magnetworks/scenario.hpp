// Problem description: densities, mobility, solver parameters, and the
// key/value scenario file that carries them.
#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "magnetworks/fields.hpp"

namespace magnetworks {

// ---------------------------------------------------------------- densities

// weight * exp(-|x - c|^2 / width^2). When `normalized`, the profile is
// scaled to unit mass on the half-line [origin, inf) per axis.
struct GaussianBlob {
    double weight = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    double width = 1.0;
    bool normalized = false;
    double origin_x = 0.0;
    double origin_y = 0.0;
};

// `level` on x_min <= x < x_max (and y_min <= y < y_max in 2D).
struct UniformPatch {
    double level = 0.0;
    double x_min = -std::numeric_limits<double>::infinity();
    double x_max = std::numeric_limits<double>::infinity();
    double y_min = -std::numeric_limits<double>::infinity();
    double y_max = std::numeric_limits<double>::infinity();
};

using DensityTerm = std::variant<GaussianBlob, UniformPatch>;

enum class Sign { Plus, Minus };

struct DensitySpec {
    std::vector<DensityTerm> terms;
    bool unbalanced_ok = false;

    // Throws ValidationError.
    void validate() const;
};

double term_sign_weight(const DensityTerm& term);
double evaluate(const DensityTerm& term, int dim, double x, double y = 0.0);
double evaluate(const DensitySpec& spec, int dim, double x, double y = 0.0);

ScalarField sample_density(const DensitySpec& spec, const GridSpec& grid);

// Non-negative magnitude of the source (Plus) or destination (Minus) terms.
ScalarField sample_density_part(const DensitySpec& spec, const GridSpec& grid, Sign sign);

double erfc(double x);

// k such that the integral of k exp(-((x - center)/width)^2) over
// [origin, inf) is one.
double normalization_constant(double center, double width = 1.0, double origin = 0.0);

struct BalanceResult {
    ScalarField rho;
    double sink_factor = 1.0;
    double imbalance_before = 0.0;  // |int rho| / int |rho|
};

// Rescales the negative part so that the integral vanishes. Fields already
// within `tol` (relative to int |rho|) come back unchanged.
BalanceResult balance_with_factor(const ScalarField& rho, double tol);
ScalarField balance(const ScalarField& rho, double tol);

// ---------------------------------------------------------------- velocity

struct ZeroVelocity {};
struct ConstantVelocity {
    double vx = 0.0;
    double vy = 0.0;
};
// v(x) = x per axis, in absolute coordinates.
struct LinearRadialVelocity {};
struct GridSampledVelocity {
    VectorField field;
    std::string u_file;
    std::string v_file;
};

using VelocitySpec =
    std::variant<ZeroVelocity, ConstantVelocity, LinearRadialVelocity, GridSampledVelocity>;

// Normal velocity components at face centers.
VectorField sample_velocity(const VelocitySpec& v, const GridSpec& grid);
bool is_zero(const VelocitySpec& v);

// ---------------------------------------------------------------- mobility

struct StaticMobility {};
struct DeterministicMobility {
    VelocitySpec velocity;
};
// Diffusion parameters are variance rates (variance grows as t * sigma).
struct BrownianMobility {
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    VelocitySpec drift_plus = ZeroVelocity{};
    VelocitySpec drift_minus = ZeroVelocity{};
};

using MobilityModel = std::variant<StaticMobility, DeterministicMobility, BrownianMobility>;

// ---------------------------------------------------------------- scenario

struct Scenario {
    GridSpec grid;
    DensitySpec density;
    MobilityModel mobility = StaticMobility{};
    double alpha = 2.0;
    double t_start = 0.0;
    double t_end = 0.0;
    int n_steps = 0;
    double poisson_tol = 1e-8;
    double balance_tol = 1e-9;
    int max_iter = 0;  // 0: chosen from the grid size
    double cfl = 0.9;
    double capacity_k = 1.0;
    std::string output_dir;
    int stride = 1;

    bool is_static() const { return std::holds_alternative<StaticMobility>(mobility); }

    // Throws ValidationError naming the violated invariant.
    void validate() const;
};

// `base_dir` resolves relative velocity file paths.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Renders the resolved scenario back into the file schema.
std::string to_text(const Scenario& s);

}  // namespace magnetworks

#include "magnetworks/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magnetworks/error.hpp"

namespace magnetworks {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double x : values)
        if (!std::isfinite(x)) throw ContractError(std::string(what) + ": non-finite entry");
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw ContractError("field grids differ");
}

double max_abs_of(std::span<const double> values) {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

GridSpec GridSpec::line(int nx, double x0, double length) {
    GridSpec g;
    g.dim = 1;
    g.nx = nx;
    g.ny = 1;
    g.x0 = x0;
    g.dx = length / nx;
    g.dy = 1.0;
    g.validate();
    return g;
}

GridSpec GridSpec::rect(int nx, int ny, double x0, double y0, double lx, double ly) {
    GridSpec g;
    g.dim = 2;
    g.nx = nx;
    g.ny = ny;
    g.x0 = x0;
    g.y0 = y0;
    g.dx = lx / nx;
    g.dy = ly / ny;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw ContractError("grid.dim: must be 1 or 2");
    if (nx < 2) throw ContractError("grid.nx: must be >= 2");
    if (dim == 2 && ny < 2) throw ContractError("grid.ny: must be >= 2");
    if (dim == 1 && (ny != 1 || dy != 1.0)) throw ContractError("grid: 1D grid must have ny = 1, dy = 1");
    if (!(dx > 0.0) || !std::isfinite(dx * nx)) throw ContractError("grid.dx: must be > 0 and finite");
    if (!(dy > 0.0) || !std::isfinite(dy * ny)) throw ContractError("grid.dy: must be > 0 and finite");
    if (!std::isfinite(x0) || !std::isfinite(y0)) throw ContractError("grid origin: must be finite");
}

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.cells()) throw ContractError("ScalarField: values length != cell count");
    require_finite(values_, "ScalarField");
}

ScalarField ScalarField::zeros(const GridSpec& grid) { return constant(grid, 0.0); }

ScalarField ScalarField::constant(const GridSpec& grid, double value) {
    return ScalarField(grid, std::vector<double>(grid.cells(), value));
}

double ScalarField::max_abs() const { return max_abs_of(values_); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField ScalarField::operator+(const ScalarField& other) const {
    require_same_grid(grid_, other.grid_);
    std::vector<double> out(values_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] + other.values_[k];
    return ScalarField(grid_, std::move(out));
}

ScalarField ScalarField::operator-(const ScalarField& other) const {
    require_same_grid(grid_, other.grid_);
    std::vector<double> out(values_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = values_[k] - other.values_[k];
    return ScalarField(grid_, std::move(out));
}

ScalarField ScalarField::operator*(double s) const {
    std::vector<double> out(values_);
    for (double& x : out) x *= s;
    return ScalarField(grid_, std::move(out));
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(GridSpec grid, std::vector<double> u, std::vector<double> v)
    : grid_(grid), u_(std::move(u)), v_(std::move(v)) {
    grid_.validate();
    if (u_.size() != grid_.x_faces()) throw ContractError("VectorField: u length != x-face count");
    if (v_.size() != grid_.y_faces()) throw ContractError("VectorField: v length != y-face count");
    require_finite(u_, "VectorField.u");
    require_finite(v_, "VectorField.v");
}

VectorField VectorField::zeros(const GridSpec& grid) {
    return VectorField(grid, std::vector<double>(grid.x_faces(), 0.0),
                       std::vector<double>(grid.y_faces(), 0.0));
}

bool VectorField::zero_flux() const {
    for (int j = 0; j < grid_.ny; ++j)
        if (u_at(0, j) != 0.0 || u_at(grid_.nx, j) != 0.0) return false;
    if (grid_.dim == 2)
        for (int i = 0; i < grid_.nx; ++i)
            if (v_at(i, 0) != 0.0 || v_at(i, grid_.ny) != 0.0) return false;
    return true;
}

double VectorField::max_abs() const { return std::max(max_abs_of(u_), max_abs_of(v_)); }

VectorField VectorField::operator+(const VectorField& other) const {
    require_same_grid(grid_, other.grid_);
    std::vector<double> u(u_.size()), v(v_.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = u_[k] + other.u_[k];
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = v_[k] + other.v_[k];
    return VectorField(grid_, std::move(u), std::move(v));
}

VectorField VectorField::operator-(const VectorField& other) const { return *this + other * -1.0; }

VectorField VectorField::operator*(double s) const {
    std::vector<double> u(u_), v(v_);
    for (double& x : u) x *= s;
    for (double& x : v) x *= s;
    return VectorField(grid_, std::move(u), std::move(v));
}

double NodeField::max_abs() const { return max_abs_of(values); }

// ---------------------------------------------------------------- operators

ScalarField divergence(const VectorField& t) {
    const GridSpec& g = t.grid();
    std::vector<double> out(g.cells());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double d = (t.u_at(i + 1, j) - t.u_at(i, j)) / g.dx;
            if (g.dim == 2) d += (t.v_at(i, j + 1) - t.v_at(i, j)) / g.dy;
            out[g.cell(i, j)] = d;
        }
    }
    return ScalarField(g, std::move(out));
}

VectorField gradient(const ScalarField& phi) {
    const GridSpec& g = phi.grid();
    std::vector<double> u(g.x_faces(), 0.0);
    std::vector<double> v(g.y_faces(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            u[g.x_face(i, j)] = (phi.at(i, j) - phi.at(i - 1, j)) / g.dx;
    if (g.dim == 2)
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                v[g.y_face(i, j)] = (phi.at(i, j) - phi.at(i, j - 1)) / g.dy;
    return VectorField(g, std::move(u), std::move(v));
}

NodeField curl(const VectorField& t) {
    const GridSpec& g = t.grid();
    if (g.dim != 2) throw ContractError("curl: defined for 2D fields only");
    NodeField out{g, std::vector<double>(static_cast<std::size_t>(g.nx - 1) * (g.ny - 1))};
    std::size_t k = 0;
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double dvdx = (t.v_at(i, j) - t.v_at(i - 1, j)) / g.dx;
            const double dudy = (t.u_at(i, j) - t.u_at(i, j - 1)) / g.dy;
            out.values[k++] = dvdx - dudy;
        }
    }
    return out;
}

double integrate(const ScalarField& f) {
    double sum = 0.0;
    for (double x : f.values()) sum += x;
    return sum * f.grid().cell_volume();
}

double boundary_flux(const VectorField& t) {
    const GridSpec& g = t.grid();
    double flux = 0.0;
    for (int j = 0; j < g.ny; ++j) flux += (t.u_at(g.nx, j) - t.u_at(0, j)) * g.dy;
    if (g.dim == 2)
        for (int i = 0; i < g.nx; ++i) flux += (t.v_at(i, g.ny) - t.v_at(i, 0)) * g.dx;
    return flux;
}

double inner_product(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid());
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sum += a[k] * b[k];
    return sum * a.grid().cell_volume();
}

}  // namespace magnetworks

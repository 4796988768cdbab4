// Uniform-grid scalar and vector fields with mimetic difference operators.
//
// Layout is staggered: scalars live at cell centers, vectors are stored as
// normal components on cell faces (u on x-normal faces, v on y-normal faces).
// A 1D grid is the degenerate case ny = 1, dy = 1 with no y-faces, so every
// operator runs the same loops in both dimensions.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace magnetworks {

struct GridSpec {
    int dim = 1;
    int nx = 0;
    int ny = 1;
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 0.0;
    double dy = 1.0;

    static GridSpec line(int nx, double x0, double length);
    static GridSpec rect(int nx, int ny, double x0, double y0, double lx, double ly);

    // Throws ContractError when an invariant is broken.
    void validate() const;

    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t x_faces() const { return static_cast<std::size_t>(nx + 1) * ny; }
    std::size_t y_faces() const {
        return dim == 2 ? static_cast<std::size_t>(nx) * (ny + 1) : 0;
    }
    double lx() const { return nx * dx; }
    double ly() const { return dim == 2 ? ny * dy : 0.0; }
    double cell_volume() const { return dx * dy; }

    std::size_t cell(int i, int j = 0) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t x_face(int i, int j = 0) const {
        return static_cast<std::size_t>(j) * (nx + 1) + i;
    }
    std::size_t y_face(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    double cell_x(int i) const { return x0 + (i + 0.5) * dx; }
    double cell_y(int j) const { return dim == 2 ? y0 + (j + 0.5) * dy : 0.0; }
    double node_x(int i) const { return x0 + i * dx; }
    double node_y(int j) const { return dim == 2 ? y0 + j * dy : 0.0; }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class ScalarField {
public:
    ScalarField(GridSpec grid, std::vector<double> values);

    static ScalarField zeros(const GridSpec& grid);
    static ScalarField constant(const GridSpec& grid, double value);

    // f(x, y) sampled at cell centers (y = 0 in 1D).
    template <class F>
    static ScalarField sample(const GridSpec& grid, F&& f) {
        std::vector<double> values(grid.cells());
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                values[grid.cell(i, j)] = f(grid.cell_x(i), grid.cell_y(j));
        return ScalarField(grid, std::move(values));
    }

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    double at(int i, int j = 0) const { return values_[grid_.cell(i, j)]; }

    double max_abs() const;
    double min() const;
    double max() const;

    ScalarField operator+(const ScalarField& other) const;
    ScalarField operator-(const ScalarField& other) const;
    ScalarField operator*(double s) const;
    friend ScalarField operator*(double s, const ScalarField& f) { return f * s; }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

class VectorField {
public:
    VectorField(GridSpec grid, std::vector<double> u, std::vector<double> v = {});

    static VectorField zeros(const GridSpec& grid);

    // Normal components sampled at face centers: fu(x, y) on x-faces,
    // fv(x, y) on y-faces.
    template <class FU, class FV>
    static VectorField sample(const GridSpec& grid, FU&& fu, FV&& fv) {
        std::vector<double> u(grid.x_faces());
        std::vector<double> v(grid.y_faces());
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i <= grid.nx; ++i)
                u[grid.x_face(i, j)] = fu(grid.node_x(i), grid.cell_y(j));
        if (grid.dim == 2)
            for (int j = 0; j <= grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    v[grid.y_face(i, j)] = fv(grid.cell_x(i), grid.node_y(j));
        return VectorField(grid, std::move(u), std::move(v));
    }

    const GridSpec& grid() const { return grid_; }
    std::span<const double> u() const { return u_; }
    std::span<const double> v() const { return v_; }
    double u_at(int i, int j = 0) const { return u_[grid_.x_face(i, j)]; }
    double v_at(int i, int j) const { return v_[grid_.y_face(i, j)]; }

    // True when every boundary face carries zero normal component.
    bool zero_flux() const;
    double max_abs() const;

    VectorField operator+(const VectorField& other) const;
    VectorField operator-(const VectorField& other) const;
    VectorField operator*(double s) const;
    friend VectorField operator*(double s, const VectorField& f) { return f * s; }

private:
    GridSpec grid_;
    std::vector<double> u_;
    std::vector<double> v_;
};

// Scalar samples at the interior grid nodes, (nx-1)*(ny-1) of them.
struct NodeField {
    GridSpec grid;
    std::vector<double> values;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(j - 1) * (grid.nx - 1) + (i - 1)];
    }
    double max_abs() const;
};

ScalarField divergence(const VectorField& t);

// Interior faces hold one-sided differences; boundary faces are zero.
VectorField gradient(const ScalarField& phi);

// dv/dx - du/dy at interior nodes. 2D only.
NodeField curl(const VectorField& t);

// Midpoint rule over the cells.
double integrate(const ScalarField& f);

// Outward normal flux summed over the domain boundary.
double boundary_flux(const VectorField& t);

// Euclidean inner product weighted by the cell volume.
double inner_product(const ScalarField& a, const ScalarField& b);

}  // namespace magnetworks

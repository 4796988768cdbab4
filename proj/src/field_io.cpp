#include "magnetworks/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "magnetworks/error.hpp"

namespace magnetworks {

namespace {

void write_row(std::ostream& os, double x, double y, double value) {
    os << format_number(x) << ',' << format_number(y) << ',' << format_number(value) << '\n';
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

void write_csv(std::ostream& os, const ScalarField& f) {
    const GridSpec& g = f.grid();
    os << "x,y,value\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) write_row(os, g.cell_x(i), g.cell_y(j), f.at(i, j));
}

void write_csv(std::ostream& os, const VectorField& t, FaceAxis axis) {
    const GridSpec& g = t.grid();
    os << "x,y,value\n";
    if (axis == FaceAxis::X) {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) write_row(os, g.node_x(i), g.cell_y(j), t.u_at(i, j));
    } else {
        if (g.dim != 2) throw ContractError("write_csv: 1D field has no y-faces");
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) write_row(os, g.cell_x(i), g.node_y(j), t.v_at(i, j));
    }
}

std::vector<double> read_face_csv(std::istream& is, const GridSpec& grid, FaceAxis axis) {
    std::vector<std::pair<double, double>> expected;
    if (axis == FaceAxis::X) {
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i <= grid.nx; ++i) expected.emplace_back(grid.node_x(i), grid.cell_y(j));
    } else {
        if (grid.dim != 2) throw ContractError("read_face_csv: 1D grid has no y-faces");
        for (int j = 0; j <= grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) expected.emplace_back(grid.cell_x(i), grid.node_y(j));
    }
    const double scale = std::max({1.0, std::abs(grid.x0) + grid.lx(), std::abs(grid.y0) + grid.ly()});

    std::string line;
    if (!std::getline(is, line) || line != "x,y,value")
        throw ValidationError("face csv: expected header 'x,y,value'");
    std::vector<double> values;
    values.reserve(expected.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (values.size() == expected.size()) throw ValidationError("face csv: more rows than faces");
        std::istringstream row(line);
        double x = 0, y = 0, value = 0;
        char c1 = 0, c2 = 0;
        if (!(row >> x >> c1 >> y >> c2 >> value) || c1 != ',' || c2 != ',')
            throw ValidationError("face csv: malformed row " + std::to_string(values.size() + 2));
        const auto [ex, ey] = expected[values.size()];
        if (!close(x, ex, scale) || !close(y, ey, scale))
            throw ValidationError("face csv: coordinates of row " + std::to_string(values.size() + 2) +
                                  " do not match the scenario grid");
        values.push_back(value);
    }
    if (values.size() != expected.size()) throw ValidationError("face csv: fewer rows than faces");
    return values;
}

}  // namespace magnetworks

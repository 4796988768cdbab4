// CSV dumps of fields: header `x,y,value`, row-major (x fastest), LF endings,
// 17 significant digits. A vector field is written as two files, one per
// face family.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magnetworks/fields.hpp"

namespace magnetworks {

enum class FaceAxis { X, Y };

std::string format_number(double x);

void write_csv(std::ostream& os, const ScalarField& f);
void write_csv(std::ostream& os, const VectorField& t, FaceAxis axis);

// Reads one face family back, checking that the coordinates match `grid`.
std::vector<double> read_face_csv(std::istream& is, const GridSpec& grid, FaceAxis axis);

}  // namespace magnetworks

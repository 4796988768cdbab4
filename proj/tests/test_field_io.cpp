#include <doctest.h>

#include <sstream>

#include "magnetworks/error.hpp"
#include "magnetworks/field_io.hpp"

using namespace magnetworks;

TEST_CASE("scalar csv layout") {
    const GridSpec g = GridSpec::rect(2, 2, 0.0, 0.0, 1.0, 1.0);
    std::ostringstream os;
    write_csv(os, ScalarField(g, {1.0, 2.0, 3.0, 0.1}));
    CHECK(os.str() ==
          "x,y,value\n"
          "0.25,0.25,1\n"
          "0.75,0.25,2\n"
          "0.25,0.75,3\n"
          "0.75,0.75,0.10000000000000001\n");
}

TEST_CASE("1D fields write y = 0 and have no y-faces") {
    const GridSpec g = GridSpec::line(2, 0.0, 1.0);
    std::ostringstream os;
    write_csv(os, VectorField(g, {0.0, 0.5, 0.0}), FaceAxis::X);
    CHECK(os.str() == "x,y,value\n0,0,0\n0.5,0,0.5\n1,0,0\n");
    std::ostringstream other;
    CHECK_THROWS_AS(write_csv(other, VectorField::zeros(g), FaceAxis::Y), ContractError);
}

TEST_CASE("face csv reads back what was written") {
    const GridSpec g = GridSpec::rect(3, 2, -1.0, 0.5, 1.5, 1.0);
    const VectorField t = VectorField::sample(g, [](double x, double y) { return x * y + 1.0 / 3.0; },
                                              [](double x, double y) { return x - y; });
    for (FaceAxis axis : {FaceAxis::X, FaceAxis::Y}) {
        std::stringstream ss;
        write_csv(ss, t, axis);
        const std::vector<double> back = read_face_csv(ss, g, axis);
        const auto original = axis == FaceAxis::X ? t.u() : t.v();
        REQUIRE(back.size() == original.size());
        for (std::size_t k = 0; k < back.size(); ++k) CHECK(back[k] == original[k]);
    }
}

TEST_CASE("face csv rejects a grid mismatch") {
    const GridSpec g = GridSpec::rect(3, 2, 0.0, 0.0, 1.0, 1.0);
    std::stringstream ss;
    write_csv(ss, VectorField::zeros(g), FaceAxis::X);
    CHECK_THROWS_AS(read_face_csv(ss, GridSpec::rect(3, 2, 0.0, 0.0, 2.0, 1.0), FaceAxis::X), ValidationError);
    std::stringstream bad("x,y,value\n0,0.25,1\n");
    CHECK_THROWS_AS(read_face_csv(bad, g, FaceAxis::X), ValidationError);
}

TEST_CASE("format_number") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 12.0) == "0.083333333333333329");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_number(x)) == x);
}

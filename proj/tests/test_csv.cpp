#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ebsim/csv.hpp"

using ebsim::Band;
using ebsim::BandPoint;
using ebsim::Curve;
using ebsim::CurvePoint;

TEST_CASE("curve formatting contract", "[csv]") {
    Curve curve;
    curve.points.push_back(CurvePoint{0.0, 1.0, 0.5, false});
    REQUIRE(ebsim::curve_csv(curve) ==
            "angle_rad,concurrence,negativity,is_eb\n0.000000000,1.000000000,0.500000000,0\n");

    curve.points.push_back(CurvePoint{-0.25, 0.1225, 0.061250001, true});
    const std::string text = ebsim::curve_csv(curve);
    REQUIRE(text.find("-0.250000000,0.122500000,0.061250001,1\n") != std::string::npos);
}

TEST_CASE("precision flag controls decimal places", "[csv]") {
    Curve curve;
    curve.points.push_back(CurvePoint{0.5, 0.123456789123, 0.0, false});
    REQUIRE(ebsim::curve_csv(curve, 3).find("0.500,0.123,0.000,0\n") != std::string::npos);
    REQUIRE(ebsim::curve_csv(curve, 12).find("0.123456789123") != std::string::npos);
}

TEST_CASE("band formatting", "[csv]") {
    Band band;
    band.points.push_back(BandPoint{0.0, 0.1, 0.3});
    band.points.push_back(BandPoint{0.1, 0.0, 0.2});
    const std::string text = ebsim::band_csv(band);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    REQUIRE(line == "angle_rad,c_min,c_max");
    while (std::getline(lines, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        const double lo = std::stod(line.substr(first + 1, second - first - 1));
        const double hi = std::stod(line.substr(second + 1));
        REQUIRE(lo <= hi);
    }
}

TEST_CASE("round trip preserves values to the stated precision", "[csv]") {
    Curve curve;
    curve.points.push_back(CurvePoint{-0.599999999, 0.122500001, 0.030625001, false});
    curve.points.push_back(CurvePoint{0.392699081, 0.0, 0.0, true});
    const std::string text = ebsim::curve_csv(curve, 9);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string field;
        std::getline(fields, field, ',');
        REQUIRE(std::abs(std::stod(field) - curve.points[i].angle) <= 5e-10);
        std::getline(fields, field, ',');
        REQUIRE(std::abs(std::stod(field) - curve.points[i].concurrence) <= 5e-10);
        std::getline(fields, field, ',');
        REQUIRE(std::abs(std::stod(field) - curve.points[i].negativity) <= 5e-10);
        std::getline(fields, field, ',');
        REQUIRE(field == (curve.points[i].eb ? "1" : "0"));
        ++i;
    }
    REQUIRE(i == curve.points.size());
}

TEST_CASE("identical input formats identically", "[csv]") {
    Curve curve;
    for (int i = 0; i < 50; ++i)
        curve.points.push_back(
            CurvePoint{-0.6 + 0.01 * i, 0.1225 * (i % 7) / 6.0, 1e-12 * i, i % 3 == 0});
    REQUIRE(ebsim::curve_csv(curve) == ebsim::curve_csv(curve));
}

TEST_CASE("empty data rejected", "[csv]") {
    REQUIRE_THROWS_AS(ebsim::curve_csv(Curve{}), std::invalid_argument);
    REQUIRE_THROWS_AS(ebsim::band_csv(Band{}), std::invalid_argument);
}

TEST_CASE("atomic text writes", "[csv]") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "ebsim_csv_atomic.csv";
    ebsim::write_text_atomic(path.string(), "a,b\n1,2\n");
    {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        REQUIRE(buf.str() == "a,b\n1,2\n");
    }
    // overwrite keeps the new content, and no temp file is left behind
    ebsim::write_text_atomic(path.string(), "a,b\n3,4\n");
    {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        REQUIRE(buf.str() == "a,b\n3,4\n");
    }
    REQUIRE_FALSE(fs::exists(path.string() + ".tmp"));
    fs::remove(path);
}

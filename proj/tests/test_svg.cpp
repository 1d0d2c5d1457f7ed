#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hyres/svg.hpp"

using namespace hyres;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++n;
    return n;
}

} // namespace

TEST_CASE("svg has one polyline with exactly N points", "[svg]") {
    const fs::path p = fs::temp_directory_path() / "hyres_test_plot.svg";
    emit_curve_svg({{0.0, 1.0}, {0.5, 0.4}, {1.0, 0.2}}, "x", "y", p.string());
    const std::string svg = slurp(p);
    CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    REQUIRE(count(svg, "<polyline") == 1);
    const std::size_t start = svg.find("points=\"", svg.find("<polyline"));
    const std::size_t end = svg.find('"', start + 8);
    const std::string pts = svg.substr(start + 8, end - start - 8);
    CHECK(count(pts, ",") == 3);
    CHECK(count(pts, " ") == 2);
    fs::remove(p);
}

TEST_CASE("svg output is byte-deterministic", "[svg]") {
    const fs::path p1 = fs::temp_directory_path() / "hyres_test_a.svg";
    const fs::path p2 = fs::temp_directory_path() / "hyres_test_b.svg";
    const std::vector<std::pair<double, double>> pts{{0.0, 0.3}, {1.0, 0.7}, {2.0, 0.1}};
    emit_curve_svg(pts, "freq", "frc", p1.string());
    emit_curve_svg(pts, "freq", "frc", p2.string());
    CHECK(slurp(p1) == slurp(p2));
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("collapsed y-range draws a mid-height flat line", "[svg]") {
    const fs::path p = fs::temp_directory_path() / "hyres_test_flat.svg";
    emit_curve_svg({{0.0, 0.5}, {1.0, 0.5}, {2.0, 0.5}}, "x", "y", p.string());
    const std::string svg = slurp(p);
    // mid-height of the plot area: mt + ph/2 = 20 + 530/2 = 285
    CHECK(svg.find(",285") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    fs::remove(p);
}

TEST_CASE("fewer than two points is rejected", "[svg]") {
    CHECK_THROWS_AS(emit_curve_svg({{0.0, 0.0}}, "x", "y", "/tmp/never.svg"), validation_error);
}

TEST_CASE("axis ticks at five even divisions", "[svg]") {
    const fs::path p = fs::temp_directory_path() / "hyres_test_ticks.svg";
    emit_curve_svg({{0.0, 0.0}, {1.0, 1.0}}, "x", "y", p.string());
    const std::string svg = slurp(p);
    // 6 tick marks + 6 labels per axis, plus the 2 axis lines themselves
    CHECK(count(svg, "<line") == 2 + 12);
    CHECK(count(svg, "<text") == 12 + 2);
    fs::remove(p);
}

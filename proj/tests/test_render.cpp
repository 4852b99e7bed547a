#include <doctest.h>

#include <string>

#include "hids/errors.hpp"
#include "hids/render.hpp"

using namespace hids;

namespace {

SomModel labelled_model(int side) {
    SomModel som;
    som.grid_side = side;
    som.input_dim = 2;
    som.weights.assign(static_cast<std::size_t>(side) * side * 2, 0.0);
    som.labels.assign(static_cast<std::size_t>(side) * side, AttackClass::DoS);
    return som;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("text rendering uses the figure glyphs") {
    CHECK(class_glyph(AttackClass::Probe) == 'o');
    CHECK(class_glyph(AttackClass::DoS) == '+');
    CHECK(class_glyph(AttackClass::R2L) == '^');
    CHECK(class_glyph(AttackClass::U2R) == 'x');

    SomModel som = labelled_model(10);
    std::string grid = render_grid_text(som);
    // 10 rows of 10 glyphs.
    CHECK(count_occurrences(grid, "\n") == 10);
    CHECK(grid.size() == 110);
    CHECK(count_occurrences(grid, "+") == 100);  // all-DoS model

    som.labels[0] = AttackClass::Probe;
    som.labels[11] = AttackClass::U2R;
    grid = render_grid_text(som);
    CHECK(grid[0] == 'o');
    CHECK(grid[12] == 'x');  // row 1, col 1 (11 chars per row)

    SomModel bare = labelled_model(4);
    bare.labels.clear();
    CHECK_THROWS_AS(render_grid_text(bare), DataError);
}

TEST_CASE("SVG rendering emits one well-formed shape per neuron") {
    SomModel som = labelled_model(5);
    som.labels.assign(25, AttackClass::DoS);
    som.labels[3] = AttackClass::Probe;
    som.labels[7] = AttackClass::R2L;
    som.labels[12] = AttackClass::U2R;

    const std::string svg = render_grid_svg(som);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(count_occurrences(svg, "<svg") == 1);
    CHECK(count_occurrences(svg, "</svg>") == 1);
    const std::size_t shapes =
        count_occurrences(svg, "<circle") + count_occurrences(svg, "<path");
    CHECK(shapes == 25);
    CHECK(count_occurrences(svg, "class=\"probe\"") == 1);
    CHECK(count_occurrences(svg, "class=\"r2l\"") == 1);
    CHECK(count_occurrences(svg, "class=\"u2r\"") == 1);
    CHECK(count_occurrences(svg, "class=\"dos\"") == 22);

    SomModel bare = labelled_model(5);
    bare.labels.clear();
    CHECK_THROWS_AS(render_grid_svg(bare), DataError);
}

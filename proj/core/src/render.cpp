#include "hids/render.hpp"

#include <cstdio>

#include "hids/errors.hpp"

namespace hids {

char class_glyph(AttackClass c) {
    switch (c) {
        case AttackClass::Probe: return 'o';
        case AttackClass::DoS: return '+';
        case AttackClass::R2L: return '^';
        case AttackClass::U2R: return 'x';
    }
    return '?';
}

std::string render_grid_text(const SomModel& som) {
    if (!som.labelled()) throw DataError("render-grid: model is not labelled");
    std::string out;
    out.reserve(static_cast<std::size_t>(som.grid_side) * (som.grid_side + 1));
    for (int y = 0; y < som.grid_side; ++y) {
        for (int x = 0; x < som.grid_side; ++x)
            out += class_glyph(som.labels[y * som.grid_side + x]);
        out += '\n';
    }
    return out;
}

namespace {

constexpr double kCell = 40.0;
constexpr double kMargin = 20.0;

void append_shape(std::string& out, AttackClass c, double cx, double cy) {
    char buf[360];
    const double r = kCell * 0.3;
    switch (c) {
        case AttackClass::Probe:
            std::snprintf(buf, sizeof buf,
                          "  <circle class=\"probe\" cx=\"%.1f\" cy=\"%.1f\" r=\"%.1f\" "
                          "fill=\"none\" stroke=\"black\"/>\n",
                          cx, cy, r);
            break;
        case AttackClass::DoS:
            std::snprintf(buf, sizeof buf,
                          "  <path class=\"dos\" d=\"M %.1f %.1f L %.1f %.1f M %.1f %.1f L %.1f "
                          "%.1f\" stroke=\"black\"/>\n",
                          cx - r, cy, cx + r, cy, cx, cy - r, cx, cy + r);
            break;
        case AttackClass::R2L:
            std::snprintf(buf, sizeof buf,
                          "  <path class=\"r2l\" d=\"M %.1f %.1f L %.1f %.1f L %.1f %.1f Z\" "
                          "fill=\"none\" stroke=\"black\"/>\n",
                          cx, cy - r, cx - r, cy + r, cx + r, cy + r);
            break;
        case AttackClass::U2R:
            std::snprintf(buf, sizeof buf,
                          "  <path class=\"u2r\" d=\"M %.1f %.1f L %.1f %.1f M %.1f %.1f L %.1f "
                          "%.1f\" stroke=\"black\"/>\n",
                          cx - r, cy - r, cx + r, cy + r, cx - r, cy + r, cx + r, cy - r);
            break;
    }
    out += buf;
}

}  // namespace

std::string render_grid_svg(const SomModel& som) {
    if (!som.labelled()) throw DataError("render-grid: model is not labelled");
    const double size = 2.0 * kMargin + kCell * som.grid_side;
    std::string out;
    char buf[256];
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  size, size, size, size);
    out += buf;
    for (int y = 0; y < som.grid_side; ++y) {
        for (int x = 0; x < som.grid_side; ++x) {
            const double cx = kMargin + (x + 0.5) * kCell;
            const double cy = kMargin + (y + 0.5) * kCell;
            append_shape(out, som.labels[y * som.grid_side + x], cx, cy);
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace hids

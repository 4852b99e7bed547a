#ifndef HIDS_RENDER_HPP
#define HIDS_RENDER_HPP

#include <string>

#include "hids/som.hpp"

namespace hids {

// Grid glyphs: o = Probe, + = DoS, ^ = R2L, x = U2R.
char class_glyph(AttackClass c);

// grid_side rows of grid_side glyphs, row y = 0 first. Model must be
// labelled (throws DataError otherwise).
std::string render_grid_text(const SomModel& som);

// Standalone SVG with one shape per neuron: circle (Probe), plus (DoS),
// triangle (R2L), diagonal cross (U2R).
std::string render_grid_svg(const SomModel& som);

}  // namespace hids

#endif

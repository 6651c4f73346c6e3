#pragma once

#include <optional>
#include <string>

#include "spartun/scene.hpp"
#include "spartun/situated.hpp"

namespace spartun {

struct RenderOptions {
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  double wedge_radius_m = 2.5;
};

// Bird-eye SVG: one polygon per object footprint with its label, a scene
// center marker, and (when a situation is given) the standing point, one
// orientation arrow, and the four direction-bin wedges. Byte-deterministic
// for fixed inputs.
std::string render_svg(const Scene& scene,
                       const std::optional<Situation>& situation = std::nullopt,
                       const RenderOptions& options = {});

}  // namespace spartun

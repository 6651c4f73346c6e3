#include "spartun/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace spartun {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v + 0.0);  // avoid "-0.00"
  if (std::strcmp(buf, "-0.00") == 0) return "0.00";
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Mapper {
  geom::Vec2 lo, hi;
  double width, height, margin;
  double scale;

  Mapper(const geom::Vec2& lo_, const geom::Vec2& hi_,
         const RenderOptions& opt)
      : lo(lo_), hi(hi_), width(opt.width), height(opt.height),
        margin(opt.margin) {
    const double span_x = std::max(hi.x - lo.x, 1e-6);
    const double span_y = std::max(hi.y - lo.y, 1e-6);
    scale = std::min((width - 2 * margin) / span_x,
                     (height - 2 * margin) / span_y);
  }

  double x(double wx) const {
    return margin + (wx - lo.x) * scale +
           (width - 2 * margin - (hi.x - lo.x) * scale) / 2.0;
  }
  // SVG y grows downward.
  double y(double wy) const {
    return height - margin - (wy - lo.y) * scale -
           (height - 2 * margin - (hi.y - lo.y) * scale) / 2.0;
  }
};

// Unit facing vector for a yaw measured counterclockwise from world +y.
geom::Vec2 yaw_dir(double yaw_deg) {
  const double rad = (yaw_deg + 90.0) * M_PI / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

const char* kWedgeNames[4] = {"front", "right", "back", "left"};
// Rotation-angle spans, clockwise from facing.
const double kWedgeStart[4] = {-45.0, 45.0, 135.0, 225.0};

}  // namespace

std::string render_svg(const Scene& scene,
                       const std::optional<Situation>& situation,
                       const RenderOptions& options) {
  geom::Vec2 lo{1e30, 1e30};
  geom::Vec2 hi{-1e30, -1e30};
  auto grow = [&](const geom::Vec2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  };
  for (const auto& o : scene.objects) {
    for (const auto& c : o.obb.corners2d()) grow(c);
  }
  if (situation) {
    grow(situation->stand.xy());
    const geom::Vec2 s = situation->stand.xy();
    grow({s.x - options.wedge_radius_m, s.y - options.wedge_radius_m});
    grow({s.x + options.wedge_radius_m, s.y + options.wedge_radius_m});
  }
  const Mapper map(lo, hi, options);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(options.width)
      << "\" height=\"" << fmt(options.height) << "\" viewBox=\"0 0 "
      << fmt(options.width) << " " << fmt(options.height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#fbfbf8\"/>\n";

  if (situation) {
    const geom::Vec2 stand = situation->stand.xy();
    const double cx = map.x(stand.x);
    const double cy = map.y(stand.y);
    const double r = options.wedge_radius_m * map.scale;
    static const char* fills[4] = {"#d5e8d4", "#dae8fc", "#f8cecc", "#ffe6cc"};
    for (int w = 0; w < 4; ++w) {
      svg << "<path class=\"wedge wedge-" << kWedgeNames[w] << "\" d=\"M "
          << fmt(cx) << " " << fmt(cy);
      // Fan approximation of the 90-degree arc, 5-degree steps.
      for (int step = 0; step <= 18; ++step) {
        const double rot = kWedgeStart[w] + 5.0 * step;  // clockwise from facing
        const double world = (situation->yaw + 90.0 - rot) * M_PI / 180.0;
        const double px = cx + r * std::cos(world);
        const double py = cy - r * std::sin(world);
        svg << " L " << fmt(px) << " " << fmt(py);
      }
      svg << " Z\" fill=\"" << fills[w]
          << "\" fill-opacity=\"0.45\" stroke=\"none\"/>\n";
    }
  }

  for (const auto& o : scene.objects) {
    const auto corners = o.obb.corners2d();
    // corners2d order is (-,-),(-,+),(+,-),(+,+); perimeter order swaps the
    // last two.
    const geom::Vec2 ring[4] = {corners[0], corners[1], corners[3], corners[2]};
    svg << "<polygon class=\"object\" points=\"";
    for (int i = 0; i < 4; ++i) {
      if (i) svg << " ";
      svg << fmt(map.x(ring[i].x)) << "," << fmt(map.y(ring[i].y));
    }
    svg << "\" fill=\"#e8e8f0\" stroke=\"#555577\" stroke-width=\"1\"/>\n";
    const geom::Vec2 c = footprint2d(o).center();
    svg << "<text x=\"" << fmt(map.x(c.x)) << "\" y=\"" << fmt(map.y(c.y))
        << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">"
        << escape(o.id) << "</text>\n";
  }

  const geom::Vec2 center = scene_center(scene);
  svg << "<circle class=\"scene-center\" cx=\"" << fmt(map.x(center.x))
      << "\" cy=\"" << fmt(map.y(center.y))
      << "\" r=\"4\" fill=\"none\" stroke=\"#cc3333\" stroke-width=\"2\"/>\n";

  if (situation) {
    const geom::Vec2 stand = situation->stand.xy();
    const double cx = map.x(stand.x);
    const double cy = map.y(stand.y);
    svg << "<circle class=\"stand\" cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy)
        << "\" r=\"5\" fill=\"#2266cc\"/>\n";

    const geom::Vec2 dir = yaw_dir(situation->yaw);
    const double len = 0.9 * options.wedge_radius_m * map.scale;
    const double tx = cx + dir.x * len;
    const double ty = cy - dir.y * len;
    // Shaft plus a two-segment head, one element total.
    const double hrad = (situation->yaw + 90.0) * M_PI / 180.0;
    const double head = 10.0;
    const double lx = tx - head * std::cos(hrad - 0.5);
    const double ly = ty + head * std::sin(hrad - 0.5);
    const double rx = tx - head * std::cos(hrad + 0.5);
    const double ry = ty + head * std::sin(hrad + 0.5);
    svg << "<path class=\"arrow\" d=\"M " << fmt(cx) << " " << fmt(cy) << " L "
        << fmt(tx) << " " << fmt(ty) << " M " << fmt(lx) << " " << fmt(ly)
        << " L " << fmt(tx) << " " << fmt(ty) << " L " << fmt(rx) << " "
        << fmt(ry) << "\" fill=\"none\" stroke=\"#2266cc\" stroke-width=\"2\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace spartun

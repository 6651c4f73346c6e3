#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "spartun/scene.hpp"
#include "spartun/situated.hpp"

namespace fixtures {

// Living-room layout used across the suites: a sofa near the middle-bottom,
// tv on the far wall, table between sofa and cabinet (so walking to the
// cabinet passes it), window on the left, wall at the back.
inline spartun::Scene living_room() {
  using spartun::Object3D;
  spartun::Scene scene;
  scene.id = "scene_livingroom";

  auto add = [&](const std::string& label, int n, double cx, double cy,
                 double cz, double ex, double ey, double ez, double yaw) {
    Object3D o;
    o.label = label;
    o.id = label + "_" + std::to_string(n);
    o.obb.center = {cx, cy, cz};
    o.obb.extents = {ex, ey, ez};
    o.obb.yaw = yaw;
    scene.objects.push_back(o);
    return &scene.objects.back();
  };

  auto* sofa = add("sofa", 1, 0.0, 0.0, 0.4, 1.0, 0.4, 0.4, 0.0);
  sofa->attributes["color"] = "white";
  sofa->affordances = {"sitting"};

  auto* tv = add("tv", 1, 0.0, 3.0, 1.0, 0.6, 0.1, 0.4, 0.0);
  tv->attributes["color"] = "black";
  tv->affordances = {"watching"};
  tv->relations = {"above the table_1"};

  auto* table = add("table", 1, 1.2, 1.5, 0.35, 0.5, 0.5, 0.35, 0.0);
  table->attributes["color"] = "brown";
  table->affordances = {"placing items"};

  auto* cabinet = add("kitchen cabinet", 1, 2.5, 3.0, 0.9, 0.4, 0.3, 0.9, 0.0);
  cabinet->attributes["color"] = "gray";
  cabinet->affordances = {"storing"};

  add("window", 1, -2.8, 1.0, 1.5, 0.1, 0.8, 0.6, 0.0);
  add("wall", 1, 0.0, -3.2, 1.5, 3.0, 0.1, 1.5, 0.0);
  return scene;
}

// Minimal two-object scene for degenerate-path tests.
inline spartun::Scene tiny_scene() {
  spartun::Scene scene;
  scene.id = "scene_tiny";
  spartun::Object3D a;
  a.label = "box";
  a.id = "box_1";
  a.obb.center = {0.0, 0.0, 0.3};
  a.obb.extents = {0.4, 0.4, 0.3};
  scene.objects.push_back(a);
  spartun::Object3D b;
  b.label = "crate";
  b.id = "crate_1";
  b.obb.center = {2.0, 1.0, 0.5};
  b.obb.extents = {0.3, 0.3, 0.5};
  scene.objects.push_back(b);
  return scene;
}

inline spartun::Scene random_scene(spartun::Rng& rng, const std::string& id) {
  static const char* labels[] = {"chair", "table", "lamp",
                                 "shelf", "plant", "box"};
  static const char* colors[] = {"red", "blue", "green", "white", "black"};
  static const char* affs[] = {"sitting", "reading", "storing", "lighting"};

  spartun::Scene scene;
  scene.id = id;
  const size_t n = 4 + rng.pick(5);
  std::map<std::string, int> counts;
  for (size_t i = 0; i < n; ++i) {
    spartun::Object3D o;
    o.label = labels[rng.pick(6)];
    o.id = o.label + "_" + std::to_string(++counts[o.label]);
    o.obb.center = {rng.uniform() * 8.0 - 4.0, rng.uniform() * 8.0 - 4.0,
                    0.2 + rng.uniform() * 1.6};
    o.obb.extents = {0.1 + rng.uniform() * 0.7, 0.1 + rng.uniform() * 0.7,
                     0.1 + rng.uniform() * 0.7};
    o.obb.yaw = rng.uniform() * 360.0;
    if (rng.pick(2) == 0) o.attributes["color"] = colors[rng.pick(5)];
    if (rng.pick(2) == 0) o.affordances.push_back(affs[rng.pick(4)]);
    scene.objects.push_back(std::move(o));
  }
  return scene;
}

inline spartun::geom::Vec2 rotate_about(const spartun::geom::Vec2& p,
                                        const spartun::geom::Vec2& pivot,
                                        double deg) {
  const double rad = deg * M_PI / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  const double dx = p.x - pivot.x;
  const double dy = p.y - pivot.y;
  return {pivot.x + c * dx - s * dy, pivot.y + s * dx + c * dy};
}

// Rigid rotation of the whole scene about `pivot` by `deg` degrees.
inline spartun::Scene rotated(const spartun::Scene& scene,
                              const spartun::geom::Vec2& pivot, double deg) {
  spartun::Scene out = scene;
  for (auto& o : out.objects) {
    const auto c = rotate_about(o.obb.center.xy(), pivot, deg);
    o.obb.center.x = c.x;
    o.obb.center.y = c.y;
    o.obb.yaw = spartun::geom::normalize_deg(o.obb.yaw + deg);
  }
  return out;
}

}  // namespace fixtures

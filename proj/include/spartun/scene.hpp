#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spartun/geometry.hpp"

namespace spartun {

// Oriented bounding box. Extents are half-lengths; yaw rotates the box
// about the vertical axis and is normalized to [0, 360).
struct Obb3D {
  geom::Vec3 center;
  geom::Vec3 extents;
  double yaw = 0.0;

  std::array<geom::Vec2, 4> corners2d() const;
};

struct Object3D {
  std::string id;  // "<label>_<integer>"
  std::string label;
  Obb3D obb;
  std::map<std::string, std::string> attributes;
  std::vector<std::string> affordances;
  std::vector<std::string> relations;
};

struct Scene {
  std::string id;
  std::vector<Object3D> objects;

  const Object3D* find(const std::string& object_id) const;
  const Object3D& at(const std::string& object_id) const;  // throws UnknownIdError
};

// Labels never eligible as pivots (standing beside the floor makes no sense).
const std::set<std::string>& default_excluded_pivot_labels();
// Labels that never block a path (passby ignores them).
const std::set<std::string>& default_non_obstacle_labels();

Scene load_scene(std::string_view json_text);
Scene load_scene_file(const std::string& path);
std::string serialize_scene(const Scene& scene);

// Relation strings that reference ids absent from the scene; reported, not
// fatal.
std::vector<std::string> dangling_relations(const Scene& scene);

// Axis-aligned hull of the object's four projected OBB corners.
geom::Rect2D footprint2d(const Object3D& object);

// Mean of all footprint centers.
geom::Vec2 scene_center(const Scene& scene);

// Ids whose OBB center z is strictly below the scene-average center z and
// whose label is not excluded. Throws EmptyResultError when none qualify.
std::vector<std::string> eligible_pivots(const Scene& scene,
                                         const std::set<std::string>& excluded_labels);

// Exact test of the segment against the object's oriented footprint,
// evaluated in the box's local frame.
bool segment_hits_object(const geom::Vec2& a, const geom::Vec2& b,
                         const Object3D& object);

// Objects whose footprint intersects the segment from `stand` to the
// target's footprint center, nearest first. Excludes the target itself,
// the ids in `excluded`, and non-obstacle labels.
std::vector<std::string> passby_objects(
    const Scene& scene, const geom::Vec2& stand, const std::string& target_id,
    const std::set<std::string>& excluded = {},
    const std::set<std::string>& non_obstacle_labels =
        default_non_obstacle_labels());

// Converts a 3RScan semantic-segmentation dump ("segGroups" with centroid /
// axesLengths / normalizedAxes OBBs) into the normalized scene schema.
Scene ingest_3rscan(std::string_view semseg_json, const std::string& scene_id);

}  // namespace spartun

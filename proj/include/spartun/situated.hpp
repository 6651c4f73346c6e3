#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spartun/scene.hpp"

namespace spartun {

// Deterministic random stream. One stream per situation, derived from
// (master seed, scene id, situation index) so worker order never affects
// output.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static Rng derive(uint64_t master_seed, const std::string& scene_id,
                    uint64_t situation_index);

  uint64_t next() { return eng_(); }
  // Uniform index in [0, n). Deterministic across platforms.
  size_t pick(size_t n);
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 eng_;
};

struct SituatedConfig {
  std::set<std::string> excluded_pivot_labels = default_excluded_pivot_labels();
  std::set<std::string> non_obstacle_labels = default_non_obstacle_labels();
  double stand_outward_offset = 0.0;
  bool full_3d_distance = false;
  size_t max_objects_per_direction = 5;  // description cap
};

struct Situation {
  std::string pivot_id;
  std::string referent_id;
  geom::Vec3 stand;  // z = 0
  double yaw = 0.0;
  geom::Quaternion orientation;
  geom::DirectionBin referent_direction = geom::DirectionBin::Front;
  std::string description;

  std::string digest() const;
};

struct SituatedObjectRecord {
  std::string object_id;
  std::string label;
  double distance = 0.0;
  double angle = 0.0;
  geom::DirectionBin direction = geom::DirectionBin::Front;
  std::vector<std::string> passby;
  std::map<std::string, std::string> attributes;
  std::vector<std::string> affordances;
  std::vector<std::string> relations;
};

struct SituatedSceneGraph {
  std::string scene_id;
  std::string pivot_label;
  Situation situation;
  // Distance-ascending record lists, one bucket per direction.
  std::map<geom::DirectionBin, std::vector<SituatedObjectRecord>> buckets;

  std::vector<const SituatedObjectRecord*> all_records() const;
  const SituatedObjectRecord* find(const std::string& object_id) const;
};

struct ObjectDescription {
  std::string object_id;
  std::string text;
};

Situation sample_situation(const Scene& scene, Rng& rng,
                           const SituatedConfig& config = {});

SituatedSceneGraph build_situated_graph(const Scene& scene,
                                        const Situation& situation,
                                        const SituatedConfig& config = {});

ObjectDescription situated_description(const Scene& scene,
                                       const std::string& object_id,
                                       const SituatedConfig& config = {});

// Deterministic JSON with direction keys "Left","Right","Front","Backwards".
std::string graph_to_json(const SituatedSceneGraph& graph);

std::string situation_to_json(const Situation& situation);

// Side midpoints of a rectangle, order: bottom, top, left, right.
std::array<geom::Vec2, 4> side_midpoints(const geom::Rect2D& rect);

// The two side midpoints closest to `toward`, ranked nearest first.
std::array<geom::Vec2, 2> closest_side_midpoints(const geom::Rect2D& rect,
                                                 const geom::Vec2& toward);

double round2(double v);

}  // namespace spartun

#include "spartun/situated.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace spartun {

using nlohmann::ordered_json;

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt_fixed(double v, int decimals) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(decimals);
  ss << v;
  return ss.str();
}

}  // namespace

Rng Rng::derive(uint64_t master_seed, const std::string& scene_id,
                uint64_t situation_index) {
  uint64_t seed = splitmix64(master_seed ^ splitmix64(fnv1a(scene_id)) ^
                             splitmix64(situation_index * 0x9e3779b97f4a7c15ULL));
  return Rng(seed);
}

size_t Rng::pick(size_t n) {
  if (n == 0) throw RangeError("Rng::pick on empty range");
  return static_cast<size_t>(eng_() % n);
}

double round2(double v) {
  double r = std::round(v * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;  // avoid -0
}

std::string Situation::digest() const {
  return pivot_id + "|" + referent_id + "|" + fmt_fixed(stand.x, 4) + "," +
         fmt_fixed(stand.y, 4) + "|" + fmt_fixed(yaw, 4);
}

std::array<geom::Vec2, 4> side_midpoints(const geom::Rect2D& rect) {
  const geom::Vec2 c = rect.center();
  return {geom::Vec2{c.x, rect.lo.y}, geom::Vec2{c.x, rect.hi.y},
          geom::Vec2{rect.lo.x, c.y}, geom::Vec2{rect.hi.x, c.y}};
}

std::array<geom::Vec2, 2> closest_side_midpoints(const geom::Rect2D& rect,
                                                 const geom::Vec2& toward) {
  auto mids = side_midpoints(rect);
  std::array<std::pair<double, int>, 4> ranked;
  for (int i = 0; i < 4; ++i) {
    ranked[i] = {(mids[i] - toward).norm(), i};
  }
  std::sort(ranked.begin(), ranked.end());
  return {mids[ranked[0].second], mids[ranked[1].second]};
}

std::vector<const SituatedObjectRecord*> SituatedSceneGraph::all_records()
    const {
  std::vector<const SituatedObjectRecord*> out;
  for (const auto& [bin, records] : buckets) {
    for (const auto& r : records) out.push_back(&r);
  }
  return out;
}

const SituatedObjectRecord* SituatedSceneGraph::find(
    const std::string& object_id) const {
  for (const auto& [bin, records] : buckets) {
    for (const auto& r : records) {
      if (r.object_id == object_id) return &r;
    }
  }
  return nullptr;
}

namespace {

geom::Vec2 apply_outward_offset(const geom::Vec2& mid, const geom::Rect2D& fp,
                                double offset) {
  if (offset == 0.0) return mid;
  const geom::Vec2 c = fp.center();
  geom::Vec2 dir = mid - c;
  const double n = dir.norm();
  if (n == 0.0) return mid;
  return mid + dir * (offset / n);
}

std::string render_situation_description(const std::string& pivot_label,
                                         const std::string& referent_label,
                                         geom::DirectionBin direction) {
  return "You are standing beside the " + pivot_label + ", and there is a " +
         referent_label + " on the " + geom::direction_word(direction) + ".";
}

}  // namespace

Situation sample_situation(const Scene& scene, Rng& rng,
                           const SituatedConfig& config) {
  std::vector<std::string> pivots;
  try {
    pivots = eligible_pivots(scene, config.excluded_pivot_labels);
  } catch (const EmptyResultError&) {
    throw NoEligiblePivotError("no eligible pivot in scene " + scene.id);
  }
  const geom::Vec2 center = scene_center(scene);

  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::string& pivot_id = pivots[rng.pick(pivots.size())];
    const Object3D& pivot = scene.at(pivot_id);
    const geom::Rect2D fp = footprint2d(pivot);
    const geom::Vec2 pivot_center = fp.center();

    auto candidates = closest_side_midpoints(fp, center);
    geom::Vec2 stand = apply_outward_offset(candidates[rng.pick(2)], fp,
                                            config.stand_outward_offset);
    if (stand.x == pivot_center.x && stand.y == pivot_center.y) continue;

    std::vector<const Object3D*> others;
    for (const auto& o : scene.objects) {
      if (o.id != pivot_id) others.push_back(&o);
    }
    const Object3D* referent = others[rng.pick(others.size())];
    const geom::Vec2 ref_center = footprint2d(*referent).center();
    if (ref_center.x == stand.x && ref_center.y == stand.y) continue;

    Situation s;
    s.pivot_id = pivot_id;
    s.referent_id = referent->id;
    s.stand = {stand.x, stand.y, 0.0};
    s.yaw = geom::facing_yaw(stand, pivot_center);
    s.orientation = geom::yaw_to_quaternion(s.yaw);
    s.referent_direction = geom::classify_direction(
        geom::rotation_angle(stand, pivot_center, ref_center));
    s.description = render_situation_description(pivot.label, referent->label,
                                                 s.referent_direction);
    return s;
  }
  throw DegenerateGeometryError(
      "could not sample a non-degenerate situation in scene " + scene.id);
}

SituatedSceneGraph build_situated_graph(const Scene& scene,
                                        const Situation& situation,
                                        const SituatedConfig& config) {
  const Object3D& pivot = scene.at(situation.pivot_id);
  scene.at(situation.referent_id);  // validate
  const geom::Vec2 stand = situation.stand.xy();
  const geom::Vec2 pivot_center = footprint2d(pivot).center();

  SituatedSceneGraph graph;
  graph.scene_id = scene.id;
  graph.pivot_label = pivot.label;
  graph.situation = situation;
  for (auto bin : {geom::DirectionBin::Front, geom::DirectionBin::Right,
                   geom::DirectionBin::Back, geom::DirectionBin::Left}) {
    graph.buckets[bin];  // every bucket present, possibly empty
  }

  for (const auto& o : scene.objects) {
    if (o.id == situation.pivot_id) continue;
    SituatedObjectRecord rec;
    rec.object_id = o.id;
    rec.label = o.label;
    const geom::Vec2 obj_center = footprint2d(o).center();
    if (obj_center.x == stand.x && obj_center.y == stand.y) {
      rec.angle = 0.0;
    } else {
      rec.angle = geom::rotation_angle(stand, pivot_center, obj_center);
    }
    rec.direction = geom::classify_direction(rec.angle);
    if (config.full_3d_distance) {
      rec.distance = geom::euclid_dist(situation.stand, o.obb.center);
    } else {
      rec.distance = geom::euclid_dist({stand.x, stand.y, 0.0},
                                       {o.obb.center.x, o.obb.center.y, 0.0});
    }
    rec.passby = passby_objects(scene, stand, o.id, {situation.pivot_id},
                                config.non_obstacle_labels);
    rec.attributes = o.attributes;
    rec.affordances = o.affordances;
    rec.relations = o.relations;
    graph.buckets[rec.direction].push_back(std::move(rec));
  }

  for (auto& [bin, records] : graph.buckets) {
    std::sort(records.begin(), records.end(),
              [](const SituatedObjectRecord& a, const SituatedObjectRecord& b) {
                if (a.distance != b.distance) return a.distance < b.distance;
                return a.object_id < b.object_id;
              });
  }
  return graph;
}

ObjectDescription situated_description(const Scene& scene,
                                       const std::string& object_id,
                                       const SituatedConfig& config) {
  const Object3D& target = scene.at(object_id);
  const geom::Rect2D fp = footprint2d(target);
  const geom::Vec2 target_center = fp.center();
  geom::Vec2 stand;
  try {
    stand = closest_side_midpoints(fp, scene_center(scene))[0];
  } catch (const EmptyResultError&) {
    stand = {fp.lo.x, target_center.y};
  }
  if (stand.x == target_center.x && stand.y == target_center.y) {
    stand = {fp.lo.x - 0.5, target_center.y};
  }

  struct Nearby {
    double distance;
    const Object3D* object;
  };
  std::map<geom::DirectionBin, std::vector<Nearby>> by_dir;
  for (const auto& o : scene.objects) {
    if (o.id == object_id) continue;
    const geom::Vec2 c = footprint2d(o).center();
    if (c.x == stand.x && c.y == stand.y) continue;
    const double angle = geom::rotation_angle(stand, target_center, c);
    by_dir[geom::classify_direction(angle)].push_back(
        {(c - stand).norm(), &o});
  }

  auto list_text = [&](geom::DirectionBin bin) {
    auto it = by_dir.find(bin);
    if (it == by_dir.end() || it->second.empty()) {
      return std::string("there are no objects");
    }
    auto& v = it->second;
    std::sort(v.begin(), v.end(), [](const Nearby& a, const Nearby& b) {
      if (a.distance != b.distance) return a.distance < b.distance;
      return a.object->id < b.object->id;
    });
    const size_t n = std::min(v.size(), config.max_objects_per_direction);
    std::string out = "there ";
    out += (n == 1 ? "is " : "are ");
    for (size_t i = 0; i < n; ++i) {
      if (i > 0) out += (i + 1 == n ? " and " : ", ");
      out += "a ";
      auto color = v[i].object->attributes.find("color");
      if (color != v[i].object->attributes.end()) {
        out += color->second + " ";
      }
      out += v[i].object->label;
    }
    return out;
  };

  ObjectDescription desc;
  desc.object_id = object_id;
  desc.text = "Stand besides " + target.label + " and facing the center of the " +
              target.label + ", in front, " +
              list_text(geom::DirectionBin::Front) + "; on the right, " +
              list_text(geom::DirectionBin::Right) + "; behind, " +
              list_text(geom::DirectionBin::Back) + "; and on the left, " +
              list_text(geom::DirectionBin::Left) + ".";
  return desc;
}

std::string graph_to_json(const SituatedSceneGraph& graph) {
  // Key order and 2-decimal rounding are part of the byte-stable contract.
  ordered_json root;
  const std::pair<geom::DirectionBin, const char*> keys[] = {
      {geom::DirectionBin::Left, "Left"},
      {geom::DirectionBin::Right, "Right"},
      {geom::DirectionBin::Front, "Front"},
      {geom::DirectionBin::Back, "Backwards"},
  };
  for (const auto& [bin, key] : keys) {
    ordered_json bucket = ordered_json::object();
    auto it = graph.buckets.find(bin);
    if (it != graph.buckets.end()) {
      for (const auto& rec : it->second) {
        ordered_json jr;
        jr["distance"] = round2(rec.distance);
        jr["passby"] = rec.passby;
        jr["affordances"] = rec.affordances;
        jr["attributes"] = ordered_json::object();
        for (const auto& [k, v] : rec.attributes) jr["attributes"][k] = v;
        jr["angle"] = round2(rec.angle);
        jr["relations"] = rec.relations;
        bucket[rec.object_id] = std::move(jr);
      }
    }
    root[key] = std::move(bucket);
  }
  return root.dump();
}

std::string situation_to_json(const Situation& situation) {
  ordered_json j;
  j["description"] = situation.description;
  j["stand"] = {situation.stand.x, situation.stand.y, 0.0};
  j["quaternion"] = {situation.orientation.qx, situation.orientation.qy,
                     situation.orientation.qz, situation.orientation.w};
  j["pivot_id"] = situation.pivot_id;
  j["referent_id"] = situation.referent_id;
  return j.dump();
}

}  // namespace spartun

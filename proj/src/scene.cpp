#include "spartun/scene.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spartun {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError("missing field: " + path + "." + key);
  }
  return *it;
}

geom::Vec3 read_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
      !j[1].is_number() || !j[2].is_number()) {
    throw SchemaError("expected 3-number array at " + path);
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

bool id_matches_label(const std::string& id, const std::string& label) {
  if (id.size() < label.size() + 2) return false;
  if (id.compare(0, label.size(), label) != 0) return false;
  if (id[label.size()] != '_') return false;
  for (size_t i = label.size() + 1; i < id.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return false;
  }
  return true;
}

}  // namespace

std::array<geom::Vec2, 4> Obb3D::corners2d() const {
  const double rad = yaw * 3.14159265358979323846 / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  std::array<geom::Vec2, 4> out;
  int n = 0;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const double lx = sx * extents.x;
      const double ly = sy * extents.y;
      out[n++] = {center.x + c * lx - s * ly, center.y + s * lx + c * ly};
    }
  }
  return out;
}

const Object3D* Scene::find(const std::string& object_id) const {
  for (const auto& o : objects) {
    if (o.id == object_id) return &o;
  }
  return nullptr;
}

const Object3D& Scene::at(const std::string& object_id) const {
  const Object3D* o = find(object_id);
  if (!o) throw UnknownIdError("unknown object id: " + object_id);
  return *o;
}

const std::set<std::string>& default_excluded_pivot_labels() {
  static const std::set<std::string> labels{"floor", "ceiling", "wall"};
  return labels;
}

const std::set<std::string>& default_non_obstacle_labels() {
  static const std::set<std::string> labels{"floor", "ceiling"};
  return labels;
}

Scene load_scene(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("top level must be an object");

  Scene scene;
  const json& jid = require(doc, "id", "$");
  if (!jid.is_string()) throw SchemaError("$.id must be a string");
  scene.id = jid.get<std::string>();

  const json& jobjects = require(doc, "objects", "$");
  if (!jobjects.is_array()) throw SchemaError("$.objects must be an array");

  std::set<std::string> seen_ids;
  for (size_t i = 0; i < jobjects.size(); ++i) {
    const std::string path = "$.objects[" + std::to_string(i) + "]";
    const json& jo = jobjects[i];
    if (!jo.is_object()) throw SchemaError(path + " must be an object");

    Object3D obj;
    const json& oid = require(jo, "id", path);
    if (!oid.is_string()) throw SchemaError(path + ".id must be a string");
    obj.id = oid.get<std::string>();
    const json& olabel = require(jo, "label", path);
    if (!olabel.is_string()) throw SchemaError(path + ".label must be a string");
    obj.label = olabel.get<std::string>();

    const json& jobb = require(jo, "obb", path);
    obj.obb.center = read_vec3(require(jobb, "center", path + ".obb"),
                               path + ".obb.center");
    obj.obb.extents = read_vec3(require(jobb, "extents", path + ".obb"),
                                path + ".obb.extents");
    const json& jyaw = require(jobb, "yaw", path + ".obb");
    if (!jyaw.is_number()) throw SchemaError(path + ".obb.yaw must be a number");
    obj.obb.yaw = geom::normalize_deg(jyaw.get<double>());

    if (auto it = jo.find("attributes"); it != jo.end()) {
      if (!it->is_object()) throw SchemaError(path + ".attributes must be an object");
      for (auto& [k, v] : it->items()) {
        if (!v.is_string()) throw SchemaError(path + ".attributes." + k + " must be a string");
        obj.attributes[k] = v.get<std::string>();
      }
    }
    if (auto it = jo.find("affordances"); it != jo.end()) {
      if (!it->is_array()) throw SchemaError(path + ".affordances must be an array");
      for (const auto& v : *it) obj.affordances.push_back(v.get<std::string>());
    }
    if (auto it = jo.find("relations"); it != jo.end()) {
      if (!it->is_array()) throw SchemaError(path + ".relations must be an array");
      for (const auto& v : *it) obj.relations.push_back(v.get<std::string>());
    }

    if (obj.obb.extents.x <= 0.0 || obj.obb.extents.y <= 0.0 ||
        obj.obb.extents.z <= 0.0) {
      throw ValidationError("non-positive extent on object " + obj.id);
    }
    if (!id_matches_label(obj.id, obj.label)) {
      throw ValidationError("object id '" + obj.id +
                            "' does not follow <label>_<integer> for label '" +
                            obj.label + "'");
    }
    if (!seen_ids.insert(obj.id).second) {
      throw ValidationError("duplicate object id: " + obj.id);
    }
    scene.objects.push_back(std::move(obj));
  }
  if (scene.objects.size() < 2) {
    throw ValidationError("scene must contain at least 2 objects");
  }
  return scene;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scene file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scene(ss.str());
}

std::string serialize_scene(const Scene& scene) {
  ordered_json doc;
  doc["id"] = scene.id;
  doc["objects"] = ordered_json::array();
  for (const auto& o : scene.objects) {
    ordered_json jo;
    jo["id"] = o.id;
    jo["label"] = o.label;
    jo["obb"] = {{"center", {o.obb.center.x, o.obb.center.y, o.obb.center.z}},
                 {"extents", {o.obb.extents.x, o.obb.extents.y, o.obb.extents.z}},
                 {"yaw", o.obb.yaw}};
    jo["attributes"] = ordered_json::object();
    for (const auto& [k, v] : o.attributes) jo["attributes"][k] = v;
    jo["affordances"] = o.affordances;
    jo["relations"] = o.relations;
    doc["objects"].push_back(std::move(jo));
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> dangling_relations(const Scene& scene) {
  std::set<std::string> ids;
  for (const auto& o : scene.objects) ids.insert(o.id);
  std::vector<std::string> report;
  for (const auto& o : scene.objects) {
    for (const auto& rel : o.relations) {
      // A relation mentions another object by id somewhere in its text.
      bool mentions_known = false;
      for (const auto& id : ids) {
        if (rel.find(id) != std::string::npos) {
          mentions_known = true;
          break;
        }
      }
      if (!mentions_known) {
        report.push_back(o.id + ": relation references no known id: " + rel);
      }
    }
  }
  return report;
}

geom::Rect2D footprint2d(const Object3D& object) {
  const auto corners = object.obb.corners2d();
  geom::Rect2D r{{corners[0].x, corners[0].y}, {corners[0].x, corners[0].y}};
  for (const auto& c : corners) {
    r.lo.x = std::min(r.lo.x, c.x);
    r.lo.y = std::min(r.lo.y, c.y);
    r.hi.x = std::max(r.hi.x, c.x);
    r.hi.y = std::max(r.hi.y, c.y);
  }
  return r;
}

geom::Vec2 scene_center(const Scene& scene) {
  if (scene.objects.empty()) throw EmptyResultError("scene has no objects");
  geom::Vec2 sum;
  for (const auto& o : scene.objects) {
    sum = sum + footprint2d(o).center();
  }
  const double n = static_cast<double>(scene.objects.size());
  return {sum.x / n, sum.y / n};
}

std::vector<std::string> eligible_pivots(
    const Scene& scene, const std::set<std::string>& excluded_labels) {
  double avg_z = 0.0;
  for (const auto& o : scene.objects) avg_z += o.obb.center.z;
  avg_z /= static_cast<double>(scene.objects.size());

  std::vector<std::string> out;
  for (const auto& o : scene.objects) {
    if (o.obb.center.z < avg_z && !excluded_labels.count(o.label)) {
      out.push_back(o.id);
    }
  }
  if (out.empty()) throw EmptyResultError("no eligible pivot in scene " + scene.id);
  return out;
}

bool segment_hits_object(const geom::Vec2& a, const geom::Vec2& b,
                         const Object3D& object) {
  // Rotate the segment into the box frame and use the axis-aligned test.
  const double rad = -object.obb.yaw * 3.14159265358979323846 / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  auto local = [&](const geom::Vec2& p) {
    const double dx = p.x - object.obb.center.x;
    const double dy = p.y - object.obb.center.y;
    return geom::Vec2{c * dx - s * dy, s * dx + c * dy};
  };
  const geom::Rect2D box{{-object.obb.extents.x, -object.obb.extents.y},
                         {object.obb.extents.x, object.obb.extents.y}};
  return geom::segment_intersects_rect(local(a), local(b), box);
}

std::vector<std::string> passby_objects(
    const Scene& scene, const geom::Vec2& stand, const std::string& target_id,
    const std::set<std::string>& excluded,
    const std::set<std::string>& non_obstacle_labels) {
  const Object3D& target = scene.at(target_id);
  const geom::Vec2 goal = footprint2d(target).center();

  std::vector<std::pair<double, std::string>> hits;
  for (const auto& o : scene.objects) {
    if (o.id == target_id || excluded.count(o.id) ||
        non_obstacle_labels.count(o.label)) {
      continue;
    }
    if (segment_hits_object(stand, goal, o)) {
      const double d = (footprint2d(o).center() - stand).norm();
      hits.emplace_back(d, o.id);
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (auto& [d, id] : hits) out.push_back(std::move(id));
  return out;
}

Scene ingest_3rscan(std::string_view semseg_json, const std::string& scene_id) {
  json doc;
  try {
    doc = json::parse(semseg_json);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  auto groups = doc.find("segGroups");
  if (groups == doc.end() || !groups->is_array()) {
    throw SchemaError("missing field: $.segGroups");
  }

  Scene scene;
  scene.id = scene_id;
  std::map<std::string, int> label_counts;
  for (const auto& g : *groups) {
    Object3D obj;
    obj.label = g.value("label", std::string("object"));
    int index = g.value("objectId", -1);
    if (index < 0) index = ++label_counts[obj.label];
    obj.id = obj.label + "_" + std::to_string(index);

    const json& jobb = require(g, "obb", "$.segGroups[]");
    obj.obb.center = read_vec3(require(jobb, "centroid", "$.segGroups[].obb"),
                               "centroid");
    const geom::Vec3 lengths = read_vec3(
        require(jobb, "axesLengths", "$.segGroups[].obb"), "axesLengths");
    obj.obb.extents = {std::max(lengths.x / 2.0, 1e-6),
                       std::max(lengths.y / 2.0, 1e-6),
                       std::max(lengths.z / 2.0, 1e-6)};
    if (auto axes = jobb.find("normalizedAxes");
        axes != jobb.end() && axes->is_array() && axes->size() == 9) {
      const double ax = (*axes)[0].get<double>();
      const double ay = (*axes)[1].get<double>();
      obj.obb.yaw = geom::normalize_deg(std::atan2(ay, ax) * 180.0 /
                                        3.14159265358979323846);
    }
    if (auto attrs = g.find("attributes"); attrs != g.end() && attrs->is_object()) {
      for (auto& [k, v] : attrs->items()) {
        if (v.is_string()) obj.attributes[k] = v.get<std::string>();
      }
    }
    if (auto aff = g.find("affordances"); aff != g.end() && aff->is_array()) {
      for (const auto& v : *aff) obj.affordances.push_back(v.get<std::string>());
    }
    scene.objects.push_back(std::move(obj));
  }
  if (scene.objects.size() < 2) {
    throw ValidationError("scene must contain at least 2 objects");
  }
  return scene;
}

}  // namespace spartun

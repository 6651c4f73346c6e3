#include "spartun/geometry.hpp"

#include <algorithm>

namespace spartun::geom {

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }
}  // namespace

const char* to_string(DirectionBin bin) {
  switch (bin) {
    case DirectionBin::Front:
      return "Front";
    case DirectionBin::Right:
      return "Right";
    case DirectionBin::Back:
      return "Back";
    case DirectionBin::Left:
      return "Left";
  }
  return "?";
}

const char* direction_word(DirectionBin bin) {
  switch (bin) {
    case DirectionBin::Front:
      return "front";
    case DirectionBin::Right:
      return "right";
    case DirectionBin::Back:
      return "backward";
    case DirectionBin::Left:
      return "left";
  }
  return "?";
}

DirectionBin clockwise_next(DirectionBin bin) {
  switch (bin) {
    case DirectionBin::Front:
      return DirectionBin::Right;
    case DirectionBin::Right:
      return DirectionBin::Back;
    case DirectionBin::Back:
      return DirectionBin::Left;
    case DirectionBin::Left:
      return DirectionBin::Front;
  }
  return DirectionBin::Front;
}

double normalize_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative can round to 360 exactly.
  if (r >= 360.0) r = 0.0;
  return r;
}

double ccw_angle(const Vec2& from, const Vec2& to) {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  if (dx == 0.0 && dy == 0.0) {
    throw DegenerateError("ccw_angle: coincident points");
  }
  return normalize_deg(rad2deg(std::atan2(dy, dx)));
}

double rotation_angle(const Vec2& stand, const Vec2& facing_point,
                      const Vec2& object_center) {
  const double to_facing = ccw_angle(stand, facing_point);
  const double to_object = ccw_angle(stand, object_center);
  return normalize_deg(to_facing - to_object);
}

DirectionBin classify_direction(double angle_deg) {
  if (!(angle_deg >= 0.0 && angle_deg < 360.0)) {
    throw RangeError("classify_direction: angle outside [0,360): " +
                     std::to_string(angle_deg));
  }
  if (angle_deg < 45.0 || angle_deg >= 315.0) return DirectionBin::Front;
  if (angle_deg < 135.0) return DirectionBin::Right;
  if (angle_deg < 225.0) return DirectionBin::Back;
  return DirectionBin::Left;
}

double euclid_dist(const Vec3& p, const Vec3& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect2D& rect) {
  // Liang-Barsky clipping of the parametric segment against the slab pair.
  double t0 = 0.0, t1 = 1.0;
  const double d[2] = {b.x - a.x, b.y - a.y};
  const double p0[2] = {a.x, a.y};
  const double lo[2] = {rect.lo.x, rect.lo.y};
  const double hi[2] = {rect.hi.x, rect.hi.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (p0[axis] < lo[axis] || p0[axis] > hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - p0[axis]) / d[axis];
    double tb = (hi[axis] - p0[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

std::vector<std::vector<SpatialFeature>> pairwise_features(
    const std::vector<Vec3>& centers) {
  const size_t k = centers.size();
  std::vector<std::vector<SpatialFeature>> out(
      k, std::vector<SpatialFeature>(k));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      SpatialFeature f;
      const Vec3& p = centers[i];
      const Vec3& q = centers[j];
      f.d = euclid_dist(p, q);
      const double dx = q.x - p.x;
      const double dy = q.y - p.y;
      const double dz = q.z - p.z;
      const double dh = std::hypot(dx, dy);
      if (dh > 0.0) {
        const double th = std::atan2(dy, dx);
        f.sin_h = std::sin(th);
        f.cos_h = std::cos(th);
        const double tv = std::atan2(dz, dh);
        f.sin_v = std::sin(tv);
        f.cos_v = std::cos(tv);
      } else if (dz != 0.0) {
        // Vertical stack: horizontal angle degenerate, vertical +-90.
        f.sin_h = 0.0;
        f.cos_h = 1.0;
        f.sin_v = dz > 0.0 ? 1.0 : -1.0;
        f.cos_v = 0.0;
      }
      out[i][j] = f;
    }
  }
  return out;
}

Quaternion yaw_to_quaternion(double yaw_deg) {
  const double half = deg2rad(yaw_deg) / 2.0;
  return Quaternion{0.0, 0.0, std::sin(half), std::cos(half)};
}

double facing_yaw(const Vec2& from, const Vec2& to) {
  const double a = ccw_angle(from, to) - 90.0;  // reference axis is +y
  double r = normalize_deg(a);
  return r > 180.0 ? r - 360.0 : r;
}

}  // namespace spartun::geom

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "spartun/errors.hpp"

namespace spartun::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec2 xy() const { return {x, y}; }
};

// Axis-aligned rectangle, min <= max componentwise.
struct Rect2D {
  Vec2 lo;
  Vec2 hi;

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  Vec2 center() const { return {(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0}; }
  bool contains(const Vec2& p, double tol = 0.0) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
           p.y <= hi.y + tol;
  }
};

enum class DirectionBin { Front, Right, Back, Left };

const char* to_string(DirectionBin bin);
// Lowercase word used in situation descriptions: front/right/backward/left.
const char* direction_word(DirectionBin bin);
DirectionBin clockwise_next(DirectionBin bin);

struct SpatialFeature {
  double d = 0.0;
  double sin_h = 0.0;
  double cos_h = 1.0;
  double sin_v = 0.0;
  double cos_v = 1.0;
};

struct Quaternion {
  double qx = 0.0;
  double qy = 0.0;
  double qz = 0.0;
  double w = 1.0;
};

// Normalizes an angle in degrees into [0, 360).
double normalize_deg(double deg);

// Counterclockwise angle of (to - from) measured from the +x axis, in
// [0, 360). Throws DegenerateError when from == to.
double ccw_angle(const Vec2& from, const Vec2& to);

// Rotation the agent at `stand` facing `facing_point` must perform to face
// `object_center`; larger values mean further rightward. Range [0, 360).
double rotation_angle(const Vec2& stand, const Vec2& facing_point,
                      const Vec2& object_center);

// Front [315,360)u[0,45), Right [45,135), Back [135,225), Left [225,315).
// Boundary angles belong to the clockwise-next bin.
DirectionBin classify_direction(double angle_deg);

double euclid_dist(const Vec3& p, const Vec3& q);

// Closed segment against closed rectangle, slab clipping.
bool segment_intersects_rect(const Vec2& a, const Vec2& b, const Rect2D& rect);

// f_ij for every ordered pair of centers. Coincident pairs take the
// degenerate convention d=0, theta_h=0, theta_v=0; vertical stacks map
// theta_v to +-90 with theta_h=0.
std::vector<std::vector<SpatialFeature>> pairwise_features(
    const std::vector<Vec3>& centers);

// Rotation about the vertical axis. Yaw is measured counterclockwise from
// the world +y axis to the facing direction.
Quaternion yaw_to_quaternion(double yaw_deg);

// Yaw (same convention as above, in (-180, 180]) of the direction from
// `from` toward `to`.
double facing_yaw(const Vec2& from, const Vec2& to);

}  // namespace spartun::geom

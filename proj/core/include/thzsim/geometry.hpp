#ifndef THZSIM_GEOMETRY_HPP
#define THZSIM_GEOMETRY_HPP

#include <algorithm>
#include <cmath>

namespace thzsim {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Axis-aligned box, closed on all faces.
struct Box {
    Vec3 lo, hi;

    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
               p.z >= lo.z && p.z <= hi.z;
    }

    bool contains_interior(const Vec3& p) const {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y &&
               p.z > lo.z && p.z < hi.z;
    }

    bool overlaps_footprint(const Box& o) const {
        return lo.x < o.hi.x && o.lo.x < hi.x && lo.y < o.hi.y && o.lo.y < hi.y;
    }
};

/// True when the open segment (a, b) intersects the closed box (slab method).
/// A segment endpoint strictly inside the box counts as an intersection.
inline bool segment_intersects_box(const Vec3& a, const Vec3& b, const Box& box) {
    double t0 = 0.0, t1 = 1.0;
    const double d[3] = {b.x - a.x, b.y - a.y, b.z - a.z};
    const double p[3] = {a.x, a.y, a.z};
    const double lo[3] = {box.lo.x, box.lo.y, box.lo.z};
    const double hi[3] = {box.hi.x, box.hi.y, box.hi.z};
    for (int i = 0; i < 3; ++i) {
        if (d[i] == 0.0) {
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
            continue;
        }
        double ta = (lo[i] - p[i]) / d[i];
        double tb = (hi[i] - p[i]) / d[i];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    // open segment: require some of the overlap to fall strictly inside (0, 1)
    return t1 > 0.0 && t0 < 1.0;
}

}  // namespace thzsim

#endif
